//! Seeded system generation, wall-clock timing, and measurement records.
//!
//! Systems are built from a planted factorization L·U with a unit-lower L and
//! small bounded entries, so the pivots of the later solve equal U's diagonal
//! and the cost of every scalar operation stays O(1). Without that bound,
//! coefficient growth in exact arithmetic would contaminate any wall-clock
//! scaling measurement. The right-hand side is A·x* for a planted x*, which
//! doubles as a built-in correctness oracle for every timed run.

pub mod analysis;
pub mod rng;

pub use analysis::{
    alpha_table, estimate_alpha, mean_table, ratio_table, AlphaEstimate, AlphaRow, AnalysisError,
    MeanRow, RatioRow,
};
pub use rng::SplitMix64;

use std::fs::OpenOptions;
use std::io::{BufRead, Write};
use std::path::Path;
use std::time::Instant;

use num_traits::Zero;

use crate::band::{build_system, Backend, BandSystem, StorageKind};
use crate::scalar::{rational_to_f64, Rational};
use crate::solvers::{band_lu_symbolic, solve, solve_float, solve_with, Algorithm, SolveError};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid generation spec: {0}")]
    InvalidSpec(String),
    #[error("generation failed: no nonsingular system within {tried} seeds from {seed}")]
    GenerationFailed { seed: u64, tried: u32 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("timed solve did not reproduce the planted solution")]
    PlantedMismatch,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("CSV line {line}: {message}")]
    CsvFormat { line: usize, message: String },
}

/// Everything that pins down one generated system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub w: usize,
    pub seed: u64,
    pub backend: Backend,
    pub storage: StorageKind,
    /// 1-based pivot rows forced to exactly zero, in ascending order.
    pub zero_pivot_positions: Vec<usize>,
}

impl GenSpec {
    /// Plain scaling-run spec: exact or float, no forced zero pivots.
    pub fn plain(n: usize, w: usize, seed: u64, backend: Backend, storage: StorageKind) -> Self {
        GenSpec {
            n,
            w,
            seed,
            backend,
            storage,
            zero_pivot_positions: Vec::new(),
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::InvalidSpec(msg));
        if !(1..=3).contains(&self.w) {
            return bad(format!("half-bandwidth must be 1, 2, or 3, got {}", self.w));
        }
        if self.n < 2 * self.w + 1 {
            return bad(format!(
                "size {} is below the minimum {} for half-bandwidth {}",
                self.n,
                2 * self.w + 1,
                self.w
            ));
        }
        let mut prev = 0usize;
        for &p in &self.zero_pivot_positions {
            if p == 0 || p > self.n {
                return bad(format!("pivot position {p} is outside 1..={}", self.n));
            }
            if p <= prev {
                return bad(format!("pivot positions must be strictly ascending at {p}"));
            }
            prev = p;
        }
        if self.backend == Backend::Float && !self.zero_pivot_positions.is_empty() {
            return bad("zero-pivot injection requires the exact backend".into());
        }
        Ok(())
    }
}

/// A generated system together with its planted solution.
#[derive(Debug, Clone)]
pub enum Generated {
    Exact {
        system: BandSystem<Rational>,
        planted: Vec<Rational>,
    },
    Float {
        system: BandSystem<f64>,
        planted: Vec<f64>,
    },
}

impl Generated {
    pub fn n(&self) -> usize {
        match self {
            Generated::Exact { system, .. } => system.n(),
            Generated::Float { system, .. } => system.n(),
        }
    }

    pub fn w(&self) -> usize {
        match self {
            Generated::Exact { system, .. } => system.w(),
            Generated::Float { system, .. } => system.w(),
        }
    }

    pub fn storage(&self) -> StorageKind {
        match self {
            Generated::Exact { system, .. } => system.storage(),
            Generated::Float { system, .. } => system.storage(),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Generated::Exact { .. } => Backend::Exact,
            Generated::Float { .. } => Backend::Float,
        }
    }
}

/// Integer draws for one seed, in stream order: L sub-band row-major, U
/// diagonal, U super-band row-major, then the planted solution.
struct Drawn {
    /// `l_sub[d - 1][j]` is L\[j + d\]\[j\], length n − d.
    l_sub: Vec<Vec<i64>>,
    u_diag: Vec<i64>,
    /// `u_super[d - 1][i]` is U\[i\]\[i + d\], length n − d.
    u_super: Vec<Vec<i64>>,
    x_star: Vec<i64>,
}

fn draw(n: usize, w: usize, seed: u64) -> Drawn {
    let mut rng = SplitMix64::new(seed);
    let mut l_sub: Vec<Vec<i64>> = (1..=w).map(|d| vec![0; n - d]).collect();
    for i in 0..n {
        for j in i.saturating_sub(w)..i {
            l_sub[i - j - 1][j] = rng.range_i64(-3, 3);
        }
    }
    let u_diag: Vec<i64> = (0..n).map(|_| rng.range_i64(1, 3)).collect();
    let mut u_super: Vec<Vec<i64>> = (1..=w).map(|d| vec![0; n - d]).collect();
    for i in 0..n {
        for j in i + 1..=(i + w).min(n - 1) {
            u_super[j - i - 1][i] = rng.range_i64(-3, 3);
        }
    }
    let x_star: Vec<i64> = (0..n).map(|_| rng.range_i64(-5, 5)).collect();
    Drawn {
        l_sub,
        u_diag,
        u_super,
        x_star,
    }
}

/// A = L·U as integer diagonals ordered −w..w; the product of two bands of
/// half-bandwidth w at most doubles the bandwidth, but with L lower and U
/// upper the result stays within half-bandwidth w.
fn lu_product(n: usize, w: usize, d: &Drawn) -> Vec<Vec<i64>> {
    let l = |i: usize, k: usize| if i == k { 1 } else { d.l_sub[i - k - 1][k] };
    let u = |k: usize, j: usize| {
        if k == j {
            d.u_diag[k]
        } else {
            d.u_super[j - k - 1][k]
        }
    };
    let mut diags: Vec<Vec<i64>> = (0..=2 * w)
        .map(|slot| vec![0; n - slot.abs_diff(w)])
        .collect();
    for i in 0..n {
        for j in i.saturating_sub(w)..=(i + w).min(n - 1) {
            let mut s = 0i64;
            for k in i.max(j).saturating_sub(w)..=i.min(j) {
                s += l(i, k) * u(k, j);
            }
            diags[(j + w) - i][i.min(j)] = s;
        }
    }
    diags
}

fn matvec_i64(n: usize, w: usize, diags: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    (0..n)
        .map(|i| {
            let mut s = 0i64;
            for j in i.saturating_sub(w)..=(i + w).min(n - 1) {
                s += diags[(j + w) - i][i.min(j)] * x[j];
            }
            s
        })
        .collect()
}

fn matvec_rational(n: usize, w: usize, diags: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    (0..n)
        .map(|i| {
            let mut s = Rational::zero();
            for j in i.saturating_sub(w)..=(i + w).min(n - 1) {
                s += &diags[(j + w) - i][i.min(j)] * &x[j];
            }
            s
        })
        .collect()
}

fn big(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// One full construction attempt from one seed; `Err(())` means retry.
fn attempt(spec: &GenSpec, seed: u64, positions: &[usize]) -> Result<Generated, ()> {
    let (n, w) = (spec.n, spec.w);
    let drawn = draw(n, w, seed);
    let int_diags = lu_product(n, w, &drawn);

    if positions.is_empty() {
        let rhs_i = matvec_i64(n, w, &int_diags, &drawn.x_star);
        return Ok(match spec.backend {
            Backend::Exact => {
                let diagonals = int_diags
                    .iter()
                    .map(|d| d.iter().map(|&v| big(v)).collect())
                    .collect();
                let rhs = rhs_i.iter().map(|&v| big(v)).collect();
                let system = build_system(n, w, diagonals, rhs, spec.storage)
                    .expect("validated spec produces a well-formed system");
                let planted = drawn.x_star.iter().map(|&v| big(v)).collect();
                Generated::Exact { system, planted }
            }
            Backend::Float => {
                let diagonals = int_diags
                    .iter()
                    .map(|d| d.iter().map(|&v| v as f64).collect())
                    .collect();
                let rhs = rhs_i.iter().map(|&v| v as f64).collect();
                let system = build_system(n, w, diagonals, rhs, spec.storage)
                    .expect("validated spec produces a well-formed system");
                let planted = drawn.x_star.iter().map(|&v| v as f64).collect();
                Generated::Float { system, planted }
            }
        });
    }

    // Injection path, exact backend only. Subtracting the factorization's
    // current pivot value from a[i][i] zeroes pivot i exactly without
    // disturbing rows above, because pivot i never feeds entries with smaller
    // indices. Later pivots do shift, so positions are processed in
    // ascending order against the refactored matrix each time.
    let mut diags: Vec<Vec<Rational>> = int_diags
        .iter()
        .map(|d| d.iter().map(|&v| big(v)).collect())
        .collect();
    let x_star: Vec<Rational> = drawn.x_star.iter().map(|&v| big(v)).collect();
    for &pos in positions {
        let i0 = pos - 1;
        let mut probe = build_system(
            n,
            w,
            diags.clone(),
            vec![Rational::zero(); n],
            StorageKind::Fixed,
        )
        .expect("validated spec produces a well-formed system");
        let mut factors = band_lu_symbolic(&mut probe);
        let value = factors.u_at(i0, i0).eval_at_zero().map_err(|_| ())?;
        diags[w][i0] = &diags[w][i0] - &value;
    }
    let rhs = matvec_rational(n, w, &diags, &x_star);
    if n <= 1000 {
        let mut check = build_system(n, w, diags.clone(), rhs.clone(), StorageKind::Fixed)
            .expect("validated spec produces a well-formed system");
        solve(&mut check).map_err(|_| ())?;
    }
    let system = build_system(n, w, diags, rhs, spec.storage)
        .expect("validated spec produces a well-formed system");
    Ok(Generated::Exact {
        system,
        planted: x_star,
    })
}

/// Deterministic system construction from a seed.
///
/// Specs without forced zero pivots always succeed on the first seed. With
/// forced pivots, the adjusted matrix can come out singular (or its limit at
/// the substitution point can fail to exist); such seeds are discarded and
/// the next one is tried, up to 8 retries past the base seed. Systems with
/// n ≤ 1000 are verified nonsingular by an actual solve before being
/// returned.
pub fn generate_system(spec: &GenSpec) -> Result<Generated, BenchError> {
    spec.validate()?;
    let tries: u32 = if spec.zero_pivot_positions.is_empty() {
        1
    } else {
        9
    };
    for r in 0..tries {
        if let Ok(g) = attempt(spec, spec.seed.wrapping_add(r as u64), &spec.zero_pivot_positions)
        {
            return Ok(g);
        }
    }
    Err(BenchError::GenerationFailed {
        seed: spec.seed,
        tried: tries,
    })
}

/// One timed solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub storage: StorageKind,
    pub backend: Backend,
    pub n: usize,
    pub rep: usize,
    pub seconds: f64,
}

pub const CSV_HEADER: &str = "algorithm,storage,backend,n,rep,seconds";

impl BenchRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.9}",
            self.algorithm.as_str(),
            self.storage,
            self.backend,
            self.n,
            self.rep,
            self.seconds
        )
    }
}

/// Times `reps` fresh solves of one generated system.
///
/// Each repetition clones the system outside the timed region, times the
/// solve alone on the monotonic clock, and keeps the record only when the
/// computed solution equals the planted one. Runs are strictly sequential;
/// nothing else executes while the clock is running.
pub fn time_run(
    algorithm: Algorithm,
    generated: &Generated,
    reps: usize,
) -> Result<Vec<BenchRecord>, BenchError> {
    if reps == 0 {
        return Err(BenchError::InvalidSpec("reps must be at least 1".into()));
    }
    if generated.w() != algorithm.w() {
        return Err(BenchError::Solve(SolveError::BandwidthMismatch {
            expected: algorithm.w(),
            got: generated.w(),
        }));
    }
    let mut records = Vec::with_capacity(reps);
    for rep in 0..reps {
        let seconds = match generated {
            Generated::Exact { system, planted } => {
                let mut sys = system.clone();
                let start = Instant::now();
                let result = solve_with(algorithm, &mut sys)?;
                let seconds = start.elapsed().as_secs_f64();
                if &result.solution != planted {
                    return Err(BenchError::PlantedMismatch);
                }
                seconds
            }
            Generated::Float { system, planted } => {
                let mut sys = system.clone();
                let start = Instant::now();
                let result = solve_float(&mut sys)?;
                let seconds = start.elapsed().as_secs_f64();
                if &result.solution != planted {
                    return Err(BenchError::PlantedMismatch);
                }
                seconds
            }
        };
        records.push(BenchRecord {
            algorithm,
            storage: generated.storage(),
            backend: generated.backend(),
            n: generated.n(),
            rep,
            seconds,
        });
    }
    Ok(records)
}

/// Writes header plus one row per record and flushes.
pub fn write_csv<W: Write>(mut out: W, records: &[BenchRecord]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    out.flush()
}

/// Appends records to a CSV file, writing the header only when the file is
/// new or empty, and flushes so partial sweeps survive interruption.
pub fn append_csv(path: &Path, records: &[BenchRecord]) -> std::io::Result<()> {
    let needs_header = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    if needs_header {
        writeln!(file, "{CSV_HEADER}")?;
    }
    for r in records {
        writeln!(file, "{}", r.to_csv_row())?;
    }
    file.flush()
}

pub fn read_csv<R: BufRead>(reader: R) -> Result<Vec<BenchRecord>, BenchError> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != CSV_HEADER {
        return Err(BenchError::CsvFormat {
            line: 1,
            message: format!("expected header `{CSV_HEADER}`, got `{header}`"),
        });
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let number = idx + 2;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let fail = |message: String| BenchError::CsvFormat {
            line: number,
            message,
        };
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 6 {
            return Err(fail(format!("expected 6 fields, got {}", fields.len())));
        }
        let algorithm: Algorithm = fields[0].parse().map_err(fail)?;
        let storage: StorageKind = fields[1].parse().map_err(fail)?;
        let backend: Backend = fields[2].parse().map_err(fail)?;
        let n: usize = fields[3]
            .parse()
            .map_err(|e| fail(format!("bad n {:?}: {e}", fields[3])))?;
        let rep: usize = fields[4]
            .parse()
            .map_err(|e| fail(format!("bad rep {:?}: {e}", fields[4])))?;
        let seconds: f64 = fields[5]
            .parse()
            .map_err(|e| fail(format!("bad seconds {:?}: {e}", fields[5])))?;
        if !(seconds > 0.0) || !seconds.is_finite() {
            return Err(fail(format!("seconds must be positive, got {seconds}")));
        }
        records.push(BenchRecord {
            algorithm,
            storage,
            backend,
            n,
            rep,
            seconds,
        });
    }
    Ok(records)
}

/// Float image of an exact solution vector; exact when every entry is
/// representable, which holds for the integer-valued planted systems.
pub fn solution_to_f64(solution: &[Rational]) -> Vec<f64> {
    solution.iter().map(rational_to_f64).collect()
}
