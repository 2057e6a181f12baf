//! Shared helpers for the integration suites: a dense exact elimination
//! oracle and a dense shadow of the band-reduction sweeps. Both are written
//! against plain `Vec<Vec<Rational>>` grids so they share no code paths with
//! the band implementations they check.

#![allow(dead_code)]

use num_traits::{One, Zero};
use symband::{
    build_system, generate_system, BandSystem, Backend, GenSpec, Generated, Rational, StorageKind,
};

/// Dense copy of a band system, zero-filled outside the band.
pub fn dense_from_band(sys: &BandSystem<Rational>) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = sys.n();
    let w = sys.w() as isize;
    let mut a = vec![vec![Rational::zero(); n]; n];
    for offset in -w..=w {
        for (k, value) in sys.diagonal(offset).into_iter().enumerate() {
            let (row, col) = if offset >= 0 {
                (k, k + offset as usize)
            } else {
                (k + offset.unsigned_abs(), k)
            };
            a[row][col] = value;
        }
    }
    (a, sys.rhs_vec())
}

/// Exact system from a plain generation spec.
pub fn generated_exact(spec: &GenSpec) -> (BandSystem<Rational>, Vec<Rational>) {
    match generate_system(spec).unwrap() {
        Generated::Exact { system, planted } => (system, planted),
        Generated::Float { .. } => unreachable!("spec requested the exact backend"),
    }
}

/// Interior rows i and i+1 built to be equal: both are supported on their
/// common columns, with the entries that fall outside the overlap forced to
/// zero. The matrix is singular by construction.
pub fn singular_system(w: usize, seed: u64) -> BandSystem<Rational> {
    let n = 2 * w + 2;
    let spec = GenSpec::plain(n, w, seed, Backend::Exact, StorageKind::Fixed);
    let (system, _) = generated_exact(&spec);
    let (mut a, b) = dense_from_band(&system);
    let i = w; // interior: rows i and i+1 both reach columns i+1-w ..= i+w
    a[i][i - w] = Rational::zero();
    for col in 0..n {
        a[i + 1][col] = Rational::zero();
    }
    for col in i + 1 - w..=i + w {
        a[i + 1][col] = a[i][col].clone();
    }
    let w_i = w as isize;
    let diagonals = (-w_i..=w_i)
        .map(|o| {
            (0..n - o.unsigned_abs())
                .map(|k| {
                    let (row, col) = if o >= 0 {
                        (k, k + o as usize)
                    } else {
                        (k + o.unsigned_abs(), k)
                    };
                    a[row][col].clone()
                })
                .collect()
        })
        .collect();
    build_system(n, w, diagonals, b, StorageKind::Fixed).unwrap()
}

pub struct DenseOutcome {
    pub rank: usize,
    pub det: Rational,
    /// Present exactly when the matrix is nonsingular.
    pub solution: Option<Vec<Rational>>,
}

/// Gaussian elimination with row pivoting over the rationals.
///
/// Row exchanges make this a genuinely different procedure from the band
/// solvers, which never pivot; agreement between the two is therefore a
/// meaningful check rather than the same code run twice.
pub fn dense_eliminate(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> DenseOutcome {
    let n = a.len();
    let mut det = Rational::one();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if pivot_row != col {
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
            det = -det;
        }
        det *= &a[col][col];
        rank += 1;
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &a[col][col];
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[row][k] -= delta;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    if rank < n {
        return DenseOutcome {
            rank,
            det: Rational::zero(),
            solution: None,
        };
    }
    let mut x = vec![Rational::zero(); n];
    for row in (0..n).rev() {
        let mut sum = b[row].clone();
        for col in row + 1..n {
            let delta = &a[row][col] * &x[col];
            sum -= delta;
        }
        x[row] = sum / &a[row][row];
    }
    DenseOutcome {
        rank,
        det,
        solution: Some(x),
    }
}

/// Convenience wrapper: oracle outcome for a band system.
pub fn oracle(sys: &BandSystem<Rational>) -> DenseOutcome {
    let (a, b) = dense_from_band(sys);
    dense_eliminate(a, b)
}

#[derive(Debug)]
pub struct ShadowReduction {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub ops: u64,
}

/// Dense transcription of the two bandwidth-reduction sweeps.
///
/// Row combinations are applied across entire rows, so any fill the band
/// version failed to track would show up as a nonzero outside the target
/// band. The counter charges 1 per divisor, 2 per right-hand-side update,
/// and 2 per updated column inside the documented ranges; rows whose target
/// entry is already zero cost nothing.
pub fn shadow_reduce(
    a0: &[Vec<Rational>],
    rhs0: &[Rational],
    w: usize,
) -> Result<ShadowReduction, String> {
    let n = a0.len();
    assert!(n >= 2 * w + 2, "shadow reduction needs n >= 2w + 2");
    let mut a: Vec<Vec<Rational>> = a0.to_vec();
    let mut rhs: Vec<Rational> = rhs0.to_vec();
    let mut ops = 0u64;

    let combine = |a: &mut Vec<Vec<Rational>>,
                       rhs: &mut Vec<Rational>,
                       ops: &mut u64,
                       row: usize,
                       other: usize,
                       target_col: usize,
                       counted: std::ops::RangeInclusive<usize>|
     -> Result<(), String> {
        if a[row][target_col].is_zero() {
            return Ok(());
        }
        if a[other][target_col].is_zero() {
            return Err(format!("zero divisor in row {}", other + 1));
        }
        let m = &a[row][target_col] / &a[other][target_col];
        *ops += 1;
        for col in 0..n {
            let delta = &m * &a[other][col];
            a[row][col] -= delta;
        }
        let delta = &m * &rhs[other];
        rhs[row] -= delta;
        *ops += 2;
        *ops += 2 * counted.count() as u64;
        Ok(())
    };

    for i in (0..n - w).rev() {
        let lo = (i + 1).saturating_sub(w);
        combine(&mut a, &mut rhs, &mut ops, i, i + 1, i + w, lo..=i + w - 1)?;
    }
    for i in w..n {
        let hi = (i + w - 2).min(n - 1);
        combine(&mut a, &mut rhs, &mut ops, i, i - 1, i - w, i - w + 1..=hi)?;
    }
    Ok(ShadowReduction {
        matrix: a,
        rhs,
        ops,
    })
}
