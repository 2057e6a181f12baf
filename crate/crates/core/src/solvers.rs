//! Band LU solvers in exact arithmetic with symbolic zero-pivot substitution.
//!
//! One Doolittle elimination parameterized by the half-bandwidth covers the
//! three public methods: STDM (tridiagonal, w = 1), SPDM (pentadiagonal,
//! w = 2), and SHDM (heptadiagonal, w = 3). No rows are exchanged. When a
//! pivot `u[i][i]` comes out exactly zero it is replaced by the indeterminate
//! `x`; elimination continues over rational functions, and the determinant
//! and solution are specialized at `x = 0` at the end. The float backend runs
//! the same recurrences over `f64` and fails fast on a zero pivot instead.
//!
//! Every read and write of matrix, factor, and work-vector entries goes
//! through a counted [`Store`], so the storage backend's access-cost model
//! governs the solver's observable time growth.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::band::{Backend, BandSystem, SolutionDocument, StorageKind, Store};
use crate::scalar::{Rational, Scalar};

/// The three solver entry points, named by the band shape they accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Stdm,
    Spdm,
    Shdm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Stdm, Algorithm::Spdm, Algorithm::Shdm];

    /// Half-bandwidth this method operates on.
    pub fn w(self) -> usize {
        match self {
            Algorithm::Stdm => 1,
            Algorithm::Spdm => 2,
            Algorithm::Shdm => 3,
        }
    }

    pub fn from_w(w: usize) -> Option<Algorithm> {
        match w {
            1 => Some(Algorithm::Stdm),
            2 => Some(Algorithm::Spdm),
            3 => Some(Algorithm::Shdm),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Stdm => "STDM",
            Algorithm::Spdm => "SPDM",
            Algorithm::Shdm => "SHDM",
        }
    }

    /// Band-shape token used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            Algorithm::Stdm => "td",
            Algorithm::Spdm => "pd",
            Algorithm::Shdm => "hd",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "td" | "stdm" => Ok(Algorithm::Stdm),
            "pd" | "spdm" => Ok(Algorithm::Spdm),
            "hd" | "shdm" => Ok(Algorithm::Shdm),
            other => Err(format!(
                "unknown algorithm {other:?} (expected td, pd, hd, or STDM/SPDM/SHDM)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("exact zero pivot at row {row} on the float backend")]
    FloatZeroPivot { row: usize },
    #[error("algorithm expects half-bandwidth {expected}, system has {got}")]
    BandwidthMismatch { expected: usize, got: usize },
}

/// Unit-lower and upper band factors of `A = L·U`.
///
/// `l` holds offsets `-w..=-1`, `u` offsets `0..=w`; both live in counted
/// stores of the same kind as the source system. `substituted` lists the
/// 1-based rows whose pivot was replaced by the indeterminate, in ascending
/// order; every other pivot specializes to a nonzero rational.
#[derive(Debug, Clone)]
pub struct BandFactors {
    n: usize,
    w: usize,
    l: Vec<Store<Scalar>>,
    u: Vec<Store<Scalar>>,
    substituted: Vec<usize>,
}

impl BandFactors {
    fn empty(n: usize, w: usize, storage: StorageKind) -> Self {
        BandFactors {
            n,
            w,
            l: (1..=w)
                .map(|d| Store::filled(storage, n - d, Scalar::zero()))
                .collect(),
            u: (0..=w)
                .map(|d| Store::filled(storage, n - d, Scalar::zero()))
                .collect(),
            substituted: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// 1-based rows where the pivot was replaced by `x`, ascending.
    pub fn substituted_pivots(&self) -> &[usize] {
        &self.substituted
    }

    /// Counted read of `l[i][j]`, 0-based, `i - w <= j < i`.
    pub fn l_at(&mut self, i: usize, j: usize) -> Scalar {
        assert!(j < i && i - j <= self.w, "l[{i}][{j}] outside the lower band");
        self.l[i - j - 1].get(j).clone()
    }

    fn set_l(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(j < i && i - j <= self.w, "l[{i}][{j}] outside the lower band");
        self.l[i - j - 1].set(j, value);
    }

    /// Counted read of `u[i][j]`, 0-based, `i <= j <= i + w`.
    pub fn u_at(&mut self, i: usize, j: usize) -> Scalar {
        assert!(j >= i && j - i <= self.w, "u[{i}][{j}] outside the upper band");
        self.u[j - i].get(i).clone()
    }

    fn set_u(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(j >= i && j - i <= self.w, "u[{i}][{j}] outside the upper band");
        self.u[j - i].set(i, value);
    }

    pub fn total_steps(&self) -> u64 {
        self.l.iter().chain(self.u.iter()).map(Store::steps).sum()
    }
}

/// Doolittle factorization within the band; never fails on the exact backend
/// because zero pivots are substituted, not divided by.
pub fn band_lu_symbolic(sys: &mut BandSystem<Rational>) -> BandFactors {
    let n = sys.n();
    let w = sys.w();
    let mut f = BandFactors::empty(n, w, sys.storage());
    for i in 0..n {
        for j in i.saturating_sub(w)..i {
            let mut sum = Scalar::zero();
            for k in i.saturating_sub(w)..j {
                let lik = f.l_at(i, k);
                let ukj = f.u_at(k, j);
                sum = &sum + &(&lik * &ukj);
            }
            let aij = Scalar::Exact(sys.entry(i, j).clone());
            let pivot = f.u_at(j, j);
            let lij = (&aij - &sum)
                .try_div(&pivot)
                .expect("pivots are substituted when zero, never divided by");
            f.set_l(i, j, lij);
        }
        for j in i..=(i + w).min(n - 1) {
            let mut sum = Scalar::zero();
            for k in i.saturating_sub(w).max(j.saturating_sub(w))..i {
                let lik = f.l_at(i, k);
                let ukj = f.u_at(k, j);
                sum = &sum + &(&lik * &ukj);
            }
            let aij = Scalar::Exact(sys.entry(i, j).clone());
            let mut uij = &aij - &sum;
            if j == i && uij.is_zero() {
                uij = Scalar::x();
                f.substituted.push(i + 1);
            }
            f.set_u(i, j, uij);
        }
    }
    f
}

/// Forward then back substitution; the result may carry the indeterminate.
pub fn substitute_solve(sys: &mut BandSystem<Rational>, f: &mut BandFactors) -> Vec<Scalar> {
    let n = sys.n();
    let w = sys.w();
    let storage = sys.storage();
    let mut y = Store::filled(storage, n, Scalar::zero());
    for i in 0..n {
        let mut sum = Scalar::zero();
        for k in i.saturating_sub(w)..i {
            let lik = f.l_at(i, k);
            let yk = y.get(k).clone();
            sum = &sum + &(&lik * &yk);
        }
        let bi = Scalar::Exact(sys.rhs(i).clone());
        y.set(i, &bi - &sum);
    }
    let mut z = Store::filled(storage, n, Scalar::zero());
    for i in (0..n).rev() {
        let mut sum = Scalar::zero();
        for j in i + 1..=(i + w).min(n - 1) {
            let uij = f.u_at(i, j);
            let zj = z.get(j).clone();
            sum = &sum + &(&uij * &zj);
        }
        let yi = y.get(i).clone();
        let pivot = f.u_at(i, i);
        let zi = (&yi - &sum)
            .try_div(&pivot)
            .expect("pivots are substituted when zero, never divided by");
        z.set(i, zi);
    }
    z.to_vec()
}

fn product_tree(values: &[BigInt]) -> BigInt {
    match values {
        [] => BigInt::one(),
        [v] => v.clone(),
        _ => {
            let (a, b) = values.split_at(values.len() / 2);
            product_tree(a) * product_tree(b)
        }
    }
}

/// Determinant as the pivot product specialized at zero.
///
/// Without substitutions the pivots are plain rationals and the product is
/// taken over balanced numerator/denominator trees, keeping the bit cost
/// quasilinear in the result size; a left-to-right fold would be quadratic
/// and distort large-size timing. With substitutions the pivots are folded
/// symbolically so cancellations happen before specialization.
fn determinant(f: &mut BandFactors) -> Result<Rational, SolveError> {
    let n = f.n;
    if f.substituted.is_empty() {
        let mut nums = Vec::with_capacity(n);
        let mut dens = Vec::with_capacity(n);
        let mut unit_dens = true;
        for i in 0..n {
            match f.u_at(i, i) {
                Scalar::Exact(r) => {
                    unit_dens &= r.denom().is_one();
                    nums.push(r.numer().clone());
                    dens.push(r.denom().clone());
                }
                Scalar::Symbolic(_) => unreachable!("symbolic pivot without substitution record"),
            }
        }
        let num = product_tree(&nums);
        let den = if unit_dens {
            BigInt::one()
        } else {
            product_tree(&dens)
        };
        // Pivots are individually nonzero, so the product is nonzero.
        Ok(Rational::new(num, den))
    } else {
        let mut det = Scalar::one();
        for i in 0..n {
            let pivot = f.u_at(i, i);
            det = &det * &pivot;
        }
        match det.eval_at_zero() {
            Ok(v) if !num_traits::Zero::is_zero(&v) => Ok(v),
            _ => Err(SolveError::SingularMatrix),
        }
    }
}

/// Outcome of a successful exact solve: everything specialized back to
/// rationals, with a nonzero determinant as the nonsingularity certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub solution: Vec<Rational>,
    pub det: Rational,
    pub substituted_pivots: Vec<usize>,
    pub storage: StorageKind,
    pub backend: Backend,
}

impl SolveResult {
    pub fn to_document(&self) -> SolutionDocument {
        SolutionDocument {
            solution: self.solution.clone(),
            det: self.det.clone(),
            substituted_pivots: self.substituted_pivots.clone(),
        }
    }
}

/// Full exact solve: factor, certify nonsingularity via the determinant,
/// substitute, and specialize the solution at `x = 0`.
pub fn solve(sys: &mut BandSystem<Rational>) -> Result<SolveResult, SolveError> {
    let mut f = band_lu_symbolic(sys);
    let det = determinant(&mut f)?;
    let z = substitute_solve(sys, &mut f);
    let mut solution = Vec::with_capacity(z.len());
    for zi in z {
        // A pole at zero cannot occur when det is nonzero, but the mapping to
        // SingularMatrix is kept as the documented failure mode.
        match zi.eval_at_zero() {
            Ok(v) => solution.push(v),
            Err(_) => return Err(SolveError::SingularMatrix),
        }
    }
    Ok(SolveResult {
        solution,
        det,
        substituted_pivots: f.substituted,
        storage: sys.storage(),
        backend: Backend::Exact,
    })
}

fn solve_checked(sys: &mut BandSystem<Rational>, expected_w: usize) -> Result<SolveResult, SolveError> {
    if sys.w() != expected_w {
        return Err(SolveError::BandwidthMismatch {
            expected: expected_w,
            got: sys.w(),
        });
    }
    solve(sys)
}

/// Symbolic tridiagonal method: [`solve`] restricted to w = 1.
pub fn stdm(sys: &mut BandSystem<Rational>) -> Result<SolveResult, SolveError> {
    solve_checked(sys, 1)
}

/// Symbolic pentadiagonal method: [`solve`] restricted to w = 2.
pub fn spdm(sys: &mut BandSystem<Rational>) -> Result<SolveResult, SolveError> {
    solve_checked(sys, 2)
}

/// Symbolic heptadiagonal method: [`solve`] restricted to w = 3.
pub fn shdm(sys: &mut BandSystem<Rational>) -> Result<SolveResult, SolveError> {
    solve_checked(sys, 3)
}

/// Dispatch by algorithm tag, enforcing the matching bandwidth.
pub fn solve_with(algorithm: Algorithm, sys: &mut BandSystem<Rational>) -> Result<SolveResult, SolveError> {
    solve_checked(sys, algorithm.w())
}

/// Band factors over `f64`; no substitution mechanism exists here.
#[derive(Debug, Clone)]
pub struct FloatFactors {
    l: Vec<Store<f64>>,
    u: Vec<Store<f64>>,
}

impl FloatFactors {
    fn empty(n: usize, w: usize, storage: StorageKind) -> Self {
        FloatFactors {
            l: (1..=w).map(|d| Store::filled(storage, n - d, 0.0)).collect(),
            u: (0..=w).map(|d| Store::filled(storage, n - d, 0.0)).collect(),
        }
    }

    fn l_at(&mut self, i: usize, j: usize) -> f64 {
        *self.l[i - j - 1].get(j)
    }

    fn set_l(&mut self, i: usize, j: usize, value: f64) {
        self.l[i - j - 1].set(j, value);
    }

    fn u_at(&mut self, i: usize, j: usize) -> f64 {
        *self.u[j - i].get(i)
    }

    fn set_u(&mut self, i: usize, j: usize, value: f64) {
        self.u[j - i].set(i, value);
    }
}

/// Doolittle factorization over `f64`; an exactly-zero pivot is a hard error
/// because limits computed with rounding would be meaningless.
pub fn band_lu_float(sys: &mut BandSystem<f64>) -> Result<FloatFactors, SolveError> {
    let n = sys.n();
    let w = sys.w();
    let mut f = FloatFactors::empty(n, w, sys.storage());
    for i in 0..n {
        for j in i.saturating_sub(w)..i {
            let mut sum = 0.0;
            for k in i.saturating_sub(w)..j {
                sum += f.l_at(i, k) * f.u_at(k, j);
            }
            let aij = *sys.entry(i, j);
            let lij = (aij - sum) / f.u_at(j, j);
            f.set_l(i, j, lij);
        }
        for j in i..=(i + w).min(n - 1) {
            let mut sum = 0.0;
            for k in i.saturating_sub(w).max(j.saturating_sub(w))..i {
                sum += f.l_at(i, k) * f.u_at(k, j);
            }
            let uij = *sys.entry(i, j) - sum;
            if j == i && uij == 0.0 {
                return Err(SolveError::FloatZeroPivot { row: i + 1 });
            }
            f.set_u(i, j, uij);
        }
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatSolveResult {
    pub solution: Vec<f64>,
    /// Raw pivot product; may overflow to infinity for very large systems.
    pub det: f64,
    pub storage: StorageKind,
    pub backend: Backend,
}

/// Plain LU solve over `f64`.
pub fn solve_float(sys: &mut BandSystem<f64>) -> Result<FloatSolveResult, SolveError> {
    let n = sys.n();
    let w = sys.w();
    let storage = sys.storage();
    let mut f = band_lu_float(sys)?;
    let mut det = 1.0;
    for i in 0..n {
        det *= f.u_at(i, i);
    }
    let mut y = Store::filled(storage, n, 0.0);
    for i in 0..n {
        let mut sum = 0.0;
        for k in i.saturating_sub(w)..i {
            sum += f.l_at(i, k) * *y.get(k);
        }
        let bi = *sys.rhs(i);
        y.set(i, bi - sum);
    }
    let mut z = Store::filled(storage, n, 0.0);
    for i in (0..n).rev() {
        let mut sum = 0.0;
        for j in i + 1..=(i + w).min(n - 1) {
            sum += f.u_at(i, j) * *z.get(j);
        }
        let zi = (*y.get(i) - sum) / f.u_at(i, i);
        z.set(i, zi);
    }
    Ok(FloatSolveResult {
        solution: z.to_vec(),
        det,
        storage,
        backend: Backend::Float,
    })
}
