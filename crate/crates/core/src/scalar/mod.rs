//! Exact scalar arithmetic for the solvers.
//!
//! Every value starts as an arbitrary-precision rational. When a zero pivot
//! forces the elimination to continue over the field of rational functions in
//! a single indeterminate, values are promoted to [`RatFunc`] on demand. Both
//! representations live in [`Scalar`], and every operation collapses a result
//! that turned out constant back to the exact form, so the symbolic
//! representation appears only while it is genuinely needed.

mod poly;
mod ratfunc;

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use poly::Poly;
pub use ratfunc::RatFunc;

/// Arbitrary-precision rational. Kept reduced with a positive denominator by
/// construction; `Display` writes `p/q`, or just `p` when the denominator is 1.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational with zero denominator")]
    ZeroDenominator,
    #[error("no finite value at x = 0")]
    LimitUndefined,
}

/// Checked rational constructor; `Rational::new` panics on a zero denominator.
pub fn rational_checked(numer: BigInt, denom: BigInt) -> Result<Rational, ScalarError> {
    if denom.is_zero() {
        return Err(ScalarError::ZeroDenominator);
    }
    Ok(Rational::new(numer, denom))
}

/// Nearest-`f64` approximation, for reports and float-backend comparisons.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

thread_local! {
    static SYMBOLIC_OPS: Cell<u64> = const { Cell::new(0) };
}

/// Arithmetic operations on this thread that took the symbolic path.
///
/// Exact-on-exact operations never bump this, which is what lets tests pin
/// down that a solve without pivot substitution stays rational throughout.
pub fn symbolic_op_count() -> u64 {
    SYMBOLIC_OPS.get()
}

pub fn reset_symbolic_op_count() {
    SYMBOLIC_OPS.set(0);
}

fn note_symbolic_op() {
    SYMBOLIC_OPS.set(SYMBOLIC_OPS.get() + 1);
}

/// A field element: exact rational, or rational function of the indeterminate
/// introduced by pivot substitution.
///
/// Invariant: a `Symbolic` value is never constant; constructors collapse
/// constant rational functions to `Exact`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Exact(Rational),
    Symbolic(RatFunc),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::Exact(Rational::from_integer(n.into()))
    }

    /// The indeterminate substituted for an exactly-zero pivot.
    pub fn x() -> Self {
        Scalar::Symbolic(RatFunc::x())
    }

    /// Wraps a rational function, collapsing constants to `Exact`.
    pub fn from_ratfunc(f: RatFunc) -> Self {
        match f.as_constant() {
            Some(c) => Scalar::Exact(c),
            None => Scalar::Symbolic(f),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Symbolic(_) => false,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Scalar::Symbolic(_))
    }

    fn to_ratfunc(&self) -> RatFunc {
        match self {
            Scalar::Exact(r) => RatFunc::constant(r.clone()),
            Scalar::Symbolic(f) => f.clone(),
        }
    }

    /// Division; rejects an exactly-zero divisor.
    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (_, r) if r.is_zero() => Err(ScalarError::DivisionByZero),
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a / b)),
            _ => {
                note_symbolic_op();
                let inv = rhs.to_ratfunc().recip()?;
                Ok(Scalar::from_ratfunc(&self.to_ratfunc() * &inv))
            }
        }
    }

    /// Value at `x = 0`; exact values are returned as-is.
    ///
    /// In canonical form, evaluation agrees with the limit whenever the
    /// denominator's constant term is nonzero; otherwise the limit is not a
    /// finite rational and this fails.
    pub fn eval_at_zero(&self) -> Result<Rational, ScalarError> {
        match self {
            Scalar::Exact(r) => Ok(r.clone()),
            Scalar::Symbolic(f) => f.eval_at_zero(),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => {
                note_symbolic_op();
                Scalar::from_ratfunc(&self.to_ratfunc() + &rhs.to_ratfunc())
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => {
                note_symbolic_op();
                Scalar::from_ratfunc(&self.to_ratfunc() - &rhs.to_ratfunc())
            }
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => {
                note_symbolic_op();
                Scalar::from_ratfunc(&self.to_ratfunc() * &rhs.to_ratfunc())
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Symbolic(f) => Scalar::Symbolic(-f),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Symbolic(fun) => write!(f, "{fun}"),
        }
    }
}
