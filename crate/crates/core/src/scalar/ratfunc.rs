//! Rational functions in one indeterminate, kept in canonical form.
//!
//! Canonical form: numerator and denominator are coprime and the denominator
//! is monic. With that invariant, a rational function is constant iff its
//! denominator is 1 and its numerator has degree at most 0, and evaluating at
//! a point where the denominator does not vanish agrees with the limit there.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::poly::Poly;
use super::{Rational, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds `num / den` in canonical form. Fails on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g).expect("gcd of nonzero operands is nonzero");
        let (den, _) = den.div_rem(&g).expect("gcd of nonzero operands is nonzero");
        let lead = den.leading().expect("denominator is nonzero").clone();
        Ok(RatFunc {
            num: num.scale(&lead.recip()),
            den: den.monic(),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Returns the constant value if this function is one, else `None`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() && self.num.degree().map_or(true, |d| d == 0) {
            Some(self.num.eval_at_zero())
        } else {
            None
        }
    }

    /// Value at `x = 0`. In canonical form the denominator can only vanish at
    /// zero when the numerator does not, so a vanishing denominator means the
    /// limit does not exist as a finite number.
    pub fn eval_at_zero(&self) -> Result<Rational, ScalarError> {
        let d0 = self.den.eval_at_zero();
        if d0.is_zero() {
            return Err(ScalarError::LimitUndefined);
        }
        Ok(self.num.eval_at_zero() / d0)
    }

    pub fn recip(&self) -> Result<RatFunc, ScalarError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RatFunc::new(num, den).expect("product of nonzero denominators is nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators is nonzero")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
