//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored by ascending degree with no trailing zeros, so the
//! zero polynomial is the empty coefficient list and `degree` of zero is
//! `None`. Degrees stay tiny in practice (one indeterminate per solve, powers
//! bounded by the number of substituted pivots), so the plain schoolbook
//! algorithms are the right tool.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// Univariate polynomial with `coeffs[k]` the coefficient of `x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Value at `x = 0`, i.e. the constant term.
    pub fn eval_at_zero(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Rescales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }

    /// Euclidean division, `self = q * div + r` with `deg r < deg div`.
    /// Returns `None` when `div` is zero.
    pub fn div_rem(&self, div: &Poly) -> Option<(Poly, Poly)> {
        let d_deg = div.degree()?;
        let d_lead = div.leading().expect("nonzero divisor has a leading coefficient");
        let mut rem = self.coeffs.clone();
        if self.degree() < Some(d_deg) || self.is_zero() {
            return Some((Poly::zero(), self.clone()));
        }
        let q_len = rem.len() - d_deg;
        let mut quot = vec![Rational::zero(); q_len];
        for k in (0..q_len).rev() {
            let factor = &rem[k + d_deg] / d_lead;
            if !factor.is_zero() {
                for (i, dc) in div.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &(dc * &factor);
                }
            }
            quot[k] = factor;
        }
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    /// `gcd(p, 0)` is `monic(p)` and `gcd(0, 0)` is zero.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut p = a.clone();
        let mut q = b.clone();
        while !q.is_zero() {
            let (_, r) = p.div_rem(&q).expect("divisor checked nonzero");
            p = q;
            q = r;
        }
        p.monic()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "{c}*x")?,
                _ if c.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| r(c)).collect())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p, poly(&[1, 2]));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(Poly::zero().degree(), None);
        assert!(poly(&[0, 0]).is_zero());
    }

    #[test]
    fn gcd_shared_root() {
        // x^2 - 1 and x^2 - 2x + 1 share the root at 1.
        let g = Poly::gcd(&poly(&[-1, 0, 1]), &poly(&[1, -2, 1]));
        assert_eq!(g, poly(&[-1, 1]));
    }

    #[test]
    fn gcd_common_factor_x() {
        let g = Poly::gcd(&poly(&[0, 1, 1]), &poly(&[0, 1]));
        assert_eq!(g, poly(&[0, 1]));
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let g = Poly::gcd(&poly(&[2, 2]), &Poly::zero());
        assert_eq!(g, poly(&[1, 1]));
        assert_eq!(Poly::gcd(&Poly::zero(), &Poly::zero()), Poly::zero());
    }

    #[test]
    fn div_rem_round_trips() {
        let a = poly(&[3, -2, 0, 5]);
        let b = poly(&[1, 1]);
        let (q, rem) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &rem, a);
        assert!(rem.degree() < b.degree());
        assert!(a.div_rem(&Poly::zero()).is_none());
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(poly(&[1, -2]).to_string(), "-2*x + 1");
        assert_eq!(Poly::x().to_string(), "x");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
