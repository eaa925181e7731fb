//! Truncated one-variable power series with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational_poly::{rat, Rational};
use crate::error::{Error, Result};

/// A power series `c₀ + c₁x + … + c_d x^d` known exactly up to the cutoff `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<Rational>,
}

impl FormalSeries {
    /// Builds a series from its first `cutoff + 1` coefficients; missing entries are zero.
    pub fn new(mut coeffs: Vec<Rational>, cutoff: usize) -> Self {
        coeffs.resize(cutoff + 1, Rational::zero());
        Self { coeffs }
    }

    /// Builds a series from a coefficient rule.
    pub fn from_fn(cutoff: usize, rule: impl FnMut(usize) -> Rational) -> Self {
        Self {
            coeffs: (0..=cutoff).map(rule).collect(),
        }
    }

    /// The constant series 1.
    pub fn one(cutoff: usize) -> Self {
        Self::from_fn(cutoff, |i| if i == 0 { Rational::one() } else { Rational::zero() })
    }

    /// The polynomial `1 + x`.
    pub fn one_plus_x(cutoff: usize) -> Self {
        Self::from_fn(cutoff, |i| if i <= 1 { Rational::one() } else { Rational::zero() })
    }

    /// The truncation degree.
    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^i` (zero beyond the cutoff).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// All coefficients `c₀ … c_d`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Truncated product; the cutoff is the smaller of the two.
    pub fn mul(&self, rhs: &Self) -> Self {
        let d = self.cutoff().min(rhs.cutoff());
        let mut out = vec![Rational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(d + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::precondition("series inverse needs a nonzero constant term"));
        }
        let d = self.cutoff();
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); d + 1];
        out[0] = inv0.clone();
        for n in 1..=d {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out[n] = -(acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// Exact quotient `self / rhs`.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// Divides by `x`, dropping the (required zero) constant term; the cutoff drops by one.
    pub fn div_by_x(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.cutoff() == 0 {
            return Err(Error::precondition("division by x needs a zero constant term"));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `ln(self)` for a series with constant term 1, via `(ln f)' = f'/f`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::precondition("logarithm needs constant term 1"));
        }
        let d = self.cutoff();
        let deriv = Self::from_fn(d, |i| self.coeff(i + 1) * rat(i as i64 + 1, 1));
        let q = deriv.mul(&self.inverse()?);
        Ok(Self::from_fn(d, |i| {
            if i == 0 {
                Rational::zero()
            } else {
                q.coeff(i - 1) / rat(i as i64, 1)
            }
        }))
    }

    /// `ln(1 + x)` up to `x^cutoff`.
    pub fn ln_one_plus_x(cutoff: usize) -> Self {
        Self::from_fn(cutoff, |i| {
            if i == 0 {
                Rational::zero()
            } else {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                rat(sign, i as i64)
            }
        })
    }

    /// `e^{s x}` up to `x^cutoff` for an integer scale `s`.
    pub fn exp_scaled(cutoff: usize, s: i64) -> Self {
        let mut fact = BigInt::one();
        let mut pow = BigInt::one();
        Self::from_fn(cutoff, |i| {
            if i > 0 {
                fact *= BigInt::from(i);
                pow *= BigInt::from(s);
            }
            Rational::new(pow.clone(), fact.clone())
        })
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.cutoff() + 1)
    }
}

/// The generating series `ψ(x) = (1 + x)·ln(1 + x)/x` of the operation ψ.
///
/// Built by exact series division and multiplication and then checked
/// coefficient-by-coefficient against the closed form `(−1)^{k+1}/(k(k+1))`.
pub fn psi_series(d_max: usize) -> FormalSeries {
    let log_over_x = FormalSeries::ln_one_plus_x(d_max + 1)
        .div_by_x()
        .expect("ln(1+x) has zero constant term");
    let psi = log_over_x.mul(&FormalSeries::one_plus_x(d_max));
    for k in 1..=d_max {
        assert_eq!(psi.coeff(k), psi_closed_form(k), "psi series coefficient {k}");
    }
    psi
}

/// Closed form of the `x^k` coefficient of ψ for `k ≥ 1`.
pub fn psi_closed_form(k: usize) -> Rational {
    let k = k as i64;
    let sign = if k % 2 == 1 { 1 } else { -1 };
    rat(sign, k * (k + 1))
}

/// The Todd generating series `u/(1 − e^{−u})`.
pub fn todd_series(d_max: usize) -> FormalSeries {
    // (1 − e^{−u})/u has constant term 1, so its inverse is well defined.
    let exp_neg = FormalSeries::exp_scaled(d_max + 1, -1);
    let one_minus_exp = FormalSeries::from_fn(d_max + 1, |i| {
        if i == 0 {
            Rational::zero()
        } else {
            -exp_neg.coeff(i)
        }
    });
    one_minus_exp
        .div_by_x()
        .and_then(|s| s.inverse())
        .expect("(1 − e^{−u})/u is invertible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_low_coefficients() {
        let s = psi_series(4);
        assert_eq!(s.coeff(0), rat(1, 1));
        assert_eq!(s.coeff(1), rat(1, 2));
        assert_eq!(s.coeff(2), rat(-1, 6));
        assert_eq!(s.coeff(3), rat(1, 12));
    }

    #[test]
    fn todd_low_coefficients() {
        let t = todd_series(6);
        assert_eq!(t.coeff(0), rat(1, 1));
        assert_eq!(t.coeff(1), rat(1, 2));
        assert_eq!(t.coeff(2), rat(1, 12));
        assert_eq!(t.coeff(3), rat(0, 1));
        assert_eq!(t.coeff(4), rat(-1, 720));
        assert_eq!(t.coeff(6), rat(1, 30240));
    }

    #[test]
    fn log_of_exp_is_identity() {
        let e = FormalSeries::exp_scaled(8, 3);
        let l = e.log().unwrap();
        assert_eq!(l.coeff(1), rat(3, 1));
        for i in 2..=8 {
            assert_eq!(l.coeff(i), rat(0, 1));
        }
    }

    #[test]
    fn inverse_requires_unit() {
        let s = FormalSeries::ln_one_plus_x(3);
        assert!(s.inverse().is_err());
    }
}
