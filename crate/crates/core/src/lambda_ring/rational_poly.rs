//! Polynomials in the formal rank variable `n` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number used throughout the λ-ring engine.
pub type Rational = BigRational;

/// Builds the rational `num/den`.
///
/// # Panics
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A polynomial `c₀ + c₁ n + c₂ n² + …` in the rank symbol `n`.
///
/// The coefficient vector never carries trailing zeros, so structural
/// equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalPolyInN {
    coeffs: Vec<Rational>,
}

impl RationalPolyInN {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The constant `num/den`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(rat(num, den))
    }

    /// The monomial `n`.
    pub fn n() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// Builds a polynomial from ascending coefficients, normalizing trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Ascending coefficients (`coeffs()[i]` multiplies `nⁱ`).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `nⁱ`.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `n`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Returns the constant value if the polynomial does not depend on `n`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Evaluates at a rational value of `n` (Horner scheme).
    pub fn eval(&self, n: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * n + c)
    }

    /// Substitutes `n ↦ q(n)`.
    pub fn compose(&self, q: &RationalPolyInN) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    /// The generalized binomial coefficient `binom(n − shift, i)` as a polynomial in `n`.
    pub fn binomial_shifted(shift: i64, i: usize) -> Self {
        let mut acc = Self::one();
        for j in 0..i as i64 {
            let factor = Self::from_coeffs(vec![rat(-shift - j, 1), Rational::one()]);
            acc = &acc * &factor;
        }
        let mut fact = BigInt::one();
        for j in 1..=i {
            fact *= BigInt::from(j);
        }
        acc.scale(&BigRational::new(BigInt::one(), fact))
    }
}

impl Add for &RationalPolyInN {
    type Output = RationalPolyInN;
    fn add(self, rhs: Self) -> RationalPolyInN {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolyInN::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolyInN {
    type Output = RationalPolyInN;
    fn sub(self, rhs: Self) -> RationalPolyInN {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolyInN::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPolyInN {
    type Output = RationalPolyInN;
    fn mul(self, rhs: Self) -> RationalPolyInN {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolyInN::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolyInN::from_coeffs(out)
    }
}

impl Neg for &RationalPolyInN {
    type Output = RationalPolyInN;
    fn neg(self) -> RationalPolyInN {
        RationalPolyInN::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RationalPolyInN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        write!(f, "{abs} ")?;
                    }
                    if i == 1 {
                        write!(f, "n")?;
                    } else {
                        write!(f, "n^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
