//! Formal combinations of exterior powers of a rank-`n` bundle `E` and their tensor products.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::rational_poly::{Rational, RationalPolyInN};

/// A tensor monomial `Λ^{k₁}E ⊗ Λ^{k₂}E ⊗ ⋯`, stored as the sorted list of exterior degrees
/// (all ≥ 1); the empty list is the unit (trivial line bundle).
pub type TensorMonomial = Vec<u32>;

/// A finite ℚ\[n\]-linear combination of tensor monomials in exterior powers of `E`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LambdaExpr {
    terms: BTreeMap<TensorMonomial, RationalPolyInN>,
}

/// One serialized term of a [`LambdaExpr`]: the monomial and its ℚ\[n\] coefficient.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermRecord {
    pub monomial: String,
    pub n_polynomial: Vec<NCoefficient>,
}

/// Coefficient of `n^power` as an exact fraction in decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NCoefficient {
    pub power: usize,
    pub numerator: String,
    pub denominator: String,
}

impl LambdaExpr {
    /// The zero combination.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit (trivial line bundle).
    pub fn one() -> Self {
        Self::constant(RationalPolyInN::one())
    }

    /// `c · 1`.
    pub fn constant(c: RationalPolyInN) -> Self {
        Self::term(Vec::new(), c)
    }

    /// `Λ^k E`; `Λ⁰E` is the unit.
    pub fn exterior(k: u32) -> Self {
        if k == 0 {
            Self::one()
        } else {
            Self::term(vec![k], RationalPolyInN::one())
        }
    }

    /// A single term `c · monomial`.
    pub fn term(mut monomial: TensorMonomial, c: RationalPolyInN) -> Self {
        monomial.retain(|&k| k > 0);
        monomial.sort_unstable();
        let mut out = Self::zero();
        out.add_term(monomial, c);
        out
    }

    /// Nonzero terms.
    pub fn terms(&self) -> &BTreeMap<TensorMonomial, RationalPolyInN> {
        &self.terms
    }

    /// Coefficient of a monomial given as exterior degrees in any order.
    pub fn coeff(&self, monomial: &[u32]) -> RationalPolyInN {
        let mut m: Vec<u32> = monomial.iter().copied().filter(|&k| k > 0).collect();
        m.sort_unstable();
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: TensorMonomial, c: RationalPolyInN) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Sum.
    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale_poly(&-&RationalPolyInN::one()))
    }

    /// Tensor product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                m.sort_unstable();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Multiplies all coefficients by a polynomial in `n`.
    pub fn scale_poly(&self, c: &RationalPolyInN) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Multiplies all coefficients by a rational.
    pub fn scale(&self, c: &Rational) -> Self {
        self.scale_poly(&RationalPolyInN::constant(c.clone()))
    }

    /// True if all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies a ring homomorphism determined by the images of `Λ^k E` and an `n`-substitution.
    pub fn map_hom(
        &self,
        exterior_image: impl Fn(u32) -> LambdaExpr,
        n_image: &RationalPolyInN,
    ) -> LambdaExpr {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut term = Self::constant(c.compose(n_image));
            for &k in m {
                term = term.mul(&exterior_image(k));
            }
            out = out.add(&term);
        }
        out
    }

    /// Value on the trivial bundle of rank `n`: `Λ^k ↦ binom(n, k)`.
    pub fn on_trivial_bundle(&self) -> RationalPolyInN {
        let mut out = RationalPolyInN::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &k in m {
                term = &term * &RationalPolyInN::binomial_shifted(0, k as usize);
            }
            out = &out + &term;
        }
        out
    }

    /// The same expression evaluated on `E ⊕ 1`: `Λ^k ↦ Λ^k + Λ^{k−1}`, `n ↦ n + 1`.
    pub fn on_sum_with_trivial_line(&self) -> LambdaExpr {
        let n_plus_one = &RationalPolyInN::n() + &RationalPolyInN::one();
        self.map_hom(
            |k| LambdaExpr::exterior(k).add(&LambdaExpr::exterior(k - 1)),
            &n_plus_one,
        )
    }

    /// Human-readable monomial name: `1`, `E`, `Λ²E`, `E⊗E`, …
    pub fn monomial_name(m: &[u32]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        m.iter()
            .map(|&k| match k {
                1 => "E".to_string(),
                _ => format!("Λ{}E", superscript(k)),
            })
            .collect::<Vec<_>>()
            .join("⊗")
    }

    /// Machine-readable term list.
    pub fn term_records(&self) -> Vec<TermRecord> {
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| TermRecord {
                monomial: Self::monomial_name(m),
                n_polynomial: c
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !num_traits::Zero::is_zero(*q))
                    .map(|(power, q)| NCoefficient {
                        power,
                        numerator: q.numer().to_string(),
                        denominator: q.denom().to_string(),
                    })
                    .collect(),
            })
            .collect()
    }

    /// Terms ordered by (total degree, monomial).
    pub fn sorted_terms(&self) -> Vec<(&TensorMonomial, &RationalPolyInN)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(m, _)| (m.iter().sum::<u32>(), m.len(), (*m).clone()));
        v
    }
}

fn superscript(k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize])
        .collect()
}

impl fmt::Display for LambdaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let coeff = match c.as_constant() {
                    Some(q) => q.to_string(),
                    None => format!("({c})"),
                };
                if m.is_empty() {
                    coeff
                } else {
                    format!("{coeff}·{}", Self::monomial_name(m))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
