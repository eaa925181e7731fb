//! The operation ψ with `ch ψ(x) = Td x`: γ-operations, exterior-power expansion,
//! Chern characters and the multiplicativity/stability checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::lambda_expr::LambdaExpr;
use super::rational_poly::{rat, Rational, RationalPolyInN};
use super::series::psi_series;
use super::symm::{multiplicative_op, newton_convert, GammaPoly, Partition, PowerSumPoly, SymmPoly};
use crate::error::{Error, Result};

/// `γ_0, γ_1, …, γ_d` in exterior powers, from
/// `γ_t = (1 − t)^n Σ_k t^k (1 − t)^{−k} Λ^k`, i.e.
/// `γ_j = Σ_{k ≤ j} (−1)^{j−k} binom(n − k, j − k) Λ^k`.
pub fn gamma_expand(d_max: usize) -> Vec<LambdaExpr> {
    (0..=d_max)
        .map(|j| {
            let mut acc = LambdaExpr::zero();
            for k in 0..=j {
                let sign = if (j - k) % 2 == 0 { 1 } else { -1 };
                let c = RationalPolyInN::binomial_shifted(k as i64, j - k).scale(&rat(sign, 1));
                acc = acc.add(&LambdaExpr::exterior(k as u32).scale_poly(&c));
            }
            acc
        })
        .collect()
}

/// ψ as a polynomial in γ-classes, through degree `d_max`.
///
/// ψ is the multiplicative operation whose generating series is
/// `(1 + x)ln(1 + x)/x`; read in γ-roots its symmetric expansion is ψ itself.
pub fn psi_in_gamma(d_max: usize) -> GammaPoly {
    multiplicative_op(&psi_series(d_max), d_max)
        .expect("psi series has constant term 1")
        .relabel()
}

/// ψ(E − n) written in exterior powers of `E`, keeping the γ-monomials `γ_K` with
/// `2|K| ≤ dim_bound` (the others have vanishing Chern character in that dimension).
pub fn psi_in_exterior(dim_bound: usize) -> LambdaExpr {
    let cutoff = dim_bound / 2;
    let psi = psi_in_gamma(cutoff);
    let gammas = gamma_expand(cutoff);
    let mut out = LambdaExpr::zero();
    for (m, c) in psi.terms() {
        let mut term = LambdaExpr::constant(c.clone());
        for &part in m.parts() {
            term = term.mul(&gammas[part as usize]);
        }
        out = out.add(&term);
    }
    out
}

/// Chern character `ch Λ^k E` in power sums of the Chern roots (with `p_0 = n`), for `k ≤ k_max`.
fn chern_of_exteriors(k_max: usize, d_max: usize) -> Vec<PowerSumPoly> {
    // Power sums of the exponentiated roots y_j = e^{x_j}: P_m = n + Σ_i m^i p_i / i!.
    let power_sums: Vec<PowerSumPoly> = (1..=k_max.max(1))
        .map(|m| {
            let mut acc = PowerSumPoly::constant(RationalPolyInN::n(), d_max);
            let mut coeff = Rational::from_integer(BigInt::from(1));
            for i in 1..=d_max {
                coeff = coeff * rat(m as i64, i as i64);
                acc = acc.add(&PowerSumPoly::generator(i as u32, d_max).scale(&coeff));
            }
            acc
        })
        .collect();
    // Newton's identities for the elementary symmetric functions of the y_j.
    let mut e = vec![PowerSumPoly::one(d_max)];
    for k in 1..=k_max {
        let mut acc = PowerSumPoly::zero(d_max);
        for i in 1..=k {
            let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
            acc = acc.add(&e[k - i].mul(&power_sums[i - 1]).scale(&rat(sign, 1)));
        }
        e.push(acc.scale(&rat(1, k as i64)));
    }
    e
}

/// The Chern character of a formal combination of exterior/tensor powers of a rank-`n`
/// bundle, as a symmetric function of the Chern roots written in Chern classes σ_i.
pub fn chern_of(expr: &LambdaExpr, d_max: usize) -> SymmPoly {
    let k_max = expr
        .terms()
        .keys()
        .flat_map(|m| m.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    let ch = chern_of_exteriors(k_max, d_max);
    let mut total = PowerSumPoly::zero(d_max);
    for (m, c) in expr.terms() {
        let mut term = PowerSumPoly::constant(c.clone(), d_max);
        for &k in m {
            term = term.mul(&ch[k as usize]);
        }
        total = total.add(&term);
    }
    newton_convert(&total)
}

/// Outcome of [`verify_psi_multiplicative`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MultiplicativityReport {
    pub d_max: usize,
    /// `ψ(a + b) = ψ(a)ψ(b)` holds as an identity in two disjoint alphabets.
    pub multiplicative: bool,
    /// `ψ(E ⊕ 1) = ψ(E)` holds for the exterior-power expansion.
    pub stable: bool,
    /// Number of monomials where the multiplicativity identity fails.
    pub multiplicative_defects: usize,
    /// Number of monomials where the stability identity fails.
    pub stability_defects: usize,
}

impl MultiplicativityReport {
    /// Both identities hold.
    pub fn passed(&self) -> bool {
        self.multiplicative && self.stable
    }
}

/// Polynomials in two alphabets of generators (`a_i`, `b_j`), truncated at total degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct TwoAlphabet {
    d_max: usize,
    terms: BTreeMap<(Partition, Partition), RationalPolyInN>,
}

impl TwoAlphabet {
    fn zero(d_max: usize) -> Self {
        Self {
            d_max,
            terms: BTreeMap::new(),
        }
    }

    fn term(a: Partition, b: Partition, c: RationalPolyInN, d_max: usize) -> Self {
        let mut out = Self::zero(d_max);
        out.add_term(a, b, c);
        out
    }

    fn add_term(&mut self, a: Partition, b: Partition, c: RationalPolyInN) {
        if c.is_zero() || a.degree() + b.degree() > self.d_max {
            return;
        }
        let key = (a, b);
        let entry = self.terms.entry(key.clone()).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.d_max);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                out.add_term(a1.union(a2), b1.union(b2), c1 * c2);
            }
        }
        out
    }

    /// Embeds a one-alphabet polynomial into alphabet `a` (`left`) or `b`.
    fn embed(p: &GammaPoly, left: bool) -> Self {
        let mut out = Self::zero(p.d_max());
        for (m, c) in p.terms() {
            if left {
                out.add_term(m.clone(), Partition::empty(), c.clone());
            } else {
                out.add_term(Partition::empty(), m.clone(), c.clone());
            }
        }
        out
    }
}

/// Checks exactly, through degree `d_max`, that ψ is multiplicative
/// (`ψ(a + b) = ψ(a)ψ(b)`, with `γ_k(a + b) = Σ_{i+j=k} γ_i(a)γ_j(b)`) and stable
/// (`ψ(E ⊕ 1) = ψ(E)` on the exterior-power expansion with `n ↦ n + 1`).
pub fn verify_psi_multiplicative(d_max: usize) -> MultiplicativityReport {
    let psi = psi_in_gamma(d_max);
    // Left side: substitute γ_k ↦ Σ_{i+j=k} a_i b_j.
    let sums: Vec<TwoAlphabet> = (1..=d_max)
        .map(|k| {
            let mut acc = TwoAlphabet::zero(d_max);
            for i in 0..=k {
                acc = acc.add(&TwoAlphabet::term(
                    Partition::new(vec![i as u32]),
                    Partition::new(vec![(k - i) as u32]),
                    RationalPolyInN::one(),
                    d_max,
                ));
            }
            acc
        })
        .collect();
    let mut lhs = TwoAlphabet::zero(d_max);
    for (m, c) in psi.terms() {
        let mut term = TwoAlphabet::term(Partition::empty(), Partition::empty(), c.clone(), d_max);
        for &part in m.parts() {
            term = term.mul(&sums[part as usize - 1]);
        }
        lhs = lhs.add(&term);
    }
    let rhs = TwoAlphabet::embed(&psi, true).mul(&TwoAlphabet::embed(&psi, false));
    let mult_defects = count_defects(&lhs, &rhs);

    let ext = psi_in_exterior(2 * d_max + 1);
    let stab = ext.on_sum_with_trivial_line().sub(&ext);
    MultiplicativityReport {
        d_max,
        multiplicative: mult_defects == 0,
        stable: stab.is_zero(),
        multiplicative_defects: mult_defects,
        stability_defects: stab.terms().len(),
    }
}

fn count_defects(lhs: &TwoAlphabet, rhs: &TwoAlphabet) -> usize {
    let mut keys: Vec<_> = lhs.terms.keys().chain(rhs.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|k| lhs.terms.get(*k) != rhs.terms.get(*k))
        .count()
}

/// Checks `ch ψ(E − n) = Td(E)` through degree `d_max`; returns the (ideally zero) difference.
pub fn chern_psi_minus_todd(d_max: usize) -> SymmPoly {
    let psi = psi_in_exterior(2 * d_max + 1);
    chern_of(&psi, d_max).sub(&super::symm::todd_symmetric(d_max))
}

/// Precondition helper shared by the CLI: validates a requested degree cutoff.
pub fn check_cutoff(d_max: usize) -> Result<()> {
    if d_max > 16 {
        return Err(Error::precondition(format!(
            "degree cutoff {d_max} is beyond the supported range 0..=16"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_low_degrees() {
        let g = gamma_expand(2);
        assert_eq!(g[0], LambdaExpr::one());
        let expected1 = LambdaExpr::exterior(1).sub(&LambdaExpr::constant(RationalPolyInN::n()));
        assert_eq!(g[1], expected1);
        // γ₂ = Λ² − (n − 1)Λ¹ + n(n − 1)/2
        assert_eq!(g[2].coeff(&[2]), RationalPolyInN::one());
        assert_eq!(
            g[2].coeff(&[1]),
            &RationalPolyInN::one() - &RationalPolyInN::n()
        );
        assert_eq!(g[2].coeff(&[]), RationalPolyInN::binomial_shifted(0, 2));
    }

    #[test]
    fn dimension_three_expansion() {
        let psi = psi_in_exterior(3);
        let half = rat(1, 2);
        let expected = LambdaExpr::one().add(
            &LambdaExpr::exterior(1)
                .sub(&LambdaExpr::constant(RationalPolyInN::n()))
                .scale(&half),
        );
        assert_eq!(psi, expected);
    }

    #[test]
    fn chern_of_unit_is_one() {
        assert_eq!(chern_of(&LambdaExpr::one(), 4), SymmPoly::one(4));
    }
}
