//! Graded polynomials in symmetric-function generators, truncated at a degree cutoff.
//!
//! One container serves three bases that differ only in how generators are
//! read: elementary symmetric functions `σ_i`, power sums `p_i`, and the
//! Grothendieck γ-classes `γ_i`. Every generator `g_i` has degree `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_traits::One;

use super::rational_poly::{rat, Rational, RationalPolyInN};
use super::series::FormalSeries;
use crate::error::{Error, Result};

/// A monomial `g_{λ₁} g_{λ₂} ⋯` written as a non-increasing list of generator indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    /// The empty partition (the unit monomial).
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `Σ λ_i`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Concatenation (the product of monomials).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// All partitions of `k` (non-increasing parts), in lexicographically decreasing order.
    pub fn all_of(k: usize) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k as u32, k as u32, &mut Vec::new(), &mut out);
        out
    }
}

/// Naming of the generators of a [`GradedPoly`].
pub trait Basis: Clone + fmt::Debug + Default + PartialEq + Eq {
    /// Printed generator stem.
    const SYMBOL: &'static str;
}

/// Elementary symmetric functions σ_i (Chern classes when read in Chern roots).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Elementary;
impl Basis for Elementary {
    const SYMBOL: &'static str = "σ";
}

/// Power sums `p_i = Σ_j x_j^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerSum;
impl Basis for PowerSum {
    const SYMBOL: &'static str = "p";
}

/// Grothendieck γ-classes γ_i.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Gamma;
impl Basis for Gamma {
    const SYMBOL: &'static str = "γ";
}

/// A polynomial in generators of the basis `B`, with coefficients in ℚ\[n\],
/// truncated at total degree `d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly<B: Basis> {
    terms: BTreeMap<Partition, RationalPolyInN>,
    d_max: usize,
    _basis: PhantomData<B>,
}

/// Polynomial in elementary symmetric functions.
pub type SymmPoly = GradedPoly<Elementary>;
/// Polynomial in power sums.
pub type PowerSumPoly = GradedPoly<PowerSum>;
/// Polynomial in γ-classes.
pub type GammaPoly = GradedPoly<Gamma>;

impl<B: Basis> GradedPoly<B> {
    /// The zero polynomial with cutoff `d_max`.
    pub fn zero(d_max: usize) -> Self {
        Self {
            terms: BTreeMap::new(),
            d_max,
            _basis: PhantomData,
        }
    }

    /// The constant 1.
    pub fn one(d_max: usize) -> Self {
        Self::constant(RationalPolyInN::one(), d_max)
    }

    /// A constant (degree-0) polynomial.
    pub fn constant(c: RationalPolyInN, d_max: usize) -> Self {
        Self::monomial(Partition::empty(), c, d_max)
    }

    /// The generator `g_i` (`g_0` is read as 1).
    pub fn generator(i: u32, d_max: usize) -> Self {
        Self::monomial(Partition::new(vec![i]), RationalPolyInN::one(), d_max)
    }

    /// A single term; dropped if its degree exceeds the cutoff or the coefficient is zero.
    pub fn monomial(m: Partition, c: RationalPolyInN, d_max: usize) -> Self {
        let mut p = Self::zero(d_max);
        p.add_term(m, c);
        p
    }

    /// Degree cutoff.
    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Nonzero terms keyed by monomial.
    pub fn terms(&self) -> &BTreeMap<Partition, RationalPolyInN> {
        &self.terms
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Partition) -> RationalPolyInN {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of the monomial with the given parts.
    pub fn coeff_of(&self, parts: &[u32]) -> RationalPolyInN {
        self.coeff(&Partition::new(parts.to_vec()))
    }

    /// True if every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulates `c · m` in place, respecting the cutoff.
    pub fn add_term(&mut self, m: Partition, c: RationalPolyInN) {
        if c.is_zero() || m.degree() > self.d_max {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Sum; the cutoff is the smaller one.
    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.truncate(self.d_max.min(rhs.d_max));
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Difference; the cutoff is the smaller one.
    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale_poly(&-&RationalPolyInN::one()))
    }

    /// Truncated product; the cutoff is the smaller one.
    pub fn mul(&self, rhs: &Self) -> Self {
        let d = self.d_max.min(rhs.d_max);
        let mut out = Self::zero(d);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > d {
                continue;
            }
            for (mb, cb) in &rhs.terms {
                if da + mb.degree() > d {
                    continue;
                }
                out.add_term(ma.union(mb), ca * cb);
            }
        }
        out
    }

    /// `self^k`, truncated.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.d_max);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies every coefficient by a polynomial in `n`.
    pub fn scale_poly(&self, c: &RationalPolyInN) -> Self {
        let mut out = Self::zero(self.d_max);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale(&self, c: &Rational) -> Self {
        self.scale_poly(&RationalPolyInN::constant(c.clone()))
    }

    /// Drops all terms above degree `d` and lowers the cutoff to `d`.
    pub fn truncate(&self, d: usize) -> Self {
        let d = d.min(self.d_max);
        let mut out = Self::zero(d);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The homogeneous component of degree `k`.
    pub fn homogeneous(&self, k: usize) -> Self {
        let mut out = Self::zero(self.d_max);
        for (m, c) in self.terms.iter().filter(|(m, _)| m.degree() == k) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Reinterprets the same coefficients in another basis (a pure renaming of generators).
    pub fn relabel<C: Basis>(&self) -> GradedPoly<C> {
        GradedPoly {
            terms: self.terms.clone(),
            d_max: self.d_max,
            _basis: PhantomData,
        }
    }

    /// Ring homomorphism `g_i ↦ images[i − 1]` into another graded algebra, truncated at `d`.
    pub fn substitute<C: Basis>(&self, images: &[GradedPoly<C>], d: usize) -> GradedPoly<C> {
        let mut out = GradedPoly::<C>::zero(d);
        for (m, c) in &self.terms {
            let mut term = GradedPoly::<C>::constant(c.clone(), d);
            for &part in m.parts() {
                term = term.mul(&images[part as usize - 1]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Terms sorted by (degree, monomial) for presentation.
    pub fn sorted_terms(&self) -> Vec<(&Partition, &RationalPolyInN)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| (a.0.degree(), a.0).cmp(&(b.0.degree(), b.0)));
        v
    }

    /// Renders a monomial such as `γ1^2 γ2`.
    pub fn monomial_name(m: &Partition) -> String {
        if m.parts().is_empty() {
            return "1".to_string();
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &p in m.parts() {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .iter()
            .map(|(&g, &e)| {
                if e == 1 {
                    format!("{}{}", B::SYMBOL, g)
                } else {
                    format!("{}{}^{}", B::SYMBOL, g, e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl<B: Basis> fmt::Display for GradedPoly<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let coeff = match c.as_constant() {
                    Some(q) => q.to_string(),
                    None => format!("({c})"),
                };
                if m.parts().is_empty() {
                    coeff
                } else {
                    format!("{coeff}·{}", Self::monomial_name(m))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Power sums `p_1 … p_d` expressed in elementary symmetric functions (Newton's identities).
pub fn power_sums_in_elementary(d_max: usize) -> Vec<SymmPoly> {
    let mut p: Vec<SymmPoly> = Vec::with_capacity(d_max);
    for k in 1..=d_max {
        // p_k = Σ_{i=1}^{k−1} (−1)^{i−1} σ_i p_{k−i} + (−1)^{k−1} k σ_k
        let mut acc = SymmPoly::generator(k as u32, d_max).scale(&rat(sign(k - 1) * k as i64, 1));
        for i in 1..k {
            let term = SymmPoly::generator(i as u32, d_max)
                .mul(&p[k - i - 1])
                .scale(&rat(sign(i - 1), 1));
            acc = acc.add(&term);
        }
        p.push(acc);
    }
    p
}

/// Elementary symmetric functions `σ_1 … σ_d` expressed in power sums.
pub fn elementary_in_power_sums(d_max: usize) -> Vec<PowerSumPoly> {
    let mut e: Vec<PowerSumPoly> = vec![PowerSumPoly::one(d_max)];
    for k in 1..=d_max {
        // k σ_k = Σ_{i=1}^{k} (−1)^{i−1} σ_{k−i} p_i
        let mut acc = PowerSumPoly::zero(d_max);
        for i in 1..=k {
            let term = e[k - i]
                .mul(&PowerSumPoly::generator(i as u32, d_max))
                .scale(&rat(sign(i - 1), 1));
            acc = acc.add(&term);
        }
        e.push(acc.scale(&rat(1, k as i64)));
    }
    e.remove(0);
    e
}

/// Rewrites a polynomial in power sums as a polynomial in elementary symmetric functions.
pub fn newton_convert(p_basis: &PowerSumPoly) -> SymmPoly {
    let images = power_sums_in_elementary(p_basis.d_max());
    p_basis.substitute(&images, p_basis.d_max())
}

/// Inverse of [`newton_convert`]: elementary symmetric functions back to power sums.
pub fn newton_invert(s: &SymmPoly) -> PowerSumPoly {
    let images = elementary_in_power_sums(s.d_max());
    s.substitute(&images, s.d_max())
}

/// The symmetric expansion `P(σ₁, σ₂, …)` of `Π_j f(x_j)`, truncated at degree `d_max`.
///
/// Symmetrization runs through power sums: `Π_j f(x_j) = exp(Σ_k c_k p_k)` where
/// `ln f(x) = Σ_k c_k x^k`, followed by [`newton_convert`].
pub fn multiplicative_op(f: &FormalSeries, d_max: usize) -> Result<SymmPoly> {
    if !f.coeff(0).is_one() {
        return Err(Error::precondition(format!(
            "multiplicative sequence needs constant term 1, got {}",
            f.coeff(0)
        )));
    }
    let truncated = FormalSeries::new(f.coeffs().to_vec(), d_max.min(f.cutoff()));
    let log = truncated.log()?;
    let mut x = PowerSumPoly::zero(d_max);
    for k in 1..=log.cutoff() {
        x = x.add(&PowerSumPoly::generator(k as u32, d_max).scale(&log.coeff(k)));
    }
    // exp(x) = Σ_j x^j / j!; x has no constant term so the sum stops at j = d_max.
    let mut acc = PowerSumPoly::one(d_max);
    let mut power = PowerSumPoly::one(d_max);
    let mut fact = Rational::one();
    for j in 1..=d_max {
        power = power.mul(&x);
        fact *= rat(j as i64, 1);
        acc = acc.add(&power.scale(&fact.recip()));
    }
    Ok(newton_convert(&acc))
}

/// Todd class `Π_j x_j/(1 − e^{−x_j})` as a polynomial in Chern classes.
pub fn todd_symmetric(d_max: usize) -> SymmPoly {
    multiplicative_op(&super::series::todd_series(d_max), d_max)
        .expect("Todd series has constant term 1")
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn newton_low_degrees_match_classical_formulas() {
        let p = power_sums_in_elementary(3);
        assert_eq!(p[0], SymmPoly::generator(1, 3));
        assert_eq!(p[1].coeff(&sigma(&[1, 1])), RationalPolyInN::one());
        assert_eq!(p[1].coeff(&sigma(&[2])), RationalPolyInN::from_ratio(-2, 1));
        assert_eq!(p[2].coeff(&sigma(&[1, 1, 1])), RationalPolyInN::one());
        assert_eq!(p[2].coeff(&sigma(&[2, 1])), RationalPolyInN::from_ratio(-3, 1));
        assert_eq!(p[2].coeff(&sigma(&[3])), RationalPolyInN::from_ratio(3, 1));
        assert_eq!(p[2].terms().len(), 3);
    }

    #[test]
    fn partitions_are_counted_correctly() {
        let counts: Vec<usize> = (0..=10).map(|k| Partition::all_of(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn one_plus_x_gives_total_elementary_class() {
        let s = multiplicative_op(&FormalSeries::one_plus_x(5), 5).unwrap();
        let mut expected = SymmPoly::one(5);
        for i in 1..=5 {
            expected = expected.add(&SymmPoly::generator(i, 5));
        }
        assert_eq!(s, expected);
    }

    #[test]
    fn display_orders_by_degree() {
        let s = SymmPoly::one(2)
            .add(&SymmPoly::generator(2, 2).scale(&rat(7, 12)))
            .add(&SymmPoly::generator(1, 2).scale(&rat(1, 2)));
        assert_eq!(s.to_string(), "1 + 1/2·σ1 + 7/12·σ2");
    }

    #[test]
    fn truncation_discards_high_degree_terms() {
        let s = SymmPoly::generator(1, 2).pow(3);
        assert!(s.is_zero());
    }
}
