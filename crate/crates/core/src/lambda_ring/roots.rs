//! Brute-force symmetrization in finitely many Chern-root variables.
//!
//! A symmetric function of degree ≤ d is determined by its values in d
//! variables, so expanding both sides of an identity in `d` explicit roots
//! gives an oracle that shares no code with the Newton/power-sum route.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::rational_poly::Rational;
use super::series::FormalSeries;
use super::symm::SymmPoly;

/// A polynomial in `v` explicit variables, keyed by exponent vectors, truncated at total degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPoly {
    vars: usize,
    d_max: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl RootPoly {
    /// The constant `c`.
    pub fn constant(vars: usize, d_max: usize, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars], c);
        }
        Self { vars, d_max, terms }
    }

    /// Number of root variables.
    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Nonzero terms.
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() || e.iter().sum::<u32>() as usize > self.d_max {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Sum.
    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Truncated product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::constant(self.vars, self.d_max.min(rhs.d_max), Rational::zero());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `f(x_j)` for a single variable `j`.
    pub fn series_in_var(vars: usize, j: usize, f: &FormalSeries, d_max: usize) -> Self {
        let mut out = Self::constant(vars, d_max, Rational::zero());
        for k in 0..=f.cutoff().min(d_max) {
            let mut e = vec![0; vars];
            e[j] = k as u32;
            out.add_term(e, f.coeff(k));
        }
        out
    }

    /// The elementary symmetric polynomial `e_k(x_1, …, x_v)`.
    pub fn elementary(vars: usize, k: usize, d_max: usize) -> Self {
        let mut out = Self::constant(vars, d_max, Rational::zero());
        fn rec(start: usize, left: usize, cur: &mut Vec<u32>, out: &mut RootPoly) {
            if left == 0 {
                out.add_term(cur.clone(), Rational::from_integer(1.into()));
                return;
            }
            for j in start..cur.len() {
                cur[j] = 1;
                rec(j + 1, left - 1, cur, out);
                cur[j] = 0;
            }
        }
        rec(0, k, &mut vec![0; vars], &mut out);
        out
    }
}

/// `Π_{j=1}^{v} f(x_j)` expanded in `v` root variables and truncated at degree `d_max`.
pub fn product_over_roots(f: &FormalSeries, vars: usize, d_max: usize) -> RootPoly {
    let mut acc = RootPoly::constant(vars, d_max, Rational::from_integer(1.into()));
    for j in 0..vars {
        acc = acc.mul(&RootPoly::series_in_var(vars, j, f, d_max));
    }
    acc
}

/// Substitutes `σ_k = e_k(x_1, …, x_v)` into a symmetric polynomial whose coefficients are
/// evaluated at the rank value `n = n_value`.
pub fn expand_in_roots(s: &SymmPoly, vars: usize, n_value: &Rational) -> RootPoly {
    let d = s.d_max();
    let elementary: Vec<RootPoly> = (1..=d).map(|k| RootPoly::elementary(vars, k, d)).collect();
    let mut out = RootPoly::constant(vars, d, Rational::zero());
    for (m, c) in s.terms() {
        let mut term = RootPoly::constant(vars, d, c.eval(n_value));
        for &part in m.parts() {
            term = term.mul(&elementary[part as usize - 1]);
        }
        out = out.add(&term);
    }
    out
}
