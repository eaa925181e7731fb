//! Elements of the crossed product `C∞(S*T³, Mat_N) ⋊ ℤ` and their algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::eval::{build, Evaluator, Sum};
use super::phase::{PhasePoint, ShiftMap};
use crate::error::{Error, Result};
use crate::linalg::{c64, frobenius, identity, CMat, C64};

/// A finitely supported sequence `k ↦ a(k)` of matrix-valued evaluators on `S*T³`,
/// representing `Σ_k a(k) T^k`.
#[derive(Clone)]
pub struct CrossedSymbol {
    rank: usize,
    components: BTreeMap<i32, Evaluator>,
}

impl fmt::Debug for CrossedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CrossedSymbol(rank {}, support {:?})", self.rank, self.support())
    }
}

impl CrossedSymbol {
    /// Builds a symbol from components; all must have size `rank`.
    pub fn new(rank: usize, components: impl IntoIterator<Item = (i32, Evaluator)>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::structural("symbol rank must be positive"));
        }
        let mut map: BTreeMap<i32, Evaluator> = BTreeMap::new();
        for (k, e) in components {
            if e.size() != rank {
                return Err(Error::structural(format!(
                    "component {k} has size {} but the symbol rank is {rank}",
                    e.size()
                )));
            }
            let merged = match map.remove(&k) {
                Some(prev) => build::add(&prev, &e),
                None => e,
            };
            map.insert(k, merged);
        }
        Ok(Self {
            rank,
            components: map,
        })
    }

    /// The unit `𝟏`: a single identity component at `k = 0`.
    pub fn identity(rank: usize) -> Self {
        Self::new(rank, [(0, build::one(rank))]).expect("rank is positive")
    }

    /// The shift `T` itself (identity coefficient at `k = 1`).
    pub fn shift(rank: usize) -> Self {
        Self::new(rank, [(1, build::one(rank))]).expect("rank is positive")
    }

    /// A symbol with a single component at `k = 0`.
    pub fn scalar_part(e: Evaluator) -> Self {
        let rank = e.size();
        Self::new(rank, [(0, e)]).expect("evaluator has positive size")
    }

    /// Matrix size `N`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The finite support, in increasing order.
    pub fn support(&self) -> Vec<i32> {
        self.components.keys().copied().collect()
    }

    /// Component at `k`, if present.
    pub fn component(&self, k: i32) -> Option<&Evaluator> {
        self.components.get(&k)
    }

    /// All components.
    pub fn components(&self) -> &BTreeMap<i32, Evaluator> {
        &self.components
    }

    /// Values of all components at `z`.
    pub fn eval(&self, z: &PhasePoint) -> BTreeMap<i32, CMat> {
        self.components.iter().map(|(k, e)| (*k, e.eval(z))).collect()
    }

    /// Sum of two symbols.
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_rank(self, other)?;
        Self::new(
            self.rank,
            self.components
                .iter()
                .chain(other.components.iter())
                .map(|(k, e)| (*k, e.clone())),
        )
    }

    /// Scalar multiple.
    pub fn scale(&self, c: C64) -> Self {
        let comps = self
            .components
            .iter()
            .map(|(k, e)| (*k, Arc::new(Sum(vec![(c, e.clone())])) as Evaluator));
        Self::new(self.rank, comps).expect("same rank")
    }
}

fn check_rank(a: &CrossedSymbol, b: &CrossedSymbol) -> Result<()> {
    if a.rank != b.rank {
        return Err(Error::structural(format!(
            "rank mismatch: {} vs {}",
            a.rank, b.rank
        )));
    }
    Ok(())
}

/// The crossed product `(ab)(k)(z) = Σ_{l+m=k} a(l)(z) · b(m)((∂g)^l z)`.
pub fn multiply(a: &CrossedSymbol, b: &CrossedSymbol, g: &Arc<ShiftMap>) -> Result<CrossedSymbol> {
    check_rank(a, b)?;
    let mut terms: BTreeMap<i32, Vec<Evaluator>> = BTreeMap::new();
    for (&l, al) in &a.components {
        for (&m, bm) in &b.components {
            let shifted = build::pullback(bm, g, l);
            terms
                .entry(l + m)
                .or_default()
                .push(build::product(&[al, &shifted]));
        }
    }
    let comps = terms.into_iter().map(|(k, list)| {
        let e: Evaluator = if list.len() == 1 {
            list.into_iter().next().expect("nonempty")
        } else {
            Arc::new(Sum(list.into_iter().map(|e| (c64(1.0, 0.0), e)).collect()))
        };
        (k, e)
    });
    CrossedSymbol::new(a.rank, comps)
}

/// The direct sum `a ⊕ b` of two symbols of equal rank (block diagonal in every component).
pub fn direct_sum(a: &CrossedSymbol, b: &CrossedSymbol) -> Result<CrossedSymbol> {
    check_rank(a, b)?;
    let n = a.rank;
    let mut keys: Vec<i32> = a.support();
    keys.extend(b.support());
    keys.sort_unstable();
    keys.dedup();
    let comps = keys.into_iter().map(|k| {
        let mut entries = Vec::new();
        if let Some(e) = a.component(k) {
            entries.push((0, 0, e));
        }
        if let Some(e) = b.component(k) {
            entries.push((1, 1, e));
        }
        (k, build::blocks(n, 2, &entries))
    });
    CrossedSymbol::new(2 * n, comps)
}

/// The pointwise trace of the `k = 0` coefficient, `z ↦ tr a(0)(z)`.
#[derive(Clone, Debug)]
pub struct TraceFn(Option<Evaluator>);

impl TraceFn {
    /// Value at `z`.
    pub fn eval(&self, z: &PhasePoint) -> C64 {
        match &self.0 {
            Some(e) => e.eval(z).trace(),
            None => c64(0.0, 0.0),
        }
    }
}

/// Extracts `z ↦ tr a(0)(z)`.
pub fn tau_component(a: &CrossedSymbol) -> TraceFn {
    TraceFn(a.component(0).cloned())
}

/// The special two-term symbol `σ = d₀ · (p ∘ ∂g) · T + (1 − p)`, i.e. the symbol of
/// `D₀ T P + (1 − P)` with `σ(D₀) = d₀`.
///
/// `p` must be idempotent on the supplied sample points (within `1e−10`).
pub fn two_term_symbol(
    p: &Evaluator,
    d0: &Evaluator,
    g: &Arc<ShiftMap>,
    samples: &[PhasePoint],
) -> Result<CrossedSymbol> {
    let deviation = samples
        .iter()
        .map(|z| {
            let v = p.eval(z);
            frobenius(&(&v * &v - &v))
        })
        .fold(0.0, f64::max);
    if !(deviation <= 1e-10) {
        return Err(Error::precondition(format!(
            "p is not idempotent on the sample set: max ‖p² − p‖ = {deviation:.3e}"
        )));
    }
    let q = build::pullback(p, g, 1);
    CrossedSymbol::new(
        p.size(),
        [(1, build::product(&[d0, &q])), (0, build::one_minus(p))],
    )
}

/// Smallest singular value over the samples of `d₀(z)` restricted as a map
/// `im p((∂g)z) → im p(z)`; positive values certify the two-term ellipticity condition there.
pub fn two_term_isomorphism_margin(
    p: &Evaluator,
    d0: &Evaluator,
    g: &Arc<ShiftMap>,
    samples: &[PhasePoint],
) -> f64 {
    samples
        .iter()
        .map(|z| {
            let pz = p.eval(z);
            let qz = p.eval(&g.apply(z, 1));
            let v = range_basis(&pz);
            let u = range_basis(&qz);
            if u.ncols() != v.ncols() {
                return 0.0;
            }
            if u.ncols() == 0 {
                return f64::INFINITY;
            }
            let m = v.adjoint() * d0.eval(z) * u;
            crate::linalg::min_singular_value(&m)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Orthonormal basis of the range of a projection (columns).
pub(crate) fn range_basis(p: &CMat) -> CMat {
    let svd = p.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 0.5)
        .collect();
    CMat::from_fn(p.nrows(), cols.len(), |i, j| u[(i, cols[j])])
}

/// Pointwise check that `a` equals the unit at `z`: `‖a(0) − 1‖_F` and `‖a(k)‖_F` for `k ≠ 0`,
/// returning the maximum deviation.
pub fn deviation_from_identity(a: &CrossedSymbol, z: &PhasePoint) -> f64 {
    let id = identity(a.rank);
    let mut worst: f64 = if a.component(0).is_none() { frobenius(&id) } else { 0.0 };
    for (k, e) in a.components() {
        let v = e.eval(z);
        let d = if *k == 0 { frobenius(&(v - &id)) } else { frobenius(&v) };
        if !d.is_finite() {
            return f64::INFINITY;
        }
        worst = worst.max(d);
    }
    worst
}
