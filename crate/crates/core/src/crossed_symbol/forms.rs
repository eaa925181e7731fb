//! Traces of products of crossed-product-valued differential forms.
//!
//! A product `a₀ · da₁ · a₂ · da₃ ⋯` of symbols and their differentials is a form with
//! values in the crossed product; its `k = 0` coefficient, traced and evaluated on a tangent
//! frame `(e₁, …, e_D)` at a base point `z`, is
//!
//! `Σ tr[ a₀(k₀)(z) · da₁(k₁)(z₁)[·] ⋯ ]`, with `z_j = (∂g)^{k₀+⋯+k_{j−1}} z`,
//!
//! where the differentials are fed the pushed-forward frame vectors and the result is
//! antisymmetrized over the frame. This is evaluated by dynamic programming over the pair
//! (accumulated shift, set of frame vectors already used), which is equivalent to summing
//! over all orderings of the frame with signs but shares the common prefixes.

use std::collections::{BTreeMap, HashMap};

use super::eval::Jet;
use super::phase::{PhasePoint, ShiftMap, Tangent};
use super::symbol::CrossedSymbol;
use crate::linalg::{c64, CMat, C64};

/// One factor of a form product.
#[derive(Clone, Copy, Debug)]
pub enum Factor<'a> {
    /// The symbol itself (a 0-form).
    Value(&'a CrossedSymbol),
    /// Its differential (a 1-form).
    Differential(&'a CrossedSymbol),
}

impl<'a> Factor<'a> {
    fn symbol(&self) -> &'a CrossedSymbol {
        match self {
            Factor::Value(s) | Factor::Differential(s) => s,
        }
    }
}

/// Lazily computed jets of each distinct symbol at each shifted point.
struct JetCache<'a> {
    g: &'a ShiftMap,
    z: PhasePoint,
    frame: Vec<Tangent>,
    symbols: Vec<&'a CrossedSymbol>,
    jets: HashMap<(usize, i32), BTreeMap<i32, Jet>>,
}

impl<'a> JetCache<'a> {
    fn get(&mut self, sym: usize, shift: i32) -> &BTreeMap<i32, Jet> {
        let key = (sym, shift);
        if !self.jets.contains_key(&key) {
            let (w, pushed) = self.g.push(&self.z, &self.frame, shift);
            let comps = self.symbols[sym]
                .components()
                .iter()
                .map(|(k, e)| (*k, e.jet(&w, &pushed)))
                .collect();
            self.jets.insert(key, comps);
        }
        &self.jets[&key]
    }
}

/// `tr (Π factors)₀` evaluated on the frame; the number of differential factors must equal
/// `frame.len()` (otherwise the top-degree component is zero and zero is returned).
pub fn trace_form_product(
    factors: &[Factor<'_>],
    g: &ShiftMap,
    z: &PhasePoint,
    frame: &[Tangent],
) -> C64 {
    let degree = factors
        .iter()
        .filter(|f| matches!(f, Factor::Differential(_)))
        .count();
    if degree != frame.len() || factors.is_empty() {
        return c64(0.0, 0.0);
    }
    let rank = factors[0].symbol().rank();
    match rank {
        1 => return trace_form_product_fixed::<1>(factors, g, z, frame),
        2 => return trace_form_product_fixed::<2>(factors, g, z, frame),
        3 => return trace_form_product_fixed::<3>(factors, g, z, frame),
        4 => return trace_form_product_fixed::<4>(factors, g, z, frame),
        _ => trace_form_product_general(factors, g, z, frame, rank),
    }
}

/// Dynamic-size version of the recursion, used for matrix sizes without a fixed path.
fn trace_form_product_general(
    factors: &[Factor<'_>],
    g: &ShiftMap,
    z: &PhasePoint,
    frame: &[Tangent],
    rank: usize,
) -> C64 {
    // Deduplicate symbols by identity so repeated factors share cached jets.
    let mut symbols: Vec<&CrossedSymbol> = Vec::new();
    let ids: Vec<usize> = factors
        .iter()
        .map(|f| {
            let s = f.symbol();
            match symbols.iter().position(|t| std::ptr::eq(*t, s)) {
                Some(i) => i,
                None => {
                    symbols.push(s);
                    symbols.len() - 1
                }
            }
        })
        .collect();

    // Reach of the remaining factors: the accumulated shift must be able to return to 0.
    let mut lo_suffix = vec![0i32; factors.len() + 1];
    let mut hi_suffix = vec![0i32; factors.len() + 1];
    for j in (0..factors.len()).rev() {
        let supp = factors[j].symbol().support();
        let (lo, hi) = (
            supp.first().copied().unwrap_or(0),
            supp.last().copied().unwrap_or(0),
        );
        lo_suffix[j] = lo_suffix[j + 1] + lo;
        hi_suffix[j] = hi_suffix[j + 1] + hi;
    }

    let mut cache = JetCache {
        g,
        z: *z,
        frame: frame.to_vec(),
        symbols,
        jets: HashMap::new(),
    };

    let mut states: BTreeMap<(i32, u32), CMat> = BTreeMap::new();
    states.insert((0, 0), CMat::identity(rank, rank));
    for (j, factor) in factors.iter().enumerate() {
        let mut next: BTreeMap<(i32, u32), CMat> = BTreeMap::new();
        for ((s, mask), acc) in &states {
            let comps = cache.get(ids[j], *s);
            for (k, jet) in comps {
                let t = s + k;
                if t + lo_suffix[j + 1] > 0 || t + hi_suffix[j + 1] < 0 {
                    continue;
                }
                match factor {
                    Factor::Value(_) => {
                        let v = acc * &jet.value;
                        accumulate(&mut next, (t, *mask), v);
                    }
                    Factor::Differential(_) => {
                        for (i, d) in jet.derivs.iter().enumerate() {
                            let bit = 1u32 << i;
                            if mask & bit != 0 {
                                continue;
                            }
                            let inversions = (mask >> (i + 1)).count_ones();
                            let mut v = acc * d;
                            if inversions % 2 == 1 {
                                v.neg_mut();
                            }
                            accumulate(&mut next, (t, mask | bit), v);
                        }
                    }
                }
            }
        }
        states = next;
    }
    let full = if frame.is_empty() { 0 } else { (1u32 << frame.len()) - 1 };
    states
        .get(&(0, full))
        .map(|m| m.trace())
        .unwrap_or_else(|| c64(0.0, 0.0))
}

/// A small matrix stored on the stack.
type Block<const N: usize> = [[C64; N]; N];

fn to_block<const N: usize>(m: &CMat) -> Block<N> {
    let mut b = [[c64(0.0, 0.0); N]; N];
    for (r, row) in b.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = m[(r, c)];
        }
    }
    b
}

/// `out += sign · a b`.
#[inline(always)]
fn mul_add<const N: usize>(out: &mut Block<N>, a: &Block<N>, b: &Block<N>, sign: f64) {
    for r in 0..N {
        for k in 0..N {
            let x = a[r][k] * sign;
            for c in 0..N {
                out[r][c] += x * b[k][c];
            }
        }
    }
}

/// Jets of the components of one symbol at one shifted point, as stack blocks.
struct BlockJets<const N: usize> {
    shifts: Vec<i32>,
    values: Vec<Block<N>>,
    /// `derivs[c * D + i]`: derivative of component `c` along frame vector `i`.
    derivs: Vec<Block<N>>,
}

/// Same recursion as the general path with fixed-size matrices and dense state tables
/// indexed by (accumulated shift, used frame vectors); no allocation inside the loop.
fn trace_form_product_fixed<const N: usize>(
    factors: &[Factor<'_>],
    g: &ShiftMap,
    z: &PhasePoint,
    frame: &[Tangent],
) -> C64 {
    let zero = c64(0.0, 0.0);
    let dim = frame.len();
    let masks = 1usize << dim;

    let mut symbols: Vec<&CrossedSymbol> = Vec::new();
    let ids: Vec<usize> = factors
        .iter()
        .map(|f| {
            let s = f.symbol();
            match symbols.iter().position(|t| std::ptr::eq(*t, s)) {
                Some(i) => i,
                None => {
                    symbols.push(s);
                    symbols.len() - 1
                }
            }
        })
        .collect();

    let mut lo_suffix = vec![0i32; factors.len() + 1];
    let mut hi_suffix = vec![0i32; factors.len() + 1];
    let (mut smin, mut smax) = (0i32, 0i32);
    for j in (0..factors.len()).rev() {
        let supp = factors[j].symbol().support();
        let (lo, hi) = (
            supp.first().copied().unwrap_or(0),
            supp.last().copied().unwrap_or(0),
        );
        lo_suffix[j] = lo_suffix[j + 1] + lo;
        hi_suffix[j] = hi_suffix[j + 1] + hi;
        smin += lo.min(0);
        smax += hi.max(0);
    }
    let nshift = (smax - smin + 1) as usize;

    let mut jets: Vec<Option<BlockJets<N>>> = (0..symbols.len() * nshift).map(|_| None).collect();
    let ensure = |sym: usize, shift: i32, jets: &mut Vec<Option<BlockJets<N>>>| -> usize {
        let slot = sym * nshift + (shift - smin) as usize;
        if jets[slot].is_none() {
            let (w, pushed) = g.push(z, frame, shift);
            let comps = symbols[sym].components();
            let mut bj = BlockJets {
                shifts: Vec::with_capacity(comps.len()),
                values: Vec::with_capacity(comps.len()),
                derivs: Vec::with_capacity(comps.len() * dim),
            };
            for (k, e) in comps {
                let jet = e.jet(&w, &pushed);
                bj.shifts.push(*k);
                bj.values.push(to_block(&jet.value));
                bj.derivs.extend(jet.derivs.iter().map(to_block));
            }
            jets[slot] = Some(bj);
        }
        slot
    };

    let size = nshift * masks;
    let mut cur: Vec<Block<N>> = vec![[[zero; N]; N]; size];
    let mut cur_live = vec![false; size];
    let mut next: Vec<Block<N>> = vec![[[zero; N]; N]; size];
    let mut next_live = vec![false; size];
    let origin = (-smin) as usize * masks;
    for (i, row) in cur[origin].iter_mut().enumerate() {
        row[i] = c64(1.0, 0.0);
    }
    cur_live[origin] = true;

    for (j, factor) in factors.iter().enumerate() {
        next_live.iter_mut().for_each(|l| *l = false);
        for state in 0..size {
            if !cur_live[state] {
                continue;
            }
            let s = (state / masks) as i32 + smin;
            let mask = state % masks;
            let slot = ensure(ids[j], s, &mut jets);
            let bj = jets[slot].as_ref().expect("jet computed above");
            for (c, &k) in bj.shifts.iter().enumerate() {
                let t = s + k;
                if t + lo_suffix[j + 1] > 0 || t + hi_suffix[j + 1] < 0 {
                    continue;
                }
                let row = (t - smin) as usize * masks;
                match factor {
                    Factor::Value(_) => {
                        let target = row + mask;
                        if !next_live[target] {
                            next[target] = [[zero; N]; N];
                            next_live[target] = true;
                        }
                        let acc = cur[state];
                        mul_add(&mut next[target], &acc, &bj.values[c], 1.0);
                    }
                    Factor::Differential(_) => {
                        for i in 0..dim {
                            let bit = 1usize << i;
                            if mask & bit != 0 {
                                continue;
                            }
                            let sign = if (mask >> (i + 1)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                            let target = row + (mask | bit);
                            if !next_live[target] {
                                next[target] = [[zero; N]; N];
                                next_live[target] = true;
                            }
                            let acc = cur[state];
                            mul_add(&mut next[target], &acc, &bj.derivs[c * dim + i], sign);
                        }
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        std::mem::swap(&mut cur_live, &mut next_live);
    }
    let last = origin + masks - 1;
    if !cur_live[last] {
        return zero;
    }
    (0..N).map(|i| cur[last][i][i]).sum()
}

fn accumulate(map: &mut BTreeMap<(i32, u32), CMat>, key: (i32, u32), v: CMat) {
    match map.get_mut(&key) {
        Some(m) => *m += v,
        None => {
            map.insert(key, v);
        }
    }
}

/// `tr((a⁻¹ da)^{r})₀` on the frame, for `r = frame.len()`.
pub fn trace_maurer_cartan_power(
    a: &CrossedSymbol,
    a_inv: &CrossedSymbol,
    g: &ShiftMap,
    z: &PhasePoint,
    frame: &[Tangent],
) -> C64 {
    let mut factors = Vec::with_capacity(2 * frame.len());
    for _ in 0..frame.len() {
        factors.push(Factor::Value(a_inv));
        factors.push(Factor::Differential(a));
    }
    trace_form_product(&factors, g, z, frame)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::crossed_symbol::full_frame;
    use crate::torus_model::{example_symbols, LatticeDiracMap};

    #[test]
    fn fixed_size_path_matches_general_path() {
        let shift = Arc::new(ShiftMap::cat());
        let f = Arc::new(LatticeDiracMap::for_degree(1).unwrap());
        let ex = example_symbols(f, shift.clone()).unwrap();
        let z = PhasePoint::new([0.3, 1.1, -0.7], [0.2, -0.5, 0.8]).unwrap();
        let frame = full_frame(&z);
        for r in 1..=5 {
            let mut factors = Vec::new();
            for _ in 0..r {
                factors.push(Factor::Value(&ex.sigma_b));
                factors.push(Factor::Differential(&ex.sigma_d));
            }
            let fast = trace_form_product(&factors, &shift, &z, &frame[..r]);
            let slow = trace_form_product_general(&factors, &shift, &z, &frame[..r], 4);
            let scale = slow.norm().max(1.0);
            assert!((fast - slow).norm() < 1e-12 * scale, "r={r}: {fast} vs {slow}");
        }
    }
}
