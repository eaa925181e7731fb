//! Crossed-product symbol algebra: composition against a direct evaluation of the twisted
//! product, algebraic identities, ellipticity certificates, form traces against an explicit
//! signed sum over orderings, and consistency of the sparse lattice assembly.

use std::sync::Arc;

use nalgebra::Vector3;
use ncindex::chern_numeric::TorusGrid;
use ncindex::crossed_symbol::{
    build, check_elliptic, full_frame, multiply, trace_form_product, CrossedSymbol, Evaluator, Factor,
    PhasePoint, SampleSet, ShiftMap, Tangent,
};
use ncindex::linalg::{c64, CMat, C64};
use ncindex::torus_model::{assemble, example_symbols, ExampleSymbols, LatticeDiracMap, LatticeWindow, Which};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cat() -> Arc<ShiftMap> {
    Arc::new(ShiftMap::cat())
}

fn example(degree: i32) -> ExampleSymbols {
    example_symbols(Arc::new(LatticeDiracMap::for_degree(degree).unwrap()), cat()).unwrap()
}

/// A smooth matrix function: each entry is `Σ c · e^{i n·x} · (1 + v·ξ)` with random data.
fn random_evaluator(size: usize, rng: &mut ChaCha8Rng, depends_on_xi: bool) -> Evaluator {
    let terms: Vec<(usize, usize, [f64; 3], [f64; 3], C64)> = (0..3 * size * size)
        .map(|t| {
            let n = [
                rng.random_range(-1..=1) as f64,
                rng.random_range(-1..=1) as f64,
                rng.random_range(-1..=1) as f64,
            ];
            let v = if depends_on_xi {
                [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
            } else {
                [0.0; 3]
            };
            let c = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            ((t / 3) / size, (t / 3) % size, n, v, c)
        })
        .collect();
    build::closure(size, "random", move |z| {
        let mut m = CMat::zeros(size, size);
        for (r, c, n, v, coeff) in &terms {
            let phase = n[0] * z.x()[0] + n[1] * z.x()[1] + n[2] * z.x()[2];
            let profile = 1.0 + v[0] * z.xi()[0] + v[1] * z.xi()[1] + v[2] * z.xi()[2];
            m[(*r, *c)] += coeff * c64(phase.cos(), phase.sin()) * profile;
        }
        m
    })
}

fn random_symbol(size: usize, support: &[i32], rng: &mut ChaCha8Rng, depends_on_xi: bool) -> CrossedSymbol {
    CrossedSymbol::new(size, support.iter().map(|&k| (k, random_evaluator(size, rng, depends_on_xi)))).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng) -> PhasePoint {
    let x = [rng.random_range(0.0..6.28), rng.random_range(0.0..6.28), rng.random_range(0.0..6.28)];
    let xi = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    PhasePoint::new(x, xi).unwrap()
}

fn max_gap(a: &CrossedSymbol, b: &CrossedSymbol, z: &PhasePoint) -> f64 {
    let (va, vb) = (a.eval(z), b.eval(z));
    let mut keys: Vec<i32> = va.keys().chain(vb.keys()).copied().collect();
    keys.dedup();
    let zero = CMat::zeros(a.rank(), a.rank());
    keys.iter()
        .map(|k| (va.get(k).unwrap_or(&zero) - vb.get(k).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

#[test]
fn product_matches_the_twisted_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = cat();
    let a = random_symbol(3, &[-1, 0, 2], &mut rng, true);
    let b = random_symbol(3, &[0, 1], &mut rng, true);
    let ab = multiply(&a, &b, &g).unwrap();
    for _ in 0..20 {
        let z = random_point(&mut rng);
        let got = ab.eval(&z);
        for k in -1..=3 {
            let mut expected = CMat::zeros(3, 3);
            for (&l, al) in a.components() {
                if let Some(bm) = b.component(k - l) {
                    expected += al.eval(&z) * bm.eval(&g.apply(&z, l));
                }
            }
            let value = got.get(&k).cloned().unwrap_or_else(|| CMat::zeros(3, 3));
            assert!((value - expected).norm() < 1e-12, "component {k}");
        }
    }
}

#[test]
fn product_is_associative_with_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = cat();
    let a = random_symbol(2, &[-1, 1], &mut rng, true);
    let b = random_symbol(2, &[0, 1], &mut rng, true);
    let c = random_symbol(2, &[-2, 0], &mut rng, true);
    let left = multiply(&multiply(&a, &b, &g).unwrap(), &c, &g).unwrap();
    let right = multiply(&a, &multiply(&b, &c, &g).unwrap(), &g).unwrap();
    let one = CrossedSymbol::identity(2);
    let a1 = multiply(&a, &one, &g).unwrap();
    let one_a = multiply(&one, &a, &g).unwrap();
    for _ in 0..20 {
        let z = random_point(&mut rng);
        assert!(max_gap(&left, &right, &z) < 1e-11);
        assert!(max_gap(&a1, &a, &z) < 1e-14);
        assert!(max_gap(&one_a, &a, &z) < 1e-14);
    }
}

#[test]
fn shift_conjugates_by_the_codifferential() {
    // T a T⁻¹ = a ∘ ∂g, supported where a is.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let g = cat();
    let a = random_symbol(2, &[0, 1], &mut rng, true);
    let t = CrossedSymbol::shift(2);
    let t_inv = CrossedSymbol::new(2, [(-1, build::one(2))]).unwrap();
    let conj = multiply(&multiply(&t, &a, &g).unwrap(), &t_inv, &g).unwrap();
    for _ in 0..10 {
        let z = random_point(&mut rng);
        let moved = g.apply(&z, 1);
        for (k, e) in a.components() {
            let got = conj.component(*k).expect("same support").eval(&z);
            assert!((got - e.eval(&moved)).norm() < 1e-12);
        }
    }
}

#[test]
fn trace_is_cyclic_for_an_invariant_measure() {
    // x-only symbols: the cat map preserves the Haar measure of T³, so
    // ∫ tr (ab)(0) = ∫ tr (ba)(0). The integrands are trigonometric polynomials of degree ≤ 9,
    // so a 24³ grid integrates them exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let g = cat();
    let a = random_symbol(2, &[-1, 0, 1], &mut rng, false);
    let b = random_symbol(2, &[-1, 0, 1], &mut rng, false);
    let ab = multiply(&a, &b, &g).unwrap();
    let ba = multiply(&b, &a, &g).unwrap();
    let grid = TorusGrid::new(24).unwrap();
    let tau = |s: &CrossedSymbol| -> C64 {
        let e = s.component(0).unwrap();
        grid.nodes()
            .iter()
            .map(|x| e.eval(&PhasePoint::new(*x, [0.0, 0.0, 1.0]).unwrap()).trace())
            .sum::<C64>()
            * grid.weight()
    };
    let (t1, t2) = (tau(&ab), tau(&ba));
    assert!((t1 - t2).norm() < 1e-10 * t1.norm().max(1.0), "{t1} vs {t2}");
    // The commutator is genuinely nonzero pointwise.
    let z = random_point(&mut rng);
    assert!(max_gap(&ab, &ba, &z) > 1e-3);
}

#[test]
fn example_inverse_certifies_and_a_wrong_inverse_does_not() {
    let ex = example(1);
    let samples = SampleSet::random(500, 3);
    let good = check_elliptic(&ex.sigma_d, &ex.sigma_b, &ex.shift, &samples).unwrap();
    assert!(good.certifies(1e-10), "residual {}", good.residual);
    assert!(good.min_singular_value > 0.0);
    for (a, inv) in [(&ex.sigma0, &ex.sigma0_inv), (&ex.sigma1, &ex.sigma1_inv)] {
        assert!(check_elliptic(a, inv, &ex.shift, &samples).unwrap().residual < 1e-10);
    }
    let wrong = check_elliptic(&ex.sigma_d, &ex.sigma1_inv, &ex.shift, &samples).unwrap();
    assert!(wrong.residual >= 0.1, "residual {}", wrong.residual);
    // σ(D) = σ₀σ₁.
    let product = multiply(&ex.sigma0, &ex.sigma1, &ex.shift).unwrap();
    for z in samples.points().iter().take(50) {
        assert!(max_gap(&product, &ex.sigma_d, z) < 1e-12);
    }
}

#[test]
fn mismatched_ranks_are_structural_errors() {
    let g = cat();
    let a = CrossedSymbol::identity(2);
    let b = CrossedSymbol::identity(3);
    assert!(matches!(multiply(&a, &b, &g), Err(ncindex::Error::Structural(_))));
    assert!(CrossedSymbol::new(2, [(0, build::one(3))]).is_err());
}

/// `d/dt a((∂g)^s (z + t e))` at `t = 0` by central differences along the unpushed tangent.
fn derivative_at_shift(e: &Evaluator, g: &ShiftMap, z: &PhasePoint, t: &Tangent, s: i32) -> CMat {
    let h = 1e-5;
    let at = |sign: f64| {
        let x = z.x() + t.dx * (sign * h);
        let xi = z.xi() + t.dxi * (sign * h);
        let moved = PhasePoint::new([x[0], x[1], x[2]], [xi[0], xi[1], xi[2]]).unwrap();
        e.eval(&g.apply(&moved, s))
    };
    (at(1.0) - at(-1.0)) / c64(2.0 * h, 0.0)
}

/// The signed sum over all orderings of the frame and all component paths with total shift 0.
fn permutation_oracle(factors: &[Factor<'_>], g: &ShiftMap, z: &PhasePoint, frame: &[Tangent]) -> C64 {
    let r = frame.len();
    let mut total = c64(0.0, 0.0);
    for perm in permutations(r) {
        let sign = permutation_sign(&perm);
        let rank = match factors[0] {
            Factor::Value(s) | Factor::Differential(s) => s.rank(),
        };
        // Paths: (accumulated shift, product matrix, differentials used so far).
        let mut paths: Vec<(i32, CMat, usize)> = vec![(0, CMat::identity(rank, rank), 0)];
        for factor in factors {
            let mut next = Vec::new();
            for (s, acc, used) in &paths {
                let sym = match factor {
                    Factor::Value(x) | Factor::Differential(x) => x,
                };
                for (k, e) in sym.components() {
                    let m = match factor {
                        Factor::Value(_) => e.eval(&g.apply(z, *s)),
                        Factor::Differential(_) => derivative_at_shift(e, g, z, &frame[perm[*used]], *s),
                    };
                    let used = used + matches!(factor, Factor::Differential(_)) as usize;
                    next.push((s + k, acc * m, used));
                }
            }
            paths = next;
        }
        for (s, acc, _) in paths {
            if s == 0 {
                total += acc.trace() * sign;
            }
        }
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn permutation_sign(p: &[usize]) -> f64 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn random_frame(rng: &mut ChaCha8Rng, z: &PhasePoint, r: usize) -> Vec<Tangent> {
    (0..r)
        .map(|_| {
            let dx = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let dxi = v - z.xi() * z.xi().dot(&v);
            Tangent { dx, dxi }
        })
        .collect()
}

fn assert_close(a: C64, b: C64, tol: f64) {
    let scale = a.norm().max(b.norm()).max(1.0);
    assert!((a - b).norm() < tol * scale, "{a} vs {b}");
}

#[test]
fn form_traces_match_the_signed_ordering_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let g = cat();
    // Sizes 2 and 4 take the fixed-size path, 5 the general one.
    for size in [2, 4, 5] {
        let a = random_symbol(size, &[-1, 0], &mut rng, true);
        let b = random_symbol(size, &[0, 1], &mut rng, true);
        let c = random_symbol(size, &[0, 1], &mut rng, true);
        let z = random_point(&mut rng);
        let cases: Vec<Vec<Factor>> = vec![
            vec![Factor::Value(&a), Factor::Differential(&b), Factor::Differential(&c)],
            vec![Factor::Differential(&a), Factor::Value(&c), Factor::Differential(&b), Factor::Differential(&a)],
            vec![Factor::Value(&a), Factor::Differential(&b), Factor::Value(&a), Factor::Differential(&c)],
        ];
        for factors in &cases {
            let r = factors.iter().filter(|f| matches!(f, Factor::Differential(_))).count();
            let frame = random_frame(&mut rng, &z, r);
            let fast = trace_form_product(factors, &g, &z, &frame);
            let oracle = permutation_oracle(factors, &g, &z, &frame);
            assert_close(fast, oracle, 1e-6);
        }
    }
}

#[test]
fn maurer_cartan_trace_of_the_example_matches_the_ordering_sum() {
    let ex = example(1);
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let z = random_point(&mut rng);
    let frame = full_frame(&z);
    for r in [1, 3] {
        let mut factors = Vec::new();
        for _ in 0..r {
            factors.push(Factor::Value(&ex.sigma_b));
            factors.push(Factor::Differential(&ex.sigma_d));
        }
        let fast = trace_form_product(&factors, &ex.shift, &z, &frame[..r]);
        let oracle = permutation_oracle(&factors, &ex.shift, &z, &frame[..r]);
        assert_close(fast, oracle, 1e-6);
    }
}

#[test]
fn degree_mismatch_gives_zero() {
    let ex = example(1);
    let z = PhasePoint::new([0.1, 0.2, 0.3], [0.0, 0.0, 1.0]).unwrap();
    let frame = full_frame(&z);
    let factors = [Factor::Value(&ex.sigma_b), Factor::Differential(&ex.sigma_d)];
    assert_eq!(trace_form_product(&factors, &ex.shift, &z, &frame[..2]), c64(0.0, 0.0));
}

#[test]
fn lattice_operator_factorizes_on_interior_modes() {
    // D = f·PTP + (1 − P) and fP = D₀ − 1 + P, so D x = (D₀ − 1 + P) T P x + x − P x for x
    // supported where T P x and its f-image stay inside the window.
    let radius = 7;
    let g = ShiftMap::cat();
    let f = LatticeDiracMap::for_degree(1).unwrap().multiplier();
    let op = |w| assemble(&f, radius, w, &g).unwrap();
    let (d, d0, p, t) = (op(Which::D), op(Which::D0), op(Which::P), op(Which::T));
    let window = LatticeWindow::new(radius, 2);
    assert_eq!(d.dim(), window.dim());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let x: Vec<C64> = (0..window.dim())
        .map(|i| {
            let (m, _, _) = window.unflat(i);
            let interior = window.mode(m).iter().all(|v| v.abs() <= 2);
            if interior {
                c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                c64(0.0, 0.0)
            }
        })
        .collect();
    let px = p.apply(&x);
    let tpx = t.apply(&px);
    let fp_tpx: Vec<C64> = d0
        .apply(&tpx)
        .iter()
        .zip(p.apply(&tpx))
        .zip(&tpx)
        .map(|((a, b), c)| a + b - c)
        .collect();
    let expected: Vec<C64> = fp_tpx.iter().zip(&x).zip(&px).map(|((a, b), c)| a + b - c).collect();
    let got = d.apply(&x);
    let err = got.iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-12, "max deviation {err}");
    // Triplet export round-trips through the text format.
    let mut text = Vec::new();
    d.write_triplets(&mut text).unwrap();
    let text = String::from_utf8(text).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), d.nnz());
    let first: Vec<&str> = lines[0].split_whitespace().collect();
    let (r, c): (usize, usize) = (first[0].parse().unwrap(), first[1].parse().unwrap());
    let v = c64(first[2].parse().unwrap(), first[3].parse().unwrap());
    assert_eq!(d.get(r, c), v);
}
