//! The torus example: Clifford algebra, spectral projections, lattice operators, the
//! invertibility surrogate for `D₁` and the analytic index.

use nalgebra::Vector3;
use ncindex::crossed_symbol::{random_unit_vector, ShiftMap};
use ncindex::linalg::{c64, hermitian_eigenvalues, identity, CMat, C64};
use ncindex::torus_model::{
    analytic_index, assemble, clifford, d1_margin, dirac_symbol, invertibility_probe_d1, richardson,
    spectral_projection, spectral_projection_xi, AnalyticOptions, BoxTier, LatticeDiracMap, LatticeWindow,
    MultiplierF, PartialSum, ScalarMap, Which,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    Vector3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
}

#[test]
fn clifford_relations_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let (v, w) = (random_vector(&mut rng), random_vector(&mut rng));
        let anti = clifford(&v) * clifford(&w) + clifford(&w) * clifford(&v);
        let err = (anti - identity(2) * c64(2.0 * v.dot(&w), 0.0)).norm();
        assert!(err < 1e-12, "{err}");
        let c = clifford(&v);
        assert!((c.adjoint() - &c).norm() < 1e-15);
    }
}

#[test]
fn spectral_projection_is_the_positive_eigenprojection() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let xi = Vector3::from(random_unit_vector(&mut rng));
        let p = spectral_projection_xi(&xi);
        assert!((&p * &p - &p).norm() < 1e-14);
        assert!((p.adjoint() - &p).norm() < 1e-15);
        assert!((p.trace() - c64(1.0, 0.0)).norm() < 1e-14);
        // Oracle: the symbol c(ξ) has eigenvalues ±1 and p c(ξ) = p.
        let c = dirac_symbol([xi.x, xi.y, xi.z]).unwrap();
        let eig = hermitian_eigenvalues(&c);
        assert!((eig.iter().fold(f64::MIN, |a, &b| a.max(b)) - 1.0).abs() < 1e-13);
        assert!((&p * &c - &p).norm() < 1e-14);
    }
    for k in [[1, 0, 0], [2, -3, 5], [0, 0, -1]] {
        let p = spectral_projection(k);
        assert!((&p * &p - &p).norm() < 1e-14);
    }
    assert_eq!(spectral_projection([0, 0, 0]), CMat::zeros(2, 2));
    assert!(dirac_symbol([0.0; 3]).is_err());
}

fn columns(op: &ncindex::torus_model::LatticeOperator) -> Vec<Vec<(usize, C64)>> {
    let mut cols = vec![Vec::new(); op.dim()];
    for (r, c, v) in op.triplets() {
        cols[c].push((r, v));
    }
    cols
}

#[test]
fn lattice_projection_and_shift_structure() {
    let radius = 3;
    let g = ShiftMap::cat();
    let f = LatticeDiracMap::for_degree(1).unwrap().multiplier();
    let window = LatticeWindow::new(radius, 2);
    assert_eq!(window.dim(), 7 * 7 * 7 * 2 * 2);

    // P is a Hermitian idempotent.
    let p = assemble(&f, radius, Which::P, &g).unwrap();
    assert_eq!(p.dim(), window.dim());
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let x: Vec<C64> = (0..p.dim()).map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let px = p.apply(&x);
    let ppx = p.apply(&px);
    assert!(px.iter().zip(&ppx).all(|(a, b)| (a - b).norm() < 1e-14));
    for (r, c, v) in p.triplets() {
        assert!((p.get(c, r).conj() - v).norm() < 1e-15);
    }

    // T is a partial isometry: every column is a unit vector or zero, with disjoint rows.
    let t = assemble(&f, radius, Which::T, &g).unwrap();
    let mut seen = std::collections::HashSet::new();
    let mut unit_columns = 0;
    for col in columns(&t) {
        let norm: f64 = col.iter().map(|(_, v)| v.norm_sqr()).sum();
        assert!(norm.abs() < 1e-14 || (norm - 1.0).abs() < 1e-14);
        if norm > 0.5 {
            unit_columns += 1;
        }
        for (r, _) in col {
            assert!(seen.insert(r), "row {r} hit twice");
        }
    }
    assert!(unit_columns > 0);
}

#[test]
fn unit_multiplier_reduces_d_to_d1() {
    let g = ShiftMap::cat();
    let one = MultiplierF::constant(identity(2));
    let d = assemble(&one, 3, Which::D, &g).unwrap();
    let d1 = assemble(&one, 3, Which::D1, &g).unwrap();
    let (a, b) = (d.triplets(), d1.triplets());
    assert_eq!(a.len(), b.len());
    for ((r1, c1, v1), (r2, c2, v2)) in a.iter().zip(&b) {
        assert_eq!((r1, c1), (r2, c2));
        assert!((v1 - v2).norm() < 1e-14);
    }
}

#[test]
fn exact_and_sampled_fourier_tables_agree() {
    let map = LatticeDiracMap::for_degree(1).unwrap();
    let exact = map.multiplier();
    let sampled = MultiplierF::from_field(&map, 2).unwrap();
    assert!(sampled.record().truncation_error < 1e-12);
    for (m, c) in exact.coefficients() {
        assert!((sampled.coefficient(m) - c).norm() < 1e-12, "mode {m:?}");
    }
    assert!(sampled.coefficient(&[2, 0, 0]).norm() < 1e-12);
    assert_eq!(exact.bandwidth(), 1);
}

#[test]
fn d1_margin_is_positive_for_the_cat_map_and_vanishes_for_the_antipodal_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let samples: Vec<[f64; 3]> = (0..2000).map(|_| random_unit_vector(&mut rng)).collect();
    let m = d1_margin(&ShiftMap::cat(), &samples).unwrap();
    assert!(m.certifies());
    assert_eq!(m.sample_count, 2000);
    let flip = ShiftMap::new([[-1, 0, 0], [0, -1, 0], [0, 0, -1]]).unwrap();
    let bad = d1_margin(&flip, &samples).unwrap();
    assert!(bad.angle_margin < 1e-12);
    assert!(!bad.certifies());
}

#[test]
fn d1_probe_is_exactly_one_for_the_identity_shift() {
    let probe = invertibility_probe_d1(6, &ShiftMap::identity()).unwrap();
    assert!((probe.smallest_singular_value - 1.0).abs() < 1e-12);
    assert_eq!(probe.subwindow_radius, 2);
    assert_eq!(probe.columns, 5 * 5 * 5 * 2);
    assert!(invertibility_probe_d1(3, &ShiftMap::cat()).is_err());
}

#[test]
fn d1_probe_is_stable_in_the_window_radius() {
    let g = ShiftMap::cat();
    let small = invertibility_probe_d1(9, &g).unwrap();
    let large = invertibility_probe_d1(12, &g).unwrap();
    assert!(small.smallest_singular_value > 0.5);
    let change = (large.smallest_singular_value - small.smallest_singular_value).abs() / small.smallest_singular_value;
    assert!(change < 0.2, "relative change {change}");
}

fn quick_options() -> AnalyticOptions {
    AnalyticOptions {
        radii: vec![4],
        box_tiers: vec![BoxTier { up_to: 2, side: 12 }, BoxTier { up_to: usize::MAX, side: 8 }],
        ..AnalyticOptions::default()
    }
}

#[test]
fn analytic_index_of_a_constant_multiplier_is_zero() {
    let r = analytic_index(&MultiplierF::constant(identity(2)), &quick_options()).unwrap();
    assert!(r.value.abs() < 1e-10, "{}", r.value);
    assert_eq!(r.nearest_integer, 0);
}

#[test]
fn analytic_index_is_a_homotopy_invariant() {
    // Masses 1.5 and 2.5 lie in the same degree-one component of the lattice-Dirac family.
    let options = quick_options();
    let a = analytic_index(&LatticeDiracMap { mass: 1.5, orientation: -1.0 }.multiplier(), &options).unwrap();
    let b = analytic_index(&LatticeDiracMap { mass: 2.5, orientation: -1.0 }.multiplier(), &options).unwrap();
    assert_eq!(a.nearest_integer, 1);
    assert_eq!(b.nearest_integer, 1);
    assert!((a.value - b.value).abs() < 0.05, "{} vs {}", a.value, b.value);
    assert!(a.imaginary.abs() < 1e-8);
}

#[test]
fn analytic_index_of_the_scalar_map_vanishes() {
    let r = analytic_index(&ScalarMap.multiplier(), &quick_options()).unwrap();
    assert!(r.value.abs() < 0.1, "{}", r.value);
}

#[test]
fn analytic_index_rejects_windows_below_the_trace_reach() {
    let f = LatticeDiracMap::for_degree(1).unwrap().multiplier();
    let mut options = quick_options();
    options.radii = vec![3];
    assert!(analytic_index(&f, &options).is_err());
    options.radii = vec![8, 6];
    assert!(analytic_index(&f, &options).is_err());
    options.radii = vec![4];
    options.power = 3;
    assert!(analytic_index(&f, &options).is_err());
}

#[test]
fn richardson_removes_a_power_law_tail() {
    let (limit, c, alpha) = (1.0, 0.3, 5.0);
    let at = |r: usize| PartialSum {
        radius: r,
        value: limit - c * (r as f64).powf(-alpha),
        imaginary: 0.0,
    };
    assert!((richardson(&at(8), &at(12), alpha) - limit).abs() < 1e-14);
}
