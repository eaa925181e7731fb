//! Quadrature, Chern forms and pairings, and the three topological estimators: the odd
//! integral over `T³`, the SU(2) degree oracle and the single integral over `T³ × S²`.

use std::f64::consts::PI;
use std::sync::Arc;

use ncindex::chern_numeric::{
    ch_flat_projection, degree_oracle, flat_sphere_cochain, nice_index, pairing_with_cocycle, rotated_bott_toy,
    sphere_chern_integral, topological_index_f, Cochain, SphereQuadrature, TorusGrid,
};
use ncindex::crossed_symbol::{
    build, direct_sum, full_frame, sphere_frame, CrossedSymbol, PhasePoint, ShiftMap, Tangent, TorusField,
};
use ncindex::linalg::{c64, identity, C64};
use ncindex::torus_model::{example_symbols, CollapseMap, LatticeDiracMap, ProductField, ScalarMap};

fn rules() -> Vec<SphereQuadrature> {
    vec![
        SphereQuadrature::lebedev(6).unwrap(),
        SphereQuadrature::lebedev(14).unwrap(),
        SphereQuadrature::lebedev(26).unwrap(),
        SphereQuadrature::gauss_product(10).unwrap(),
        SphereQuadrature::gauss_product(20).unwrap(),
    ]
}

#[test]
fn sphere_rules_integrate_low_moments_exactly() {
    for q in rules() {
        assert!((q.integrate(|_| 1.0) - 4.0 * PI).abs() < 1e-12, "{}", q.label());
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 4.0 * PI / 3.0 } else { 0.0 };
                let got = q.integrate(|x| x[i] * x[j]);
                assert!((got - expected).abs() < 1e-10, "{} x{i}x{j}: {got}", q.label());
            }
        }
    }
    // Higher moments on the product rule: ∫ z⁸ = 4π/9.
    let q = SphereQuadrature::gauss_product(20).unwrap();
    assert!((q.integrate(|x| x[2].powi(8)) - 4.0 * PI / 9.0).abs() < 1e-12);
    assert!(SphereQuadrature::lebedev(7).is_err());
}

#[test]
fn random_sphere_rule_is_reproducible_and_roughly_uniform() {
    let a = SphereQuadrature::random(4000, 5).unwrap();
    let b = SphereQuadrature::random(4000, 5).unwrap();
    assert_eq!(a.nodes(), b.nodes());
    assert!((a.integrate(|_| 1.0) - 4.0 * PI).abs() < 1e-12);
    assert!((a.integrate(|x| x[0] * x[0]) - 4.0 * PI / 3.0).abs() < 0.2);
}

#[test]
fn spectral_derivative_is_exact_on_trigonometric_polynomials() {
    let grid = TorusGrid::new(16).unwrap();
    let values: Vec<C64> = grid.nodes().iter().map(|x| c64((3.0 * x[0] - 2.0 * x[2]).sin(), x[1].cos())).collect();
    for axis in 0..3 {
        let d = grid.spectral_derivative(&values, axis);
        for (x, v) in grid.nodes().iter().zip(&d) {
            let t = 3.0 * x[0] - 2.0 * x[2];
            let expected = match axis {
                0 => c64(3.0 * t.cos(), 0.0),
                1 => c64(0.0, -x[1].sin()),
                _ => c64(-2.0 * t.cos(), 0.0),
            };
            assert!((v - expected).norm() < 1e-12);
        }
    }
    assert!(TorusGrid::new(6).is_err());
}

fn bott() -> CrossedSymbol {
    CrossedSymbol::scalar_part(build::dirac_projection(1))
}

#[test]
fn bott_projection_has_unit_chern_number() {
    let q = SphereQuadrature::gauss_product(20).unwrap();
    assert!(q.degree() >= 20);
    let v = sphere_chern_integral(&bott(), &ShiftMap::identity(), [0.3, 0.0, 1.0], &q).unwrap();
    assert!((v.re - 1.0).abs() < 1e-6, "{v}");
    assert!(v.im.abs() < 1e-10);
    // The complementary projection has the opposite class.
    let comp = CrossedSymbol::scalar_part(build::one_minus(&build::dirac_projection(1)));
    let w = sphere_chern_integral(&comp, &ShiftMap::identity(), [0.0; 3], &q).unwrap();
    assert!((w.re + 1.0).abs() < 1e-6);
}

#[test]
fn chern_form_degree_zero_is_the_pointwise_trace() {
    let (p, g) = rotated_bott_toy().unwrap();
    let z = PhasePoint::new([0.1, 0.2, 0.3], [0.4, -0.2, 0.9]).unwrap();
    let [t1, t2] = sphere_frame(z.xi());
    let form = ch_flat_projection(&p, &g, &z, &[Tangent::along_xi(t1), Tangent::along_xi(t2)]).unwrap();
    assert_eq!(form.degree0, p.component(0).unwrap().eval(&z).trace());
    assert!(form.degree2.is_some());
}

#[test]
fn pairing_with_a_point_trace_counts_rank() {
    // A constant projection of rank r in N×N pairs to r − N/2 with φ₀.
    let mut m = identity(4);
    m[(3, 3)] = c64(0.0, 0.0);
    let p = CrossedSymbol::scalar_part(build::constant(m));
    let z = PhasePoint::new([0.0; 3], [0.0, 0.0, 1.0]).unwrap();
    let v = pairing_with_cocycle(&p, &[Cochain::PointTrace(z)], &ShiftMap::identity());
    assert!((v - c64(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn normalized_pairing_matches_the_chern_integral_and_is_additive() {
    // (2πi)⁻¹ ⟨p, φ₂⟩ against the independently computed ∫ ch p over the sphere.
    let q = SphereQuadrature::gauss_product(20).unwrap();
    let (p, g) = rotated_bott_toy().unwrap();
    let cocycle = [flat_sphere_cochain([0.0; 3], &q).unwrap()];
    let norm = c64(0.0, 2.0 * PI);
    let pairing = pairing_with_cocycle(&p, &cocycle, &g) / norm;
    let direct = sphere_chern_integral(&p, &g, [0.0; 3], &q).unwrap();
    assert!((pairing - direct).norm() < 1e-6, "{pairing} vs {direct}");
    assert!((direct.re - 1.0).abs() < 1e-6);

    // p ⊕ p pairs to twice the value, including the φ₀ component.
    let z = PhasePoint::new([0.0; 3], [0.0, 0.0, 1.0]).unwrap();
    let both = [Cochain::PointTrace(z), flat_sphere_cochain([0.0; 3], &q).unwrap()];
    let single = pairing_with_cocycle(&p, &both, &g);
    let sum = direct_sum(&p, &p).unwrap();
    let doubled = pairing_with_cocycle(&sum, &both, &g);
    assert!((doubled - single * 2.0).norm() < 1e-9);
}

#[test]
fn topological_integral_agrees_with_the_degree_oracle() {
    let grid = TorusGrid::new(16).unwrap();
    for d in -2..=2 {
        let f = LatticeDiracMap::for_degree(d).unwrap();
        let top = topological_index_f(&f, &grid).unwrap();
        let oracle = degree_oracle(&f.normalized(), &grid).unwrap();
        assert_eq!(top.estimate.nearest_integer, d as i64);
        assert_eq!(oracle.estimate.nearest_integer, d as i64);
        assert!(top.estimate.gap < 1e-3 && oracle.estimate.gap < 1e-3);
        assert!((top.estimate.value - oracle.estimate.value).abs() < 1e-3);
        assert!(top.imaginary.abs() < 1e-8);
        assert!(oracle.su2_defect < 1e-12);
    }
    // The oracle refuses fields that are not SU(2)-valued.
    assert!(degree_oracle(&LatticeDiracMap::for_degree(1).unwrap(), &grid).is_err());
}

#[test]
fn topological_gap_shrinks_with_resolution() {
    let f = LatticeDiracMap::for_degree(1).unwrap();
    let coarse = topological_index_f(&f, &TorusGrid::new(8).unwrap()).unwrap().estimate.gap;
    let fine = topological_index_f(&f, &TorusGrid::new(16).unwrap()).unwrap().estimate.gap;
    assert!(fine <= coarse / 4.0, "{coarse} → {fine}");
}

#[test]
fn topological_integral_is_additive_for_disjoint_supports() {
    let grid = TorusGrid::new(32).unwrap();
    let a: Arc<dyn TorusField> = Arc::new(CollapseMap::new(1, [PI / 2.0; 3], 1.4).unwrap());
    let b: Arc<dyn TorusField> = Arc::new(CollapseMap::new(-1, [3.0 * PI / 2.0; 3], 1.4).unwrap());
    let ta = topological_index_f(a.as_ref(), &grid).unwrap().estimate.value;
    let tb = topological_index_f(b.as_ref(), &grid).unwrap().estimate.value;
    let tab = topological_index_f(&ProductField(a, b), &grid).unwrap().estimate.value;
    assert!((tab - ta - tb).abs() < 2e-3, "{tab} vs {ta} + {tb}");
}

#[test]
fn scalar_maps_have_vanishing_topological_index() {
    let r = topological_index_f(&ScalarMap, &TorusGrid::new(16).unwrap()).unwrap();
    assert!(r.estimate.value.abs() < 1e-12);
}

#[test]
fn nice_index_of_trivial_and_flat_factors() {
    let shift = Arc::new(ShiftMap::cat());
    let ex = example_symbols(Arc::new(LatticeDiracMap::for_degree(1).unwrap()), shift.clone()).unwrap();
    let torus = TorusGrid::new(8).unwrap();
    let sphere = SphereQuadrature::lebedev(14).unwrap();
    let one = CrossedSymbol::identity(4);
    let trivial = nice_index(&one, Some(&one), &shift, &torus, &sphere).unwrap();
    assert!(trivial.estimate.value.abs() < 1e-6);
    let s1 = nice_index(&ex.sigma1, Some(&ex.sigma1_inv), &shift, &torus, &sphere).unwrap();
    assert!(s1.estimate.value.abs() < 1e-6, "{}", s1.estimate.value);
    assert!(nice_index(&ex.sigma1, None, &shift, &torus, &sphere).is_err());
}

#[test]
fn nice_index_of_the_multiplication_factor_matches_the_torus_integral() {
    let shift = Arc::new(ShiftMap::cat());
    let f = LatticeDiracMap::for_degree(1).unwrap();
    let ex = example_symbols(Arc::new(f), shift.clone()).unwrap();
    let nice = nice_index(
        &ex.sigma0,
        Some(&ex.sigma0_inv),
        &shift,
        &TorusGrid::new(12).unwrap(),
        &SphereQuadrature::lebedev(6).unwrap(),
    )
    .unwrap();
    let top = topological_index_f(&f, &TorusGrid::new(32).unwrap()).unwrap();
    assert!((nice.estimate.value - top.estimate.value).abs() < 1e-2, "{}", nice.estimate.value);
    assert!(nice.imaginary.abs() < 1e-8);
}

#[test]
fn nice_index_of_the_full_symbol_matches_the_torus_integral() {
    // The heaviest check of the suite (a few minutes on one core): 12³ × Gauss-20.
    let shift = Arc::new(ShiftMap::cat());
    let f = LatticeDiracMap::for_degree(1).unwrap();
    let ex = example_symbols(Arc::new(f), shift.clone()).unwrap();
    let nice = nice_index(
        &ex.sigma_d,
        Some(&ex.sigma_b),
        &shift,
        &TorusGrid::new(12).unwrap(),
        &SphereQuadrature::gauss_product(20).unwrap(),
    )
    .unwrap();
    let top = topological_index_f(&f, &TorusGrid::new(32).unwrap()).unwrap();
    assert!((nice.estimate.value - top.estimate.value).abs() < 1e-2, "{}", nice.estimate.value);
}

#[test]
fn full_frame_is_oriented() {
    let z = PhasePoint::new([0.0; 3], [0.3, 0.4, -0.5]).unwrap();
    let frame = full_frame(&z);
    assert!((frame[3].dxi.cross(&frame[4].dxi) - z.xi()).norm() < 1e-14);
}
