//! Exact checks of the λ-ring engine against closed forms and an independent
//! root-variable symmetrization.

use ncindex::lambda_ring::roots::{expand_in_roots, product_over_roots};
use ncindex::lambda_ring::{
    chern_of, chern_psi_minus_todd, gamma_expand, multiplicative_op,
    newton_convert, newton_invert, psi_closed_form, psi_in_exterior, psi_in_gamma, psi_series, rat,
    todd_series, todd_symmetric, verify_psi_multiplicative, FormalSeries, LambdaExpr, Partition,
    PowerSumPoly, RationalPolyInN, SymmPoly,
};

fn poly(coeffs: &[(i64, i64)]) -> RationalPolyInN {
    RationalPolyInN::from_coeffs(coeffs.iter().map(|&(a, b)| rat(a, b)).collect())
}

fn c(a: i64, b: i64) -> RationalPolyInN {
    RationalPolyInN::from_ratio(a, b)
}

#[test]
fn psi_series_matches_closed_form_through_fifty() {
    let s = psi_series(50);
    assert_eq!(s.coeff(0), rat(1, 1));
    assert_eq!(s.coeff(1), rat(1, 2));
    assert_eq!(s.coeff(2), rat(-1, 6));
    for k in 1..=50 {
        let expected = rat(if k % 2 == 1 { 1 } else { -1 }, (k * (k + 1)) as i64);
        assert_eq!(s.coeff(k), expected, "coefficient {k}");
        assert_eq!(psi_closed_form(k), expected);
    }
}

#[test]
fn todd_series_by_independent_division() {
    // u / (1 − e^{−u}) = 1 / ((1 − e^{−u})/u), with (1 − e^{−u})/u = Σ (−1)^k u^k/(k+1)!.
    let d = 10;
    let mut fact = 1i64;
    let denom = FormalSeries::from_fn(d, |k| {
        fact *= (k + 1) as i64;
        rat(if k % 2 == 0 { 1 } else { -1 }, fact)
    });
    let oracle = denom.inverse().unwrap();
    assert_eq!(todd_series(d), oracle);
    assert_eq!(oracle.coeff(1), rat(1, 2));
    assert_eq!(oracle.coeff(2), rat(1, 12));
}

#[test]
fn newton_identities_low_degree() {
    let p = |i| PowerSumPoly::generator(i, 3);
    let s = |parts: Vec<u32>, a: i64| SymmPoly::monomial(Partition::new(parts), c(a, 1), 3);
    assert_eq!(newton_convert(&p(1)), s(vec![1], 1));
    assert_eq!(newton_convert(&p(2)), s(vec![1, 1], 1).add(&s(vec![2], -2)));
    assert_eq!(
        newton_convert(&p(3)),
        s(vec![1, 1, 1], 1).add(&s(vec![2, 1], -3)).add(&s(vec![3], 3))
    );
}

#[test]
fn newton_roundtrip_through_degree_ten() {
    let d = 10;
    for k in 1..=d {
        for m in Partition::all_of(k) {
            let p = PowerSumPoly::monomial(m.clone(), RationalPolyInN::one(), d);
            assert_eq!(newton_invert(&newton_convert(&p)), p, "p-monomial {m:?}");
            let s = SymmPoly::monomial(m.clone(), RationalPolyInN::one(), d);
            assert_eq!(newton_convert(&newton_invert(&s)), s, "σ-monomial {m:?}");
        }
    }
}

#[test]
fn multiplicative_op_trivial_cases() {
    let d = 5;
    let e = multiplicative_op(&FormalSeries::one_plus_x(d), d).unwrap();
    let mut expected = SymmPoly::one(d);
    for i in 1..=d as u32 {
        expected = expected.add(&SymmPoly::generator(i, d));
    }
    assert_eq!(e, expected);
    assert_eq!(multiplicative_op(&FormalSeries::one(d), d).unwrap(), SymmPoly::one(d));
    let bad = FormalSeries::new(vec![rat(2, 1), rat(1, 1)], d);
    assert!(multiplicative_op(&bad, d).is_err());
}

#[test]
fn multiplicative_op_of_log_factor() {
    // ln(1+x)/x generates 1 − σ₁/2 + (4σ₁² − 5σ₂)/12 + (−6σ₁³ + 14σ₁σ₂ − 9σ₃)/24 + …
    let d = 3;
    let f = FormalSeries::ln_one_plus_x(d + 1).div_by_x().unwrap();
    let f = FormalSeries::new(f.coeffs().to_vec(), d);
    let got = multiplicative_op(&f, d).unwrap();
    let m = |parts: Vec<u32>, a: i64, b: i64| SymmPoly::monomial(Partition::new(parts), c(a, b), d);
    let expected = SymmPoly::one(d)
        .add(&m(vec![1], -1, 2))
        .add(&m(vec![1, 1], 4, 12))
        .add(&m(vec![2], -5, 12))
        .add(&m(vec![1, 1, 1], -6, 24))
        .add(&m(vec![2, 1], 14, 24))
        .add(&m(vec![3], -9, 24));
    assert_eq!(got, expected);
}

#[test]
fn multiplicative_op_agrees_with_root_symmetrization() {
    let d = 6;
    for f in [psi_series(d), todd_series(d), FormalSeries::ln_one_plus_x(d + 1).div_by_x().unwrap()] {
        let f = FormalSeries::new(f.coeffs().to_vec(), d);
        let sym = multiplicative_op(&f, d).unwrap();
        let lhs = expand_in_roots(&sym, d, &rat(0, 1));
        let rhs = product_over_roots(&f, d, d);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn psi_in_gamma_low_degrees() {
    let g = psi_in_gamma(3);
    let coeff = |parts: Vec<u32>| g.coeff(&Partition::new(parts));
    assert_eq!(coeff(vec![]), c(1, 1));
    assert_eq!(coeff(vec![1]), c(1, 2));
    assert_eq!(coeff(vec![1, 1]), c(-2, 12));
    assert_eq!(coeff(vec![2]), c(7, 12));
    assert_eq!(coeff(vec![1, 1, 1]), c(2, 24));
    assert_eq!(coeff(vec![2, 1]), c(-8, 24));
    assert_eq!(coeff(vec![3]), c(15, 24));
}

#[test]
fn gamma_operations_in_exterior_powers() {
    let g = gamma_expand(4);
    assert_eq!(g[0], LambdaExpr::one());
    let n = RationalPolyInN::n();
    assert_eq!(g[1], LambdaExpr::exterior(1).sub(&LambdaExpr::constant(n.clone())));
    let expected2 = LambdaExpr::exterior(1)
        .add(&LambdaExpr::exterior(2))
        .sub(&LambdaExpr::exterior(1).scale_poly(&n))
        .add(&LambdaExpr::constant(poly(&[(0, 1), (-1, 2), (1, 2)])));
    assert_eq!(g[2], expected2);
    for (j, gj) in g.iter().enumerate().skip(1) {
        assert!(gj.on_trivial_bundle().is_zero(), "γ_{j} on a trivial bundle");
    }
}

#[test]
fn psi_closed_forms_in_dimensions_three_and_five() {
    let e = LambdaExpr::exterior(1);
    let n = RationalPolyInN::n();
    let dim3 = LambdaExpr::one().add(&e.sub(&LambdaExpr::constant(n)).scale(&rat(1, 2)));
    assert_eq!(psi_in_exterior(3), dim3);

    let dim5 = LambdaExpr::constant(poly(&[(24, 24), (-19, 24), (3, 24)]))
        .add(&e.scale_poly(&poly(&[(13, 12), (-3, 12)])))
        .sub(&e.mul(&e).scale(&rat(1, 6)))
        .add(&LambdaExpr::exterior(2).scale(&rat(7, 12)));
    assert_eq!(psi_in_exterior(5), dim5);
    assert_eq!(psi_in_exterior(5).terms().len(), 4);

    for d in [3, 5, 7, 9] {
        assert_eq!(psi_in_exterior(d).on_trivial_bundle(), RationalPolyInN::one(), "dim {d}");
    }
}

#[test]
fn chern_character_of_the_bundle_itself() {
    // ch E = n + p₁ + p₂/2! + p₃/3! + p₄/4!
    let d = 4;
    let mut expected = PowerSumPoly::constant(RationalPolyInN::n(), d);
    let mut fact = 1;
    for i in 1..=d as u32 {
        fact *= i as i64;
        expected = expected.add(&PowerSumPoly::generator(i, d).scale(&rat(1, fact)));
    }
    assert_eq!(chern_of(&LambdaExpr::exterior(1), d), newton_convert(&expected));
    assert_eq!(chern_of(&LambdaExpr::one(), d), SymmPoly::one(d));
}

#[test]
fn chern_of_psi_is_todd_through_degree_eight() {
    assert!(chern_psi_minus_todd(8).is_zero());
    // Independent check of the Todd side in explicit roots.
    let d = 6;
    let td = todd_symmetric(d);
    assert_eq!(expand_in_roots(&td, d, &rat(0, 1)), product_over_roots(&todd_series(d), d, d));
}

#[test]
fn psi_is_multiplicative_and_stable() {
    for d in [0, 4, 8] {
        let r = verify_psi_multiplicative(d);
        assert!(r.passed(), "d_max = {d}: {r:?}");
    }
}
