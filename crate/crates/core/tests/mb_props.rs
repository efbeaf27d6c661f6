use cosmo_growth::mb::{
    build_integrand, contour_quadrature, enumerate_poles, residue_sum, GKind, GammaFactor, MbIntegrand, QuadOptions,
    Rotation, Side, DEFAULT_CHAIN,
};
use cosmo_growth::params::{derive_params, DerivedParams, ModelParams, Rational, CATALOGUE};
use num_complex::Complex64;
use proptest::prelude::*;

fn dp(en: i64, ed: i64, gn: i64, gd: i64) -> DerivedParams {
    let mp = ModelParams::with_background(Rational::new(en, ed), Rational::new(gn, gd), 0.5, 1.0).unwrap();
    derive_params(&mp, 0).unwrap()
}

/// Rows with α₁ ≠ 0.
fn residue_rows() -> Vec<DerivedParams> {
    CATALOGUE[1..].iter().map(|&(a, b, c, d)| dp(a, b, c, d)).collect()
}

fn left(ib: &MbIntegrand, x: f64) -> Complex64 {
    residue_sum(ib, Side::Left, x, 1e-15).unwrap().value
}

/// The printed integrand for G₁ of row (2/3, 1) and its rewritten form.
fn g1_pair() -> (MbIntegrand, MbIntegrand) {
    let a = dp(2, 3, 1, 1).a().unwrap();
    let printed = MbIntegrand::new(
        vec![
            GammaFactor::plus(0.25),
            GammaFactor::minus(-a[0]),
            GammaFactor::minus(-a[1]),
        ],
        vec![
            GammaFactor::minus(1.25),
            GammaFactor::minus(-0.25),
            GammaFactor::minus(2.25),
        ],
    );
    let rewritten = MbIntegrand::new(
        vec![
            GammaFactor::plus(1.25),
            GammaFactor::minus(-a[0]),
            GammaFactor::minus(-a[1]),
        ],
        vec![
            GammaFactor::minus(1.25),
            GammaFactor::minus(0.75),
            GammaFactor::minus(2.25),
        ],
    )
    .scaled(-1.0);
    (printed, rewritten)
}

#[test]
fn cancelled_pole_is_not_enumerated() {
    let (printed, _) = g1_pair();
    let poles = enumerate_poles(&printed, Side::Left, DEFAULT_CHAIN).unwrap();
    assert!(poles.iter().all(|p| (p.location + 0.25).abs() > 1e-9));
    assert!((poles[0].location + 1.25).abs() < 1e-12);
}

#[test]
fn printed_integrand_is_the_meijer_kernel() {
    let d = dp(2, 3, 1, 1);
    let built = build_integrand(GKind::G12, &d, [0, 1, 2, 3], Rotation::None).unwrap();
    let (printed, _) = g1_pair();
    for x in [0.1, 1.0, 5.0] {
        let (u, v) = (left(&built, x), left(&printed, x));
        assert!((u - v).norm() <= 1e-13 * v.norm().max(1e-300), "x = {x}");
    }
}

#[test]
fn near_infinity_kernel_has_double_poles_at_non_positive_integers() {
    let d = dp(1, 2, 4, 3);
    let ib = build_integrand(GKind::G41, &d, [0, 1, 2, 3], Rotation::None).unwrap();
    let poles = enumerate_poles(&ib, Side::Left, 6).unwrap();
    for n in 0..4 {
        let p = poles.iter().find(|p| (p.location + n as f64).abs() < 1e-9).unwrap();
        assert_eq!(p.order, 2);
    }
    let s6 = 6f64.sqrt();
    let p = poles.iter().find(|p| (p.location - s6).abs() < 1e-9).unwrap();
    assert_eq!(p.order, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rewriting_preserves_the_function(x in 0.02f64..6.0) {
        let (printed, rewritten) = g1_pair();
        let (u, v) = (left(&printed, x), left(&rewritten, x));
        prop_assert!((u - v).norm() <= 1e-12 * v.norm(), "x = {x}: {u} vs {v}");
    }

    #[test]
    fn opposite_rotations_are_conjugate(row in 0usize..9, x in 0.05f64..5.0, lead in 0usize..4) {
        let d = &residue_rows()[row];
        let mut order = [0, 1, 2, 3];
        order.swap(0, lead);
        let plus = build_integrand(GKind::G41, d, order, Rotation::PlusPi).unwrap();
        let minus = build_integrand(GKind::G41, d, order, Rotation::MinusPi).unwrap();
        let (p, m) = (left(&plus, x), left(&minus, x));
        let scale = p.norm().max(1e-300);
        prop_assert!((p - m.conj()).norm() <= 1e-12 * scale);
        prop_assert!((p + m).im.abs() <= 1e-12 * scale);
    }

    #[test]
    fn residues_agree_with_quadrature(row in 0usize..9, lead in 0usize..4, x in 0.1f64..3.0) {
        let d = &residue_rows()[row];
        let mut order = [0, 1, 2, 3];
        order.swap(0, lead);
        let ib = build_integrand(GKind::G12, d, order, Rotation::None).unwrap();
        let r = left(&ib, x);
        let q = contour_quadrature(&ib, x, None, &QuadOptions::default()).unwrap().value;
        prop_assert!((r - q).norm() <= 1e-8 * r.norm().max(1.0), "x = {x}: {r} vs {q}");
    }

    #[test]
    fn linearity_in_scale(x in 0.1f64..4.0, c in -5.0f64..5.0) {
        prop_assume!(c.abs() > 1e-3);
        let d = dp(2, 3, 2, 3);
        let ib = build_integrand(GKind::G12, &d, [2, 0, 1, 3], Rotation::None).unwrap();
        let (u, v) = (left(&ib.clone().scaled(c), x), left(&ib, x) * c);
        prop_assert!((u - v).norm() <= 1e-14 * v.norm());
    }
}

/// Splitting the coincident Γ(s)Γ(s) into Γ(s)Γ(s + ε) turns each double pole
/// into two simple ones; the sum tends to the double-pole value as ε → 0.
#[test]
fn double_pole_is_the_limit_of_split_simple_poles() {
    let d = dp(1, 2, 4, 3);
    let a = d.a().unwrap();
    let s6 = 6f64.sqrt();
    let kernel = |eps: f64| {
        MbIntegrand::new(
            vec![
                GammaFactor::plus(0.0),
                GammaFactor::plus(eps),
                GammaFactor::plus(s6),
                GammaFactor::plus(-s6),
                GammaFactor::minus(-a[0]),
            ],
            vec![GammaFactor::plus(1.0 + a[1])],
        )
    };
    for x in [0.3, 1.0, 2.0] {
        let exact = left(&kernel(0.0), x);
        let eps = 1e-3;
        let (v1, v2) = (left(&kernel(eps), x), left(&kernel(eps / 2.0), x));
        let extrapolated = v2 * 2.0 - v1;
        let first = (v1 - exact).norm() / exact.norm();
        let rich = (extrapolated - exact).norm() / exact.norm();
        assert!(first < 1e-2, "x = {x}: {first}");
        assert!(rich < 1e-5 && rich < first / 50.0, "x = {x}: {first} -> {rich}");
    }
}
