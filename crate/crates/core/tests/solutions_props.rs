use cosmo_growth::params::{classify_poles, derive_params, DerivedParams, ModelParams, PoleReport, Rational};
use cosmo_growth::solutions::{
    basis_finite_t, basis_near_inf, basis_power_law, quartic_roots, AnalyticSolution, SolutionSet,
};
use cosmo_growth::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn setup(en: i64, ed: i64, gn: i64, gd: i64, omega: f64, k1: f64) -> (DerivedParams, PoleReport) {
    let mp = ModelParams::with_background(Rational::new(en, ed), Rational::new(gn, gd), omega, k1).unwrap();
    let dp = derive_params(&mp, 0).unwrap();
    let pr = classify_poles(&dp);
    (dp, pr)
}

fn jet_of(set: &SolutionSet, coeffs: &[Complex64; 4], t: f64) -> [Complex64; 4] {
    let j = set.combination_jets(coeffs, t, 3).unwrap();
    std::array::from_fn(|i| j[i].value)
}

fn real_coeffs(v: [f64; 4]) -> [Complex64; 4] {
    v.map(|c| Complex64::new(c, 0.0))
}

fn max_dev(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let scale = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quartic_roots_sum_to_zero_and_solve_the_polynomial(
        eta in 0.3f64..1.0, omega in 0.0f64..=1.0, k1 in 0.0f64..2.0,
    ) {
        let q = quartic_roots(eta, omega, k1);
        let big = 1f64.max(q.b.abs()).max(q.c.abs());
        let sum: Complex64 = q.roots.iter().sum();
        prop_assert!(sum.norm() <= 1e-12 * big);
        for r in q.roots {
            prop_assert!(q.poly(r).norm() <= 1e-10 * big, "root {r}");
        }
    }

    #[test]
    fn eds_exponents_do_not_depend_on_density(omega in 0.0f64..=1.0) {
        let q = quartic_roots(2.0 / 3.0, omega, 0.0);
        let mut ex: Vec<f64> = q.delta_exponents(-1.0 / 6.0).iter().map(|z| z.re).collect();
        ex.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in ex.iter().zip([2.0 / 3.0, 0.0, -1.0 / 3.0, -1.0]) {
            prop_assert!((got - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn finite_t_fit_round_trips(c in prop::array::uniform4(-2.0f64..2.0), x0 in 0.1f64..4.0) {
        let (dp, pr) = setup(2, 3, 1, 1, 0.5, 1.0);
        let set = basis_finite_t(&dp, &pr).unwrap();
        let t0 = dp.t_of_x(x0).unwrap();
        let c = real_coeffs(c);
        let fit = set.fit_coefficients(t0, &jet_of(&set, &c, t0)).unwrap();
        prop_assert!(max_dev(&fit.coeffs, &c) <= 1e-8, "{:?} vs {:?}", fit.coeffs, c);
    }

    #[test]
    fn near_infinity_fit_round_trips(c in prop::array::uniform4(-2.0f64..2.0), x0 in 1.5f64..7.0) {
        let (dp, pr) = setup(1, 2, 4, 3, 0.5, 0.3);
        let set = basis_near_inf(&dp, &pr).unwrap();
        let t0 = dp.t_of_x(x0).unwrap();
        let c = real_coeffs(c);
        let fit = set.fit_coefficients(t0, &jet_of(&set, &c, t0)).unwrap();
        prop_assert!(max_dev(&fit.coeffs, &c) <= 1e-8);
    }

    #[test]
    fn delta_is_linear_in_the_coefficients(c in prop::array::uniform4(-2.0f64..2.0), lambda in -3.0f64..3.0, x in 0.05f64..5.0) {
        let (dp, pr) = setup(2, 3, 2, 3, 0.5, 1.0);
        let set = basis_finite_t(&dp, &pr).unwrap();
        let t = dp.t_of_x(x).unwrap();
        let c = real_coeffs(c);
        let one = set.delta_of_t(&c, t).unwrap();
        let scaled = set.delta_of_t(&c.map(|v| v * lambda), t).unwrap();
        prop_assert!((scaled.delta - lambda * one.delta).abs() <= 1e-13 * (one.delta.abs() + one.err) * lambda.abs().max(1.0) + 1e-300);
    }

    #[test]
    fn power_law_fit_from_derivatives(c in prop::array::uniform4(-2.0f64..2.0), t0 in 0.1f64..10.0) {
        let (dp, _) = setup(2, 3, 4, 3, 0.5, 0.0);
        let set = basis_power_law(&dp).unwrap();
        let c = real_coeffs(c);
        // ordinary derivatives of Σ cⱼ t^{dⱼ}
        let mut d = [0.0; 4];
        for (cj, b) in c.iter().zip(&set.basis) {
            let (e, _) = b.exponent().unwrap();
            let e = e.re;
            d[0] += cj.re * t0.powf(e);
            d[1] += cj.re * e * t0.powf(e - 1.0);
            d[2] += cj.re * e * (e - 1.0) * t0.powf(e - 2.0);
            d[3] += cj.re * e * (e - 1.0) * (e - 2.0) * t0.powf(e - 3.0);
        }
        let fit = set.fit_derivatives(t0, &d).unwrap();
        prop_assert!(max_dev(&fit.coeffs, &c) <= 1e-8);
    }
}

#[test]
fn identity_fit_selects_each_member() {
    let (dp, pr) = setup(1, 2, 1, 1, 0.5, 1.0);
    for set in [basis_finite_t(&dp, &pr).unwrap(), basis_near_inf(&dp, &pr).unwrap()] {
        let t0 = dp.t_of_x(2.5).unwrap();
        for j in 0..4 {
            let mut e = [Complex64::new(0.0, 0.0); 4];
            e[j] = Complex64::new(1.0, 0.0);
            let jet: Vec<Complex64> = set.basis[j].jets(t0, 3).unwrap().iter().map(|v| v.value).collect();
            let fit = set.fit_coefficients(t0, &jet.try_into().unwrap()).unwrap();
            assert!(max_dev(&fit.coeffs, &e) <= 1e-10, "{:?} member {j}", set.family);
        }
    }
}

#[test]
fn zero_jet_gives_zero_coefficients_and_zero_delta() {
    let (dp, pr) = setup(2, 3, 5, 3, 0.5, 0.3);
    let set = basis_finite_t(&dp, &pr).unwrap();
    let t0 = dp.t_of_x(1.0).unwrap();
    let fit = set.fit_coefficients(t0, &[Complex64::new(0.0, 0.0); 4]).unwrap();
    assert!(fit.coeffs.iter().all(|c| c.norm() == 0.0));
    for x in [0.01, 0.5, 4.0] {
        assert_eq!(set.delta_of_t(&fit.coeffs, dp.t_of_x(x).unwrap()).unwrap().delta, 0.0);
    }
}

#[test]
fn eds_growing_mode_is_two_thirds_power() {
    let (dp, _) = setup(2, 3, 4, 3, 0.3, 0.0);
    let set = basis_power_law(&dp).unwrap();
    let j = set
        .basis
        .iter()
        .position(|b| (b.exponent().unwrap().0.re - 5.0 / 6.0).abs() < 1e-12)
        .unwrap();
    let mut c = [Complex64::new(0.0, 0.0); 4];
    c[j] = Complex64::new(1.0, 0.0);
    for t in [1e-3, 0.7, 1.0, 42.0, 1e5] {
        let d = set.delta_of_t(&c, t).unwrap();
        let want = t.powf(2.0 / 3.0);
        assert!((d.delta - want).abs() <= 1e-13 * want, "t = {t}");
        assert!(!d.complex);
    }
}

#[test]
fn radiation_double_root_has_log_member() {
    let (dp, _) = setup(1, 2, 1, 1, 0.5, 0.0);
    let set = basis_power_law(&dp).unwrap();
    let logs: Vec<_> = set.basis.iter().filter(|b| b.log_terms).collect();
    assert_eq!(logs.len(), 1);
    assert_eq!(logs[0].exponent().unwrap().1, 1);
    assert!(logs[0].label.contains("ln t"));
    let t = 3.0f64;
    let v = logs[0].eval(t).unwrap().value;
    assert!((v.re - t.ln()).abs() < 1e-15);
}

#[test]
fn rotated_pair_sums_to_a_real_function() {
    for (row, k1) in [((2, 3, 1, 1), 1.0), ((1, 2, 4, 3), 0.3), ((2, 3, 2, 3), 1.0)] {
        let (dp, pr) = setup(row.0, row.1, row.2, row.3, 0.5, k1);
        let set = basis_near_inf(&dp, &pr).unwrap();
        for x in [1.0, 3.0, 8.0] {
            let t = dp.t_of_x(x).unwrap();
            let (f3, f4) = (set.basis[2].eval(t).unwrap(), set.basis[3].eval(t).unwrap());
            let s = f3.value + f4.value;
            assert!(
                s.im.abs() <= 1e-12 * f3.value.norm() + f3.err + f4.err,
                "{row:?} x = {x}"
            );
        }
    }
}

#[test]
fn evaluation_outside_validity_points_to_the_other_basis() {
    let (dp, pr) = setup(2, 3, 1, 1, 0.5, 1.0);
    let c = real_coeffs([1.0, 0.0, 0.0, 0.0]);
    let finite = basis_finite_t(&dp, &pr).unwrap();
    match finite.delta_of_t(&c, dp.t_of_x(20.0).unwrap()) {
        Err(Error::OutsideValidity { hint, .. }) => assert!(hint.contains("near-infinity")),
        other => panic!("{other:?}"),
    }
    let near = basis_near_inf(&dp, &pr).unwrap();
    match near.delta_of_t(&c, dp.t_of_x(0.2).unwrap()) {
        Err(Error::OutsideValidity { hint, .. }) => assert!(hint.contains("finite-t")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn analytic_solution_is_continuous_across_the_switch() {
    let (dp, pr) = setup(2, 3, 1, 1, 0.5, 1.0);
    let t0 = dp.t_of_x(0.3).unwrap();
    let sol = AnalyticSolution::fit(&dp, &pr, t0, &[1.0, 0.2, -0.1, 0.05]).unwrap();
    assert_eq!(sol.segments.len(), 2);
    let ts = sol.switch_time().unwrap();
    let below = sol.segments[0].set.delta_of_t(&sol.segments[0].coeffs, ts).unwrap();
    let above = sol.segments[1].set.delta_of_t(&sol.segments[1].coeffs, ts).unwrap();
    assert!((below.delta - above.delta).abs() <= 1e-10 * below.delta.abs());
    // either family evaluated inside the overlap gives the same δ
    let t = dp.t_of_x(3.0).unwrap();
    let f = sol.segments[0].set.delta_of_t(&sol.segments[0].coeffs, t).unwrap();
    let n = sol.segments[1].set.delta_of_t(&sol.segments[1].coeffs, t).unwrap();
    assert!((f.delta - n.delta).abs() <= 1e-8 * f.delta.abs());
}

#[test]
fn coefficients_continue_across_the_switch() {
    let (dp, pr) = setup(1, 2, 4, 3, 0.5, 1.0);
    let t0 = dp.t_of_x(0.5).unwrap();
    let c = real_coeffs([0.5, -1.0, 0.25, 2.0]);
    let sol = AnalyticSolution::with_coeffs(&dp, &pr, t0, c).unwrap();
    assert_eq!(sol.segments[0].coeffs, c);
    let t = dp.t_of_x(6.0).unwrap();
    assert!(sol.delta(t).is_ok());
    assert!(sol.delta(dp.t_of_x(9.0).unwrap()).is_err());
}
