use biharm::models::interval;
use biharm::quadrature::{
    fd_residual, integrate, integrate_radial, probe_divergence, unit_sphere_area, Location,
    ProbeVerdict, RadialRange, Side, Stencil,
};
use biharm::Error;
use proptest::prelude::*;

#[test]
fn integrate_spec_examples() {
    let r = integrate(|y: f64| (1.0 / y - 1.0) * y, 0.0, 1.0, &[], 1e-8).unwrap();
    assert!((r.value.value() - 0.5).abs() <= 1e-8);

    let r = integrate(|_| 0.0, 0.2, 0.7, &[], 1e-8).unwrap();
    assert_eq!(r.value.value(), 0.0);

    let r = integrate(|y: f64| (1.0 / (y * y) - 1.0) * y, 0.0, 0.5, &[0.0], 1e-8).unwrap();
    let cert = r.value.certificate().expect("log divergence at 0");
    assert_eq!(cert.location, Location::Point(0.0));
    assert!((cert.estimated_exponent + 1.0).abs() < 0.05);
}

#[test]
fn undeclared_singularity_is_an_error() {
    let r = integrate(|y: f64| 1.0 / y, 0.0, 1.0, &[], 1e-8);
    assert!(matches!(r, Err(Error::UndeclaredSingularity { .. })), "{r:?}");
}

#[test]
fn probe_spec_examples() {
    let v = probe_divergence(|y: f64| 1.0 / y, 0.0, Side::Right, 1.0).unwrap();
    assert!(v.is_divergent());
    assert!((v.exponent() + 1.0).abs() < 0.05);

    let v = probe_divergence(|y: f64| y.powf(-0.5), 0.0, Side::Right, 1.0).unwrap();
    assert!(matches!(v, ProbeVerdict::Finite { .. }));
    assert!((v.exponent() + 0.5).abs() < 0.05);

    let m = interval::model();
    let f = |y: f64| m.g1.value(0.5, y) * m.g2.value(y, 0.0) * m.density(y);
    assert!(probe_divergence(f, 0.0, Side::Right, 0.5).unwrap().is_divergent());
}

#[test]
fn probe_rejects_oscillating_integrands() {
    let r = probe_divergence(|y: f64| (1.0 / y).sin() / y, 0.0, Side::Right, 1.0);
    assert!(matches!(r, Err(Error::OscillatingSign { .. })), "{r:?}");
}

#[test]
fn probe_from_the_left() {
    let v = probe_divergence(|y: f64| 1.0 / (1.0 - y), 1.0, Side::Left, 0.5).unwrap();
    assert!(v.is_divergent());
}

#[test]
fn radial_spec_examples() {
    let r = integrate_radial(|r: f64| r.powi(-3), 5, RadialRange::Whole, 1e-8).unwrap();
    let cert = r.value.certificate().expect("tail divergence");
    assert_eq!(cert.location, Location::Tail);
    assert!((cert.estimated_exponent - 1.0).abs() < 0.05);

    let r = integrate_radial(|r: f64| r.powi(-3), 5, RadialRange::Ball(1.0), 1e-10).unwrap();
    let expect = 13.159_472_534_785_811;
    assert!((r.value.value() - expect).abs() < 1e-8, "{}", r.value);
    assert!((unit_sphere_area(5) / 2.0 - expect).abs() < 1e-12);

    let r = integrate_radial(|_| 0.0, 6, RadialRange::Whole, 1e-8).unwrap();
    assert_eq!(r.value.value(), 0.0);

    assert_eq!(
        integrate_radial(|_| 1.0, 4, RadialRange::Ball(1.0), 1e-8).unwrap_err(),
        Error::ModelDimension(4)
    );
}

#[test]
fn fd_spec_examples() {
    let l1 = interval::model().l1;
    let r = fd_residual(&l1, |x| interval::p(x, 0.5), 0.25, 1e-4).unwrap();
    assert!(r.abs() <= 1e-6, "{r}");
    let r = fd_residual(&l1, |x: f64| 1.0 + 1.0 / x, 0.5, 1e-4).unwrap();
    assert!(r.abs() <= 1e-6);
    let r = fd_residual(&l1, |x: f64| (1.0 - x) / 2.0, 0.5, 1e-4).unwrap();
    assert!((r + 1.0).abs() <= 1e-6, "{r}");
}

#[test]
fn fd_rejects_infinite_window() {
    let l1 = interval::model().l1;
    let r = fd_residual(&l1, |x: f64| 1.0 / x, 1e-4, 1e-4);
    assert!(matches!(r, Err(Error::Stencil { .. })));
}

#[test]
fn flux_stencil_on_harmonic_basis() {
    let l2 = Stencil::Flux(|x| x * x * x);
    for x in [0.1, 0.4, 0.9] {
        let r = fd_residual(&l2, |t: f64| 3.0 + 2.0 / (t * t), x, 1e-4).unwrap();
        assert!(r.abs() <= 1e-3, "{x}: {r}");
    }
}

#[test]
fn power_family_verdicts_are_exact() {
    for (p, div) in [(-1.5, true), (-1.25, true), (-1.0, true), (-0.9, false), (-0.5, false)] {
        let v = probe_divergence(move |t: f64| t.powf(p), 0.0, Side::Right, 1.0).unwrap();
        assert_eq!(v.is_divergent(), div, "p = {p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_verdict_matches_exponent(p in prop_oneof![-2.0f64..-1.0, -0.85f64..0.5]) {
        let v = probe_divergence(move |t: f64| t.powf(p), 0.0, Side::Right, 1.0).unwrap();
        prop_assert_eq!(v.is_divergent(), p <= -1.0);
    }

    #[test]
    fn convergent_powers_integrate_to_closed_form(p in -0.9f64..2.0) {
        let r = integrate(move |t: f64| t.powf(p), 0.0, 1.0, &[0.0], 1e-8).unwrap();
        let exact = 1.0 / (p + 1.0);
        prop_assert!((r.value.value() - exact).abs() <= 1e-6 * exact.max(1.0), "{} vs {}", r.value, exact);
    }

    #[test]
    fn partitions_are_additive(cuts in proptest::collection::vec(0.01f64..0.99, 1..5)) {
        let f = |t: f64| (-t.ln()) * (1.0 + t * t);
        let tol = 1e-9;
        let whole = integrate(f, 0.0, 1.0, &[0.0], tol).unwrap().value.value();
        let mut pts = cuts.clone();
        pts.push(0.0);
        pts.push(1.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut sum = 0.0;
        for w in pts.windows(2) {
            let sing: &[f64] = if w[0] == 0.0 { &[0.0] } else { &[] };
            sum += integrate(f, w[0], w[1], sing, tol).unwrap().value.value();
        }
        prop_assert!((whole - sum).abs() <= 2.0 * tol * pts.len() as f64, "{} vs {}", whole, sum);
    }

    #[test]
    fn refinement_never_loses_accuracy(a in 0.6f64..3.0) {
        let exact = 1.0 / (1.0 - 1.0 / (2.0 * a)) ; // ∫_0^1 t^{-1/(2a)} dt
        let mut prev = f64::INFINITY;
        for tol in [1e-4, 1e-6, 1e-8, 1e-10] {
            let v = integrate(move |t: f64| t.powf(-0.5 / a), 0.0, 1.0, &[0.0], tol).unwrap().value.value();
            let err = (v - exact).abs();
            prop_assert!(err <= tol.max(1e-14) * 10.0 && err <= prev.max(tol), "tol {}: err {}", tol, err);
            prev = err;
        }
    }
}
