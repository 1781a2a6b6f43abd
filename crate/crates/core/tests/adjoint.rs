use biharm::adjoint::{
    adjoint_apply, condition63_check, continuity_probe, duality_defect, eq61_residual, lsc_probe,
    Condition63Verdict, ContinuityVerdict, Eq61Outcome,
};
use biharm::models::{bilaplace, interval};
use biharm::{Error, Evaluable, GreenKernel};
use proptest::prelude::*;

fn bump(a: f64, b: f64) -> Evaluable {
    Evaluable::closed(format!("bump[{a},{b}]"), move |z| {
        if z < a || z > b {
            0.0
        } else {
            (z - a) * (b - z)
        }
    })
    .with_kinks(&[a, b])
}

#[test]
fn adjoint_of_data_charging_the_origin_is_infinite() {
    let m = interval::model();
    let phi = Evaluable::closed("1-x", |z| 1.0 - z);
    let v = adjoint_apply(&m, &phi, 0.0).unwrap();
    assert!(v.is_infinite());
    assert!(v.certificate().is_some());
    assert!(adjoint_apply(&m, &phi, 0.3).unwrap().is_finite());
}

#[test]
fn adjoint_of_compact_data_is_finite_and_zero_data_gives_zero() {
    let m = interval::model();
    let v = adjoint_apply(&m, &bump(0.4, 0.6), 0.9).unwrap();
    assert!(v.is_finite() && v.value() > 0.0);
    // q_x(z) = 1/x² - 1 for z ≤ x, so the value is (1/0.81 - 1)·∫ φ(z) z dz
    let moment: f64 = 0.5 * 0.2f64.powi(3) / 6.0;
    assert!((v.value() - (1.0 / 0.81 - 1.0) * moment).abs() < 1e-9);
    assert_eq!(adjoint_apply(&m, &Evaluable::zero(), 0.5).unwrap().value(), 0.0);
}

#[test]
fn condition_passes_away_from_the_origin() {
    let m = interval::model();
    let grid: Vec<f64> = (0..20).map(|k| 0.05 * k as f64).collect();
    let r = condition63_check(&m, &bump(0.3, 0.7), (0.3, 0.7), &grid).unwrap();
    assert!(r.passed(), "{:?}", r.verdict);
    assert_eq!(r.values.len(), grid.len());
}

#[test]
fn condition_fails_with_a_witness_at_the_origin() {
    let m = interval::model();
    let grid: Vec<f64> = (0..10).map(|k| 0.1 * k as f64).collect();
    let phi = Evaluable::closed("1-x on [0, 0.5]", |z| if z <= 0.5 { 0.5 - z } else { 0.0 })
        .with_kinks(&[0.5]);
    let r = condition63_check(&m, &phi, (0.0, 0.5), &grid).unwrap();
    match r.verdict {
        Condition63Verdict::Infinite { witness, .. } => assert_eq!(witness, 0.0),
        v => panic!("expected an infinite witness, got {v:?}"),
    }
}

#[test]
fn condition_passes_on_bilaplace_and_rejects_bad_input() {
    let m = bilaplace::model();
    let grid: Vec<f64> = (1..20).map(|k| 0.05 * k as f64).collect();
    assert!(condition63_check(&m, &bump(0.2, 0.9), (0.2, 0.9), &grid)
        .unwrap()
        .passed());
    assert!(condition63_check(&m, &bump(0.2, 0.9), (0.9, 0.2), &grid).is_err());
    assert!(condition63_check(&m, &bump(0.2, 0.9), (0.2, 0.9), &[0.5, 0.4]).is_err());
}

#[test]
fn both_routes_to_h_agree() {
    let m = bilaplace::model();
    match eq61_residual(&m, 0.3, 0.6).unwrap() {
        Eq61Outcome::Finite { residual, compose_route, .. } => {
            assert!(residual <= 1e-6);
            assert!((compose_route - bilaplace::h_closed_form(0.6, 0.3)).abs() < 1e-8);
        }
        o => panic!("{o:?}"),
    }
    let im = interval::model();
    match eq61_residual(&im, 0.5, 0.25).unwrap() {
        Eq61Outcome::Finite { residual, .. } => assert!(residual <= 1e-6),
        o => panic!("{o:?}"),
    }
    assert!(matches!(
        eq61_residual(&im, 0.5, 0.0).unwrap(),
        Eq61Outcome::Finite { .. }
    ));
    assert_eq!(
        eq61_residual(&im, 0.0, 0.0).unwrap(),
        Eq61Outcome::ConsistentDivergence
    );
}

#[test]
fn continuity_verdicts() {
    let m = bilaplace::model();
    let r = continuity_probe(&m, 0.3, 0.6, 16).unwrap();
    assert_eq!(r.verdict, ContinuityVerdict::Consistent);
    assert_eq!(r.approach.len(), 16);
    let r = continuity_probe(&m, 0.4, 0.4, 16).unwrap();
    assert_eq!(r.verdict, ContinuityVerdict::Consistent);

    let im = interval::model();
    let r = continuity_probe(&im, 0.0, 0.0, 16).unwrap();
    assert_eq!(r.verdict, ContinuityVerdict::BoundaryBlowUp);
    assert!(continuity_probe(&im, 0.5, 0.5, 1).is_err());
}

#[test]
fn a_jump_in_g2_is_detected() {
    let mut m = bilaplace::model();
    m.g2 = GreenKernel::line("step", bilaplace::DOMAIN, |_, y| if y <= 0.5 { 1.0 } else { 2.0 });
    let r = continuity_probe(&m, 0.3, 0.5, 16).unwrap();
    assert_eq!(r.verdict, ContinuityVerdict::Violated);
}

#[test]
fn h_is_lower_semicontinuous_on_a_grid() {
    for m in [bilaplace::model(), interval::model()] {
        let nodes = lsc_probe(&m, 5, 12).unwrap();
        assert_eq!(nodes.len(), 25);
        assert!(nodes.iter().all(|n| n.passed), "{:?}", nodes.iter().find(|n| !n.passed));
    }
}

#[test]
fn duality_only_where_kernels_coincide() {
    let m = bilaplace::model();
    let d = duality_defect(&m, &bump(0.1, 0.6), &Evaluable::closed("x", |x| x)).unwrap();
    assert!(d <= 1e-6, "{d}");
    assert!(matches!(
        duality_defect(&interval::model(), &bump(0.1, 0.6), &Evaluable::constant(1.0)),
        Err(Error::AdjointUnavailable(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_is_monotone_and_linear(
        a in 0.05f64..0.5, w in 0.05f64..0.45, x in 0.0f64..0.99, c in 0.0f64..4.0,
    ) {
        let m = interval::model();
        let phi = bump(a, a + w);
        let base = adjoint_apply(&m, &phi, x).unwrap().value();
        let scaled = Evaluable::closed("c·bump", {
            let phi = phi.clone();
            move |z| c * phi.value(z)
        })
        .with_kinks(&[a, a + w]);
        let sv = adjoint_apply(&m, &scaled, x).unwrap().value();
        prop_assert!(base >= 0.0);
        prop_assert!((sv - c * base).abs() <= 1e-8 * (1.0 + c * base));
        let bigger = Evaluable::closed("bump + 1", {
            let phi = phi.clone();
            move |z| phi.value(z) + 1.0
        })
        .with_kinks(&[a, a + w]);
        prop_assert!(adjoint_apply(&m, &bigger, x).unwrap().value() >= base);
    }
}
