mod common;

use std::sync::Arc;

use roughmass::conformal::{conformal_rescale, conformal_scalar, structural_constants, Regime};
use roughmass::geometry::{
    scalar_curvature, CurvatureOptions, MetricData, MetricField, Region, ScalarField, SharedProfile, StencilOrder,
};
use roughmass::scenarios::{make_scenario, ScenarioKind, ScenarioSpec};
use roughmass::Error;

use common::*;

fn components(g: &MetricField) -> Vec<f64> {
    match g.data() {
        MetricData::Cartesian(v) => v.iter().flatten().copied().collect(),
        MetricData::Radial(v) => v.iter().flatten().copied().collect(),
    }
}

#[test]
fn structural_constant_examples() {
    let c = structural_constants(3, 2.0).unwrap();
    assert_eq!((c.a_n, c.n_star, c.two_p_star, c.chi, c.sigma, c.tau), (8.0, 6.0, 4.0, 1.5, 2.0, 6.0));
    let crit = structural_constants(3, 1.5).unwrap();
    assert_eq!(crit.regime, Regime::Critical);
    assert!(!crit.is_supercritical());
    for n in 3..=7 {
        let c = structural_constants(n, 2.0).unwrap();
        assert!(c.a_n > 4.0 && c.n_star > 2.0);
    }
}

#[test]
fn unit_and_constant_factors() {
    let disc = cube(1.0, 0.125);
    let g = gauss_conformal_metric(disc, 0.3);
    let same = conformal_rescale(&g, &ScalarField::constant(disc, 1.0)).unwrap();
    assert_eq!(components(&same), components(&g));
    let two = conformal_rescale(&g, &ScalarField::constant(disc, 2f64.powf(0.25))).unwrap();
    for (a, b) in components(&two).iter().zip(components(&g)) {
        assert!((a - 2.0 * b).abs() <= 1e-14 * b.abs());
    }
    let opts = CurvatureOptions { order: StencilOrder::Second, use_exterior: false };
    let s = scalar_curvature(&g, &opts).unwrap().field;
    let s1 = conformal_scalar(&g, &ScalarField::constant(disc, 1.0), &opts).unwrap();
    for (a, b) in s1.values().iter().zip(s.values()) {
        assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
    }
}

#[test]
fn rescaling_composes() {
    let disc = cube(1.0, 0.125);
    let g = pullback_metric(disc, 0.2);
    let u = ScalarField::from_fn(disc, |x| 1.0 + 0.3 * (-(x[0] * x[0] + x[1] * x[1])).exp());
    let w = ScalarField::from_fn(disc, |x| 1.2 + 0.1 * x[2].sin());
    let uw = u.zip_map(&w, |a, b| a * b).unwrap();
    let twice = conformal_rescale(&conformal_rescale(&g, &u).unwrap(), &w).unwrap();
    let once = conformal_rescale(&g, &uw).unwrap();
    for (a, b) in components(&twice).iter().zip(components(&once)) {
        assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()));
    }
}

#[test]
fn schwarzschild_is_a_rescaled_flat_metric() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild)).unwrap();
    let disc = *sc.metric.disc();
    let flat = MetricField::euclidean(disc).unwrap();
    let u = ScalarField::from_fn(disc, |x| 1.0 + 0.5 / x[0]);
    let hat = conformal_rescale(&flat, &u).unwrap();
    let (a, b) = (sc.metric.radial().unwrap(), hat.radial().unwrap());
    for i in Region::annulus(disc, 1.0 + 1e-9, f64::INFINITY).nodes() {
        for q in 0..2 {
            assert!((a[i][q] - b[i][q]).abs() <= 1e-13 * a[i][q], "node {i}");
        }
    }
}

#[test]
fn transformation_law_matches_direct_curvature() {
    let mut errs = Vec::new();
    for h in [0.2, 0.1] {
        let disc = cube(2.0, h);
        let flat = MetricField::euclidean(disc).unwrap();
        let profile: SharedProfile = Arc::new(GaussBump(1.0));
        let u = ScalarField::from_profile(disc, profile);
        let opts = CurvatureOptions { order: StencilOrder::Second, use_exterior: false };
        let law = conformal_scalar(&flat, &u, &opts).unwrap();
        let mut g = conformal_rescale(&flat, &u).unwrap();
        g = g.with_exterior(None);
        let direct = scalar_curvature(&g, &opts).unwrap().field;
        let inner = Region::whole(disc).interior().interior();
        errs.push(inner.nodes().map(|i| (law.values()[i] - direct.values()[i]).abs()).fold(0.0, f64::max));
    }
    assert!(errs[0] / errs[1] > 3.4, "{errs:?}");
}

#[test]
fn superharmonic_factor_gives_nonnegative_curvature() {
    let disc = cube(1.4, 0.1);
    let flat = MetricField::euclidean(disc).unwrap();
    let u = ScalarField::from_fn(disc, |x| 1.0 + 0.5 * x[0].cos() * x[1].cos() * x[2].cos());
    let s = conformal_scalar(&flat, &u, &CurvatureOptions::default()).unwrap();
    for i in Region::whole(disc).interior().nodes() {
        assert!(s.values()[i] >= 0.0, "node {i}: {}", s.values()[i]);
    }
}

#[test]
fn conformal_bump_has_nonnegative_curvature() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::ConformalBump)).unwrap();
    let s = scalar_curvature(&sc.metric, &CurvatureOptions::default()).unwrap().field;
    let disc = *sc.metric.disc();
    let min = Region::whole(disc).interior().nodes().map(|i| s.values()[i]).fold(f64::INFINITY, f64::min);
    assert!(min >= -1e-8, "{min}");
}

#[test]
fn non_positive_factor_is_rejected() {
    let disc = cube(1.0, 0.125);
    let g = MetricField::euclidean(disc).unwrap();
    let mut vals = vec![1.0; disc.len()];
    vals[42] = 0.0;
    let u = ScalarField::new(disc, vals).unwrap();
    match conformal_rescale(&g, &u) {
        Err(Error::NonPositiveFactor { node, .. }) => assert_eq!(node, 42),
        other => panic!("unexpected {other:?}"),
    }
}
