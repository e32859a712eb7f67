mod common;

use std::f64::consts::PI;

use roughmass::geometry::{
    distributional_pairing, lp_norm, negative_part, riemannian_volume, scalar_curvature, sobolev_distance,
    CurvatureOptions, Discretization, MetricData, MetricField, RadialMesh, Region, ScalarField, StencilOrder,
};
use roughmass::scenarios::{make_scenario, ScenarioKind, ScenarioSpec};
use roughmass::Error;

use common::*;

const FD_ONLY: CurvatureOptions = CurvatureOptions { order: StencilOrder::Second, use_exterior: false };

/// [-0.5, 0.5)^3 on a grid of spacing 0.1: exactly 1000 cells of volume h^3.
fn unit_cube(disc: Discretization) -> Region {
    Region::coordinate_box(disc, [-0.5; 3], [0.45 + 1e-9; 3]).unwrap()
}

fn scaled_flat(disc: Discretization, c: f64) -> MetricField {
    let data = vec![[c, 0.0, 0.0, c, 0.0, c]; disc.len()];
    MetricField::new(disc, MetricData::Cartesian(data), None, 0.0, 1.0).unwrap()
}

#[test]
fn flat_metric_has_zero_curvature() {
    for h in [0.25, 0.1] {
        let disc = cube(2.0, h);
        let g = MetricField::euclidean(disc).unwrap();
        let s = scalar_curvature(&g, &FD_ONLY).unwrap().field;
        assert!(s.max_abs() < 1e-10, "{}", s.max_abs());
    }
}

#[test]
fn constant_norms_on_unit_volume() {
    let disc = cube(1.0, 0.1);
    let g = MetricField::euclidean(disc).unwrap();
    let region = unit_cube(disc);
    assert_eq!(region.count(), 1000);
    let one = lp_norm(&ScalarField::constant(disc, 1.0), 6.0, &g, &region).unwrap();
    assert!((one - 1.0).abs() < 1e-12);
    let three = lp_norm(&ScalarField::constant(disc, 3.0), 1.5, &g, &region).unwrap();
    assert!((three - 3.0).abs() < 1e-12);
    let inf = lp_norm(&ScalarField::constant(disc, -2.0), f64::INFINITY, &g, &region).unwrap();
    assert_eq!(inf, 2.0);
}

#[test]
fn empty_region_has_no_norm() {
    let disc = cube(1.0, 0.1);
    let g = MetricField::euclidean(disc).unwrap();
    let u = ScalarField::constant(disc, 1.0);
    assert!(matches!(lp_norm(&u, 2.0, &g, &Region::empty(disc)), Err(Error::EmptyRegion)));
}

#[test]
fn gaussian_norm_matches_closed_form() {
    // int exp(-2 r^2) dx over R^3 = (pi / 2)^{3/2}
    let exact = (PI / 2.0).powf(1.5).sqrt();
    let mut errs = Vec::new();
    for h in [0.2, 0.1] {
        let disc = cube(4.0, h);
        let g = MetricField::euclidean(disc).unwrap();
        let u = ScalarField::from_fn(disc, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp());
        let l2 = lp_norm(&u, 2.0, &g, &Region::whole(disc)).unwrap();
        errs.push((l2 - exact).abs());
    }
    assert!(errs[1] <= errs[0] + 1e-12 && errs[1] < 1e-6, "{errs:?}");
}

#[test]
fn volumes_of_cubes_and_balls() {
    let disc = cube(1.0, 0.1);
    let cube_region = unit_cube(disc);
    let flat = MetricField::euclidean(disc).unwrap();
    assert!((riemannian_volume(&cube_region, &flat).unwrap() - 1.0).abs() < 1e-12);
    let four = scaled_flat(disc, 4.0);
    assert!((riemannian_volume(&cube_region, &four).unwrap() - 8.0).abs() < 1e-11);

    let ball = Discretization::Radial(RadialMesh::regular(3, 2.0, 0.001).unwrap());
    let g = MetricField::euclidean(ball).unwrap();
    let vol = riemannian_volume(&Region::ball(ball, 1.0), &g).unwrap();
    assert!((vol - 4.0 * PI / 3.0).abs() < 1e-2, "{vol}");

    let grid = cube(1.5, 0.05);
    let g = MetricField::euclidean(grid).unwrap();
    let vol = riemannian_volume(&Region::ball(grid, 1.0), &g).unwrap();
    assert!((vol - 4.0 * PI / 3.0).abs() < 0.05, "{vol}");
}

#[test]
fn volume_is_additive() {
    let disc = cube(1.5, 0.1);
    let g = gauss_conformal_metric(disc, 0.5);
    let ball = Region::ball(disc, 1.0);
    let rest = ball.complement();
    let total = riemannian_volume(&Region::whole(disc), &g).unwrap();
    let parts = riemannian_volume(&ball, &g).unwrap() + riemannian_volume(&rest, &g).unwrap();
    assert!((total - parts).abs() < 1e-12 * total);
}

#[test]
fn sobolev_distance_examples() {
    let disc = cube(1.0, 0.1);
    let g = gauss_conformal_metric(disc, 0.3);
    assert_eq!(sobolev_distance(&g, &g, &Region::whole(disc)).unwrap(), 0.0);
    let a = scaled_flat(disc, 1.0);
    let b = scaled_flat(disc, 1.25);
    let d = sobolev_distance(&b, &a, &unit_cube(disc)).unwrap();
    assert!((d - 0.25 * 3f64.sqrt()).abs() < 1e-12, "{d}");
}

#[test]
fn sobolev_distance_rejects_mismatched_grids() {
    let a = MetricField::euclidean(cube(1.0, 0.1)).unwrap();
    let b = MetricField::euclidean(cube(1.0, 0.05)).unwrap();
    let region = Region::whole(*a.disc());
    assert!(matches!(sobolev_distance(&a, &b, &region), Err(Error::DiscretizationMismatch)));
}

#[test]
fn negative_part_examples() {
    let disc = cube(1.0, 0.125);
    assert_eq!(negative_part(&ScalarField::constant(disc, 5.0)).max_abs(), 0.0);
    let neg = negative_part(&ScalarField::constant(disc, -3.0));
    assert!(neg.values().iter().all(|&v| v == 3.0));
}

#[test]
fn pairing_examples() {
    let disc = cube(2.0, 0.05);
    let g = MetricField::euclidean(disc).unwrap();
    // (1 - r^2)^2 on the unit ball integrates to 32 pi / 105
    let bump = ScalarField::from_fn(disc, |x| {
        let t = 1.0 - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if t > 0.0 {
            t * t * 2.0 * 105.0 / (32.0 * PI)
        } else {
            0.0
        }
    });
    let zero = distributional_pairing(&ScalarField::zeros(disc), &bump, &g).unwrap();
    assert_eq!(zero, 0.0);
    let two = distributional_pairing(&ScalarField::constant(disc, 1.0), &bump, &g).unwrap();
    assert!((two - 2.0).abs() < 2e-3, "{two}");
}

#[test]
fn conformal_gaussian_curvature_is_second_order() {
    let errors: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&h| conformal_identity_error(h, 1.0)).collect();
    let orders = observed_orders(&errors);
    assert!(orders.iter().all(|&p| p >= 1.8), "errors {errors:?} orders {orders:?}");
}

#[test]
fn schwarzschild_vacuum_curvature_vanishes_under_refinement() {
    let mut maxes = Vec::new();
    for h in [0.1, 0.05, 0.025] {
        let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild).radial(3, 20.0, h)).unwrap();
        let s = scalar_curvature(&sc.metric, &FD_ONLY).unwrap().field;
        let disc = *sc.metric.disc();
        let exterior = Region::annulus(disc, 1.5, 15.0);
        maxes.push(lp_norm(&s, f64::INFINITY, &sc.metric, &exterior).unwrap());
    }
    assert!(maxes[1] < maxes[0] && maxes[2] < maxes[1], "{maxes:?}");
    assert!(maxes[0] / maxes[1] > 3.5 && maxes[1] / maxes[2] > 3.5, "{maxes:?}");

    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild).radial(3, 20.0, 0.05)).unwrap();
    let s = scalar_curvature(&sc.metric, &CurvatureOptions::default()).unwrap().field;
    let disc = *sc.metric.disc();
    let phi = ScalarField::from_fn(disc, |x| {
        let t = (x[0] - 4.0).abs();
        if t < 1.0 {
            (1.0 - t * t).powi(3)
        } else {
            0.0
        }
    });
    assert!(distributional_pairing(&s, &phi, &sc.metric).unwrap().abs() < 1e-10);
}

#[test]
fn indefinite_data_names_the_node() {
    let disc = cube(1.0, 0.125);
    let mut data = vec![[1.0, 0.0, 0.0, 1.0, 0.0, 1.0]; disc.len()];
    data[17] = [1.0, 2.0, 0.0, 1.0, 0.0, 1.0];
    match MetricField::new(disc, MetricData::Cartesian(data), None, 0.0, 1.0) {
        Err(Error::NotPositiveDefinite { node, .. }) => assert_eq!(node, 17),
        other => panic!("unexpected {other:?}"),
    }
}
