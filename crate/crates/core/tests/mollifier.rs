mod common;

use roughmass::geometry::{CurvatureOptions, MetricData, MetricField, Sym3};
use roughmass::mollifier::{convergence_table, equivalence_factor, mollify, partition, Chart, MollifierSpec};
use roughmass::scenarios::{make_scenario, ScenarioKind, ScenarioSpec};
use roughmass::Error;

use common::*;

fn cartesian(g: &MetricField) -> &[Sym3] {
    match g.data() {
        MetricData::Cartesian(v) => v,
        _ => panic!("expected cartesian data"),
    }
}

fn gen_eigs(a: &Sym3, b: &Sym3) -> Vec<f64> {
    let m1 = nalgebra::Matrix3::new(a[0], a[1], a[2], a[1], a[3], a[4], a[2], a[4], a[5]);
    let m2 = nalgebra::Matrix3::new(b[0], b[1], b[2], b[1], b[3], b[4], b[2], b[4], b[5]);
    let prod = m1.try_inverse().unwrap() * m2;
    prod.complex_eigenvalues().iter().map(|z| z.re).collect()
}

#[test]
fn flat_metric_is_a_fixed_point() {
    let disc = cube(2.0, 0.1);
    let g = MetricField::euclidean(disc).unwrap();
    let charts = vec![Chart::centered(0.3, 0.8, 1.3), Chart { center: [0.5, 0.0, 0.0], ..Chart::centered(0.2, 0.5, 0.9) }];
    for eps in [0.3, 0.2] {
        let sm = mollify(&g, &MollifierSpec { eps, charts: charts.clone() }).unwrap();
        assert_eq!(cartesian(&sm.metric), cartesian(&g));
    }
}

#[test]
fn rough_bump_exterior_is_bit_identical() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::RoughBump)).unwrap();
    let eps = 0.1;
    let sm = mollify(&sc.metric, &MollifierSpec { eps, charts: sc.charts.clone() }).unwrap();
    let disc = *sc.metric.disc();
    let (a, b) = (cartesian(&sc.metric), cartesian(&sm.metric));
    let cut = sm.metric.compact_radius() + eps;
    let mut checked = 0;
    for i in 0..disc.len() {
        if !sm.region.contains(i) || disc.radius(i) > cut {
            assert_eq!(a[i].map(f64::to_bits), b[i].map(f64::to_bits), "node {i}");
            checked += 1;
        }
    }
    assert!(checked > disc.len() / 2);
    assert!(sm.hausdorff <= eps + 2.0 * 3f64.sqrt() * disc.spacing() + 1e-12);
}

#[test]
fn partition_squares_sum_to_one_everywhere() {
    let charts = vec![
        Chart::centered(0.3, 0.8, 1.3),
        Chart { center: [0.6, -0.2, 0.1], ..Chart::centered(0.1, 0.4, 0.7) },
    ];
    for i in 0..40 {
        for j in 0..40 {
            let x = [-1.0 + 0.05 * i as f64, -1.0 + 0.05 * j as f64, 0.13];
            let (chi, ext) = partition(&charts, x);
            let total: f64 = chi.iter().map(|c| c * c).sum::<f64>() + ext * ext;
            assert!((total - 1.0).abs() < 1e-10, "{x:?}: {total}");
        }
    }
}

#[test]
fn sandwich_holds_at_every_node() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::RoughBump)).unwrap();
    let sm = mollify(&sc.metric, &MollifierSpec { eps: 0.1, charts: sc.charts.clone() }).unwrap();
    let rho = equivalence_factor(&sc.metric, &sm.metric).unwrap();
    assert!(rho >= 1.0);
    let (a, b) = (cartesian(&sc.metric), cartesian(&sm.metric));
    for i in sm.region.nodes() {
        for ev in gen_eigs(&a[i], &b[i]) {
            assert!(ev >= 1.0 / rho - 1e-12 && ev <= rho + 1e-12, "node {i}: {ev} outside [1/{rho}, {rho}]");
        }
    }
}

#[test]
fn equivalence_factor_examples() {
    let disc = cube(1.0, 0.125);
    let g = gauss_conformal_metric(disc, 0.4);
    assert_eq!(equivalence_factor(&g, &g).unwrap(), 1.0);
    let four = match g.data() {
        MetricData::Cartesian(v) => MetricData::Cartesian(v.iter().map(|s| s.map(|c| 4.0 * c)).collect()),
        _ => unreachable!(),
    };
    let g4 = g.with_data(four).unwrap();
    assert!((equivalence_factor(&g, &g4).unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn scale_limits_are_enforced() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::RoughBump)).unwrap();
    let h = sc.metric.disc().spacing();
    let under = mollify(&sc.metric, &MollifierSpec { eps: 1.5 * h, charts: sc.charts.clone() });
    assert!(matches!(under, Err(Error::UnderResolved { .. })));
    let over = mollify(&sc.metric, &MollifierSpec { eps: sc.charts[0].eps0() + 0.01, charts: sc.charts.clone() });
    assert!(matches!(over, Err(Error::EpsTooLarge { .. })));
}

#[test]
fn flat_convergence_table_is_zero() {
    let disc = cube(2.0, 0.125);
    let g = MetricField::euclidean(disc).unwrap();
    let table = convergence_table(&g, &[Chart::centered(0.5, 0.8, 1.5)], &[0.5, 0.25], &CurvatureOptions::default()).unwrap();
    for row in &table.rows {
        assert_eq!((row.sup_dist, row.w2_dist, row.s_diff, row.s_neg), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(row.rho, 1.0);
    }
    assert!(table.to_csv().starts_with("eps,sup_dist,w2_dist,s_diff_n2,s_neg_n2"));
}

#[test]
fn rough_bump_distances_shrink() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::RoughBump)).unwrap();
    let table = convergence_table(&sc.metric, &sc.charts, &[0.2, 0.1, 0.05], &CurvatureOptions::default()).unwrap();
    assert!(table.strictly_decreasing(|r| r.sup_dist), "{}", table.to_csv());
    assert!(table.strictly_decreasing(|r| r.w2_dist), "{}", table.to_csv());
    assert!(table.strictly_decreasing(|r| r.rho), "{}", table.to_csv());
    assert!(table.rows.iter().all(|r| r.negative_part_bounded()));
    let mut eps: Vec<f64> = table.rows.iter().map(|r| r.eps).collect();
    eps.dedup();
    assert_eq!(eps, vec![0.2, 0.1, 0.05]);
}

#[test]
fn conformal_bump_negative_part_is_dominated() {
    let spec = ScenarioSpec::new(ScenarioKind::ConformalBump).cartesian(2.0, 0.05);
    let sc = make_scenario(&spec).unwrap();
    let table = convergence_table(&sc.metric, &sc.charts, &[0.4, 0.2, 0.1], &CurvatureOptions::default()).unwrap();
    for r in &table.rows {
        assert!(r.s_neg <= r.s_diff, "eps {}: {} > {}", r.eps, r.s_neg, r.s_diff);
    }
}

#[test]
fn radial_metrics_cannot_be_mollified() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild)).unwrap();
    let err = mollify(&sc.metric, &MollifierSpec { eps: 0.5, charts: sc.charts.clone() }).unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}
