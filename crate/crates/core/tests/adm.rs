mod common;

use std::sync::Arc;

use roughmass::adm::{adm_mass, default_radii, mass_at_radius, mass_shift_check, MassOptions, MassRoute};
use roughmass::elliptic::extract_decay_coefficient;
use roughmass::geometry::{
    Discretization, MetricField, RadialMesh, RadialProfile, ScalarField, SharedProfile,
};
use roughmass::mollifier::{mollify, MollifierSpec};
use roughmass::scenarios::{make_scenario, ScenarioKind, ScenarioSpec};

use common::*;

/// 1 + c/r outside the unit ball, capped by a quadratic inside.
#[derive(Debug)]
struct CappedInverse(f64);

impl RadialProfile for CappedInverse {
    fn jet(&self, r: f64) -> [f64; 3] {
        let c = self.0;
        if r >= 1.0 {
            [1.0 + c / r, -c / (r * r), 2.0 * c / (r * r * r)]
        } else {
            [1.0 + 0.5 * c * (3.0 - r * r), -c * r, -c]
        }
    }
}

#[test]
fn flat_space_has_zero_mass() {
    let disc = cube(4.0, 0.25);
    let g = MetricField::euclidean(disc).unwrap();
    let rep = adm_mass(&g, &MassOptions::default()).unwrap();
    assert!(rep.mass.abs() <= 1e-10);
    let fd = adm_mass(&g, &MassOptions { force_fd: true, ..MassOptions::default() }).unwrap();
    assert!(fd.mass.abs() <= 1e-10);
    assert_eq!(fd.route, MassRoute::FiniteDifference);
}

#[test]
fn schwarzschild_sphere_flux_matches_closed_form() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild)).unwrap();
    let m20 = mass_at_radius(&sc.metric, 20.0, &MassOptions::default()).unwrap();
    // -r^2 psi'(r) / 2 with psi = (1 + 1/(2r))^4
    let exact = 1.025f64.powi(3);
    assert!((m20 - exact).abs() < 1e-10, "{m20}");
    assert!((m20 - 1.0).abs() < 0.08);
    let mut prev = f64::INFINITY;
    for r in [5.0, 10.0, 20.0, 30.0] {
        let m = mass_at_radius(&sc.metric, r, &MassOptions::default()).unwrap();
        assert!(m < prev && m > 1.0);
        assert!((m - 1.0) * r < 2.0);
        prev = m;
    }
}

#[test]
fn schwarzschild_extrapolated_mass() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild).radial(3, 40.0, 0.25)).unwrap();
    let closed = adm_mass(&sc.metric, &MassOptions::default()).unwrap();
    assert!((closed.mass - 1.0).abs() < 5e-3, "{}", closed.mass);
    let fd = adm_mass(&sc.metric, &MassOptions { force_fd: true, ..MassOptions::default() }).unwrap();
    assert!((fd.mass - 1.0).abs() < 5e-3, "{}", fd.mass);
    assert!(closed.unresolved.is_none());
}

#[test]
fn radii_lie_outside_the_compact_set() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild)).unwrap();
    let radii = default_radii(&sc.metric, 8).unwrap();
    assert!(radii.windows(2).all(|w| w[1] > w[0]));
    assert!(radii[0] > sc.metric.compact_radius());
    assert!(mass_at_radius(&sc.metric, 0.5 * sc.metric.compact_radius(), &MassOptions::default()).is_err());
}

#[test]
fn compact_bump_has_zero_mass() {
    let spec = ScenarioSpec::new(ScenarioKind::RoughBump).cartesian(2.0, 0.05);
    let sc = make_scenario(&spec).unwrap();
    let opts = MassOptions { radii: Some(vec![1.0, 1.2, 1.4, 1.6]), force_fd: true, ..MassOptions::default() };
    for r in [1.0, 1.6] {
        assert!(mass_at_radius(&sc.metric, r, &opts).unwrap().abs() < 1e-12);
    }
}

#[test]
fn mollified_rough_bump_keeps_its_mass() {
    let spec = ScenarioSpec::new(ScenarioKind::RoughBump).cartesian(2.0, 0.05);
    let sc = make_scenario(&spec).unwrap();
    let sm = mollify(&sc.metric, &MollifierSpec { eps: 0.1, charts: sc.charts.clone() }).unwrap();
    let closed = MassOptions::default();
    assert_eq!(adm_mass(&sc.metric, &closed).unwrap().mass.to_bits(), adm_mass(&sm.metric, &closed).unwrap().mass.to_bits());
    let fd = MassOptions { radii: Some(vec![1.0, 1.2, 1.4, 1.6]), force_fd: true, ..MassOptions::default() };
    let (a, b) = (adm_mass(&sc.metric, &fd).unwrap(), adm_mass(&sm.metric, &fd).unwrap());
    assert_eq!(a.mass.to_bits(), b.mass.to_bits());
    assert_eq!(a.profile, b.profile);
}

#[test]
fn trivial_factor_shifts_nothing() {
    let sc = make_scenario(&ScenarioSpec::new(ScenarioKind::Schwarzschild)).unwrap();
    let u = ScalarField::constant(*sc.metric.disc(), 1.0);
    let shift = mass_shift_check(&sc.metric, &u, 0.0, &MassOptions::default()).unwrap();
    assert_eq!(shift.adm_hat, shift.adm_g);
    assert_eq!(shift.gap, 0.0);
}

#[test]
fn inverse_radius_factor_shifts_by_twice_its_coefficient() {
    let c = 0.2;
    let disc = Discretization::Radial(RadialMesh::regular(3, 60.0, 0.1).unwrap());
    let flat = MetricField::from_profile(disc, Arc::new(roughmass::geometry::ConstantProfile(1.0)), 1.0, 1.0).unwrap();
    let profile: SharedProfile = Arc::new(CappedInverse(c));
    let u = ScalarField::from_profile(disc, profile);
    let v = u.map(|x| x - 1.0);
    let a = extract_decay_coefficient(&v, 5.0, 40.0).unwrap();
    assert!((a - c).abs() < 1e-9, "{a}");
    for force_fd in [false, true] {
        let opts = MassOptions { force_fd, ..MassOptions::default() };
        let shift = mass_shift_check(&flat, &u, a, &opts).unwrap();
        assert!((shift.adm_hat - 2.0 * c).abs() < 0.02 * 2.0 * c, "{shift:?}");
        assert!(shift.relative_gap < 0.02, "{shift:?}");
    }
}
