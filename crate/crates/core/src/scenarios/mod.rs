//! Reference metrics with known ground truth.

mod blowup;
mod profiles;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bounds::sharp_sobolev_constant;
use crate::conformal::a_n;
use crate::error::{Error, Result};
use crate::geometry::{
    lp_norm, negative_part, CartesianGrid, ConstantProfile, Discretization, MetricData, MetricField, PowerProfile,
    RadialMesh, RadialProfile, Region, ScalarField, SharedProfile,
};
use crate::mollifier::Chart;

pub use blowup::{blowup_potential, blowup_solve, BlowupPoint};
pub use profiles::{
    smooth_step, LinearPotential, PolyPotential, RegularizedRadius, RoughBumpProfile, SchwarzschildFactor,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Euclidean,
    Schwarzschild,
    ConformalBump,
    RoughBump,
    RoughPotential,
    NegativePocket,
    BlowupDisc,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::Euclidean,
        ScenarioKind::Schwarzschild,
        ScenarioKind::ConformalBump,
        ScenarioKind::RoughBump,
        ScenarioKind::RoughPotential,
        ScenarioKind::NegativePocket,
        ScenarioKind::BlowupDisc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Euclidean => "euclidean",
            ScenarioKind::Schwarzschild => "schwarzschild",
            ScenarioKind::ConformalBump => "conformal_bump",
            ScenarioKind::RoughBump => "rough_bump",
            ScenarioKind::RoughPotential => "rough_potential",
            ScenarioKind::NegativePocket => "negative_pocket",
            ScenarioKind::BlowupDisc => "blowup_disc",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ScenarioKind::Euclidean => "flat metric; zero mass and curvature",
            ScenarioKind::Schwarzschild => "Schwarzschild exterior with a smooth cap inside r_K; mass m",
            ScenarioKind::ConformalBump => "u^{4/(n-2)} delta with superharmonic u = 1 + c phi; s >= 0, mass 2c",
            ScenarioKind::RoughBump => "(1 + c|x - x0|^gamma eta) delta; W^{2,p} for p < n/(2 - gamma), mass 0",
            ScenarioKind::RoughPotential => "u = 1 + c phi with density r^(gamma-2); rough, s >= 0, mass 2c",
            ScenarioKind::NegativePocket => "u = 1 - d phi with compact density; s <= 0 in a ball, mass -2d",
            ScenarioKind::BlowupDisc => "flat unit disc in R^2 for the concentrating-potential demo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscretizationKind {
    Cartesian,
    Radial,
}

/// Scenario parameters. Unset values fall back to per-kind defaults.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub discretization: Option<DiscretizationKind>,
    /// Half width of the cube, or outer radius of the radial mesh.
    #[serde(default)]
    pub extent: Option<f64>,
    #[serde(default)]
    pub spacing: Option<f64>,
    /// Schwarzschild mass.
    #[serde(default)]
    pub mass: Option<f64>,
    /// Bump amplitude c.
    #[serde(default)]
    pub amplitude: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Support radius of the bump, density or pocket.
    #[serde(default)]
    pub radius: Option<f64>,
    /// Center of the rough bump.
    #[serde(default)]
    pub center: Option<[f64; 3]>,
    /// Target ||s_-||_{n/2} for the negative pocket.
    #[serde(default)]
    pub target_s_neg: Option<f64>,
    /// Coefficient of a smooth positive background potential in the negative pocket.
    #[serde(default)]
    pub background: Option<f64>,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind) -> Self {
        Self {
            kind,
            n: None,
            discretization: None,
            extent: None,
            spacing: None,
            mass: None,
            amplitude: None,
            gamma: None,
            radius: None,
            center: None,
            target_s_neg: None,
            background: None,
        }
    }

    pub fn cartesian(mut self, extent: f64, spacing: f64) -> Self {
        self.discretization = Some(DiscretizationKind::Cartesian);
        self.extent = Some(extent);
        self.spacing = Some(spacing);
        self
    }

    pub fn radial(mut self, n: usize, extent: f64, spacing: f64) -> Self {
        self.n = Some(n);
        self.discretization = Some(DiscretizationKind::Radial);
        self.extent = Some(extent);
        self.spacing = Some(spacing);
        self
    }

    pub fn with_amplitude(mut self, c: f64) -> Self {
        self.amplitude = Some(c);
        self
    }

    pub fn with_mass(mut self, m: f64) -> Self {
        self.mass = Some(m);
        self
    }

    pub fn with_gamma(mut self, g: f64) -> Self {
        self.gamma = Some(g);
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn with_target_s_neg(mut self, t: f64) -> Self {
        self.target_s_neg = Some(t);
        self
    }

    pub fn with_center(mut self, c: [f64; 3]) -> Self {
        self.center = Some(c);
        self
    }
}

/// Sign of the scalar curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignClass {
    Zero,
    NonNegative,
    NonPositive,
    Indefinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundTruth {
    /// Exact ADM mass, when known.
    pub adm_mass: Option<f64>,
    pub s_sign: SignClass,
    /// s_- vanishes outside the ball of this radius about the origin.
    pub s_neg_support_radius: Option<f64>,
    pub smooth: bool,
    /// The metric is W^{2,p} for every p below this value (infinite when smooth).
    pub sobolev_p_limit: f64,
}

/// A reference metric, what is known about it, and charts covering its rough set.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub metric: MetricField,
    pub truth: GroundTruth,
    /// u with g = u^{4/(n-2)} delta, for conformally flat scenarios.
    pub conformal_factor: Option<SharedProfile>,
    /// -Laplace u, for the potential-based scenarios.
    pub source: Option<Arc<LinearPotential>>,
    pub charts: Vec<Chart>,
}

impl Scenario {
    /// Closed-form scalar curvature at every node, when available.
    pub fn exact_scalar(&self) -> Option<ScalarField> {
        let disc = *self.metric.disc();
        let n = disc.dim();
        match self.kind {
            ScenarioKind::Euclidean | ScenarioKind::BlowupDisc => Some(ScalarField::zeros(disc)),
            _ => {
                let src = self.source.as_ref()?;
                let e = (n as f64 + 2.0) / (n as f64 - 2.0);
                let an = a_n(n);
                let vals = (0..disc.len())
                    .map(|i| {
                        let r = disc.radius(i);
                        let f = src.source(r);
                        if f == 0.0 {
                            0.0
                        } else {
                            an * src.value(r).powf(-e) * f
                        }
                    })
                    .collect();
                ScalarField::new(disc, vals).ok()
            }
        }
    }
}

fn build_disc(spec: &ScenarioSpec, default_n: usize, default_kind: DiscretizationKind, extent: f64, h: f64) -> Result<Discretization> {
    let n = spec.n.unwrap_or(default_n);
    let kind = spec.discretization.unwrap_or(default_kind);
    let extent = spec.extent.unwrap_or(extent);
    let h = spec.spacing.unwrap_or(h);
    match kind {
        DiscretizationKind::Cartesian => {
            if n != 3 {
                return Err(Error::Config(format!("cartesian grids are three-dimensional, got n = {n}")));
            }
            Ok(Discretization::Cartesian(CartesianGrid::with_spacing(extent, h)?))
        }
        DiscretizationKind::Radial => {
            if n < 3 && spec.kind != ScenarioKind::BlowupDisc {
                return Err(Error::Config(format!("dimension {n} is only supported by blowup_disc")));
            }
            Ok(Discretization::Radial(RadialMesh::regular(n, extent, h)?))
        }
    }
}

fn truth(adm: Option<f64>, sign: SignClass, neg: Option<f64>, smooth: bool, p: f64) -> GroundTruth {
    GroundTruth { adm_mass: adm, s_sign: sign, s_neg_support_radius: neg, smooth, sobolev_p_limit: p }
}

fn conformal_metric(disc: Discretization, u: SharedProfile, rk: f64) -> Result<MetricField> {
    let n = disc.dim();
    let psi: SharedProfile = Arc::new(PowerProfile { base: u, exponent: 4.0 / (n as f64 - 2.0) });
    MetricField::from_profile(disc, psi, rk, n as f64 - 2.0)
}

/// Builds the metric and ground truth of a scenario.
pub fn make_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    use DiscretizationKind::*;
    match spec.kind {
        ScenarioKind::Euclidean => {
            let disc = build_disc(spec, 3, Cartesian, 4.0, 0.25)?;
            let rk = 1.0;
            let metric = MetricField::from_profile(disc, Arc::new(ConstantProfile(1.0)), rk, disc.dim() as f64 - 2.0)?;
            Ok(Scenario {
                kind: spec.kind,
                metric,
                truth: truth(Some(0.0), SignClass::Zero, None, true, f64::INFINITY),
                conformal_factor: Some(Arc::new(ConstantProfile(1.0))),
                source: None,
                charts: vec![Chart::centered(0.5, 0.8, 1.5)],
            })
        }
        ScenarioKind::Schwarzschild => {
            let disc = build_disc(spec, 3, Radial, 40.0, 0.25)?;
            let n = disc.dim();
            let m = spec.mass.unwrap_or(1.0);
            if !(m > 0.0) {
                return Err(Error::Config(format!("schwarzschild mass must be positive, got {m}")));
            }
            let r1 = spec.radius.unwrap_or(m.powf(1.0 / (n as f64 - 2.0)));
            if r1 <= (0.5 * m).powf(1.0 / (n as f64 - 2.0)) {
                return Err(Error::Config("cap radius must lie outside the horizon".into()));
            }
            let u: SharedProfile = Arc::new(SchwarzschildFactor { n, mass: m, radius: RegularizedRadius { r1 } });
            let metric = conformal_metric(disc, u.clone(), r1)?;
            Ok(Scenario {
                kind: spec.kind,
                metric,
                truth: truth(Some(m), SignClass::Indefinite, Some(r1), true, f64::INFINITY),
                conformal_factor: Some(u),
                source: None,
                charts: vec![Chart::centered(r1, 1.3 * r1, 1.9 * r1)],
            })
        }
        ScenarioKind::ConformalBump | ScenarioKind::RoughPotential => {
            let rough = spec.kind == ScenarioKind::RoughPotential;
            let disc = build_disc(spec, 3, Cartesian, 2.0, 0.05)?;
            let n = disc.dim();
            let c = spec.amplitude.unwrap_or(0.1);
            if !(c >= 0.0) {
                return Err(Error::Config(format!("amplitude must be non-negative, got {c}")));
            }
            let (beta, k, a, p_limit) = if rough {
                let gamma = spec.gamma.unwrap_or(0.75);
                if !(gamma > 0.0 && gamma < 2.0) {
                    return Err(Error::Config(format!("gamma must lie in (0, 2), got {gamma}")));
                }
                (gamma - 2.0, 3, spec.radius.unwrap_or(0.8), n as f64 / (2.0 - gamma))
            } else {
                (0.0, 4, spec.radius.unwrap_or(1.5), f64::INFINITY)
            };
            let phi = Arc::new(PolyPotential::new(n, beta, k, a));
            let src = Arc::new(LinearPotential { terms: vec![(c, phi)] });
            let charts = vec![Chart::centered(0.1, 1.4, 1.9)];
            let rk = charts[0].outer_radius;
            let metric = conformal_metric(disc, src.clone(), rk)?;
            Ok(Scenario {
                kind: spec.kind,
                metric,
                truth: truth(Some(2.0 * c), SignClass::NonNegative, None, !rough, p_limit),
                conformal_factor: Some(src.clone()),
                source: Some(src),
                charts,
            })
        }
        ScenarioKind::RoughBump => {
            let disc = build_disc(spec, 3, Cartesian, 1.0, 0.025)?;
            let n = disc.dim();
            let c = spec.amplitude.unwrap_or(0.1);
            let gamma = spec.gamma.unwrap_or(0.75);
            let radius = spec.radius.unwrap_or(0.4);
            let center = spec.center.unwrap_or([0.0; 3]);
            let p_limit = n as f64 / (2.0 - gamma);
            if !(gamma > 0.0 && gamma < 2.0) {
                return Err(Error::Config(format!("gamma must lie in (0, 2), got {gamma}")));
            }
            if p_limit <= n as f64 / 2.0 {
                return Err(Error::Config("rough_bump must be W^{2,p} for some p > n/2".into()));
            }
            if !(c > -1.0 / radius.powf(gamma)) {
                return Err(Error::Config("amplitude makes the metric degenerate".into()));
            }
            let bump = RoughBumpProfile { amplitude: c, gamma, radius };
            let rk = crate::geometry::norm(center) + radius;
            let data = match &disc {
                Discretization::Cartesian(g) => MetricData::Cartesian(
                    (0..disc.len())
                        .map(|i| {
                            let x = g.point(i);
                            let d = crate::geometry::norm([x[0] - center[0], x[1] - center[1], x[2] - center[2]]);
                            let p = bump.value(d);
                            [p, 0.0, 0.0, p, 0.0, p]
                        })
                        .collect(),
                ),
                Discretization::Radial(m) => {
                    if center != [0.0; 3] {
                        return Err(Error::Config("radial rough_bump must be centered".into()));
                    }
                    MetricData::Radial((0..m.nodes).map(|i| [bump.value(m.radius(i)); 2]).collect())
                }
            };
            let metric = MetricField::new(disc, data, Some(Arc::new(ConstantProfile(1.0))), rk, n as f64 - 2.0)?;
            Ok(Scenario {
                kind: spec.kind,
                metric,
                truth: truth(Some(0.0), SignClass::Indefinite, Some(rk), false, p_limit),
                conformal_factor: None,
                source: None,
                charts: vec![Chart { center, inner_radius: radius + 0.05, outer_radius: radius + 0.3, domain_radius: radius + 0.55 }],
            })
        }
        ScenarioKind::NegativePocket => negative_pocket(spec),
        ScenarioKind::BlowupDisc => {
            let disc = build_disc(spec, 2, Radial, 1.0, 1e-3)?;
            if disc.dim() != 2 || disc.radial().is_none() {
                return Err(Error::Config("blowup_disc is a radial two-dimensional demo".into()));
            }
            let data = MetricData::Radial(vec![[1.0, 1.0]; disc.len()]);
            let metric = MetricField::new(disc, data, Some(Arc::new(ConstantProfile(1.0))), 0.0, 0.5)?;
            Ok(Scenario {
                kind: spec.kind,
                metric,
                truth: truth(None, SignClass::Zero, None, true, f64::INFINITY),
                conformal_factor: Some(Arc::new(ConstantProfile(1.0))),
                source: None,
                charts: vec![],
            })
        }
    }
}

fn negative_pocket(spec: &ScenarioSpec) -> Result<Scenario> {
    let disc = build_disc(spec, 3, DiscretizationKind::Cartesian, 5.25, 0.125)?;
    let n = disc.dim();
    let rp = spec.radius.unwrap_or(1.0);
    let target = spec.target_s_neg.unwrap_or(2.0);
    let cm = spec.background.unwrap_or(0.0);
    if !(target > 0.0) {
        return Err(Error::Config(format!("target ||s_-|| must be positive, got {target}")));
    }
    if !(cm >= 0.0) {
        return Err(Error::Config(format!("background must be non-negative, got {cm}")));
    }
    let pocket = Arc::new(PolyPotential::smooth(n, 3, rp));
    let bg = Arc::new(PolyPotential::smooth(n, 4, 1.5 * rp));
    let build = |d: f64| {
        let mut terms = vec![(-d, pocket.clone())];
        if cm > 0.0 {
            terms.push((cm, bg.clone()));
        }
        Arc::new(LinearPotential { terms })
    };
    let flat = MetricField::euclidean(disc)?;
    let all = Region::whole(disc);
    let p = n as f64 / 2.0;
    let e = (n as f64 + 2.0) / (n as f64 - 2.0);
    let an = a_n(n);
    let s_neg_norm = |d: f64| -> Result<f64> {
        let src = build(d);
        let k = 4.0 / (n as f64 - 2.0);
        let data = match &disc {
            Discretization::Cartesian(_) => MetricData::Cartesian(
                (0..disc.len())
                    .map(|i| {
                        let v = src.value(disc.radius(i)).powf(k);
                        [v, 0.0, 0.0, v, 0.0, v]
                    })
                    .collect(),
            ),
            Discretization::Radial(_) => {
                MetricData::Radial((0..disc.len()).map(|i| [src.value(disc.radius(i)).powf(k); 2]).collect())
            }
        };
        let g = flat.with_data(data)?;
        let s = ScalarField::new(
            disc,
            (0..disc.len())
                .map(|i| {
                    let r = disc.radius(i);
                    let f = src.source(r);
                    if f == 0.0 {
                        0.0
                    } else {
                        an * src.value(r).powf(-e) * f
                    }
                })
                .collect(),
        )?;
        lp_norm(&negative_part(&s), p, &g, &all)
    };
    // keep u >= 1/2
    let d_max = 0.5 / pocket.at_origin();
    if s_neg_norm(d_max)? < target {
        return Err(Error::Config(format!("target ||s_-|| = {target} is out of reach for this pocket")));
    }
    let (mut lo, mut hi) = (0.0, d_max);
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if s_neg_norm(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d = 0.5 * (lo + hi);
    let src = build(d);
    let (u_min, u_max) = (0..disc.len())
        .map(|i| src.value(disc.radius(i)))
        .fold((1.0f64, 1.0f64), |(a, b), v| (a.min(v), b.max(v)));
    let rho = (u_max / u_min).powf(4.0 / (n as f64 - 2.0));
    let c1_upper = rho.powi(n as i32) * sharp_sobolev_constant(n);
    let s_norm = s_neg_norm(d)?;
    if !(c1_upper * s_norm < an) {
        return Err(Error::GateViolated(format!(
            "c1 ||s_-|| <= {:.4} is not below a_n = {an:.4}",
            c1_upper * s_norm
        )));
    }
    let metric = conformal_metric(disc, src.clone(), rp)?;
    let mass = 2.0 * src.decay_coefficient();
    Ok(Scenario {
        kind: spec.kind,
        metric,
        truth: truth(
            Some(mass),
            if cm > 0.0 { SignClass::Indefinite } else { SignClass::NonPositive },
            Some(rp),
            true,
            f64::INFINITY,
        ),
        conformal_factor: Some(src.clone()),
        source: Some(src),
        charts: vec![Chart::centered(rp, 1.3 * rp, 1.8 * rp)],
    })
}
