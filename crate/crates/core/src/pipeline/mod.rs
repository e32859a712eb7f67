//! Config-driven runs of the full chain: mollify, solve, rescale, measure
//! masses and check every bound.

mod config;
mod report;

use serde::Serialize;

pub use config::{BoundsConfig, EllipticConfig, MassConfig, MollifyConfig, OutputConfig, PipelineConfig};
pub use report::{emit_report, summary, RUN_HEADER};

use crate::adm::adm_mass;
use crate::bounds::{clean_negative_part, sobolev_constant, BoundsReport, Measured, NegativeData, SlackStatus, SobolevEstimate};
use crate::conformal::{a_n, conformal_rescale, conformal_scalar_with, n_star};
use crate::elliptic::{discrete_energy, energy_identity, solve_dirichlet, SolveOptions};
use crate::error::{Error, Result};
use crate::geometry::{
    lp_norm, scalar_curvature, sobolev_distance, sup_distance, CurvatureOptions, Discretization, MetricField, Region,
    ScalarField,
};
use crate::mollifier::{equivalence_factor, mollify, Chart, MollifierSpec};
use crate::scenarios::{make_scenario, Scenario, SignClass};

/// Everything measured on one smoothing scale.
#[derive(Clone, Debug, Serialize)]
pub struct BranchData {
    pub hausdorff: f64,
    pub sup_dist: f64,
    pub w2_dist: f64,
    pub s_diff: f64,
    pub rho: f64,
    pub s_neg: f64,
    pub c1: SobolevEstimate,
    pub iterations: usize,
    pub residual: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub v_nstar: f64,
    pub grad_sq: f64,
    pub energy: (f64, f64),
    pub a_int: f64,
    pub a_fit: Option<f64>,
    pub adm_g_eps: f64,
    pub adm_hat: f64,
    pub shift_gap: f64,
    pub s_hat_min: f64,
    pub curvature_tol: f64,
    pub bounds: BoundsReport,
    /// (r, m_g(r), m_hat(r)) flux masses.
    pub mass_profile: Vec<(f64, f64, f64)>,
    /// (r, s, s_hat, v) along the positive x axis.
    pub line: Vec<[f64; 4]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    /// None when the metric is used as given.
    pub eps: Option<f64>,
    pub outcome: std::result::Result<BranchData, String>,
    pub numerical_failure: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineResult {
    pub scenario: String,
    pub truth_mass: Option<f64>,
    pub adm_g: Option<f64>,
    pub branches: Vec<Branch>,
    pub verdicts: Vec<Verdict>,
}

impl PipelineResult {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// 0 pass, 1 failed check, 3 numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        if self.branches.iter().any(|b| b.numerical_failure) {
            3
        } else if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Builds the scenario and checks the scales against the grid and charts.
pub fn check_config(cfg: &PipelineConfig) -> Result<Scenario> {
    cfg.validate_static()?;
    let sc = make_scenario(&cfg.scenario).map_err(|e| match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    })?;
    if !cfg.mollify.eps.is_empty() {
        let grid = sc
            .metric
            .disc()
            .cartesian()
            .ok_or_else(|| Error::Config("mollification needs a cartesian discretization".into()))?;
        let h = grid.spacing();
        let charts = charts(cfg, &sc);
        if charts.is_empty() {
            return Err(Error::Config("mollification needs at least one chart".into()));
        }
        for &e in &cfg.mollify.eps {
            if e < 2.0 * h {
                return Err(Error::Config(format!("eps = {e} is under-resolved, need eps >= 2h = {}", 2.0 * h)));
            }
            for c in &charts {
                if e >= c.eps0() {
                    return Err(Error::Config(format!("eps = {e} must stay below eps0 = {}", c.eps0())));
                }
            }
        }
    }
    if let Some(r) = cfg.elliptic.omega_radius {
        if !(r > 0.0) {
            return Err(Error::Config("elliptic.omega_radius must be positive".into()));
        }
    }
    Ok(sc)
}

fn charts(cfg: &PipelineConfig, sc: &Scenario) -> Vec<Chart> {
    cfg.mollify.charts.clone().unwrap_or_else(|| sc.charts.clone())
}

fn curvature_options(cfg: &PipelineConfig) -> CurvatureOptions {
    CurvatureOptions { order: cfg.mollify.order, use_exterior: true }
}

struct Base<'a> {
    cfg: &'a PipelineConfig,
    g: &'a MetricField,
    s: ScalarField,
    charts: Vec<Chart>,
}

fn axis_line(disc: &Discretization) -> Vec<usize> {
    match disc {
        Discretization::Cartesian(grid) => {
            let mid = grid.nodes / 2;
            (mid..grid.nodes).map(|i| grid.index(i, mid, mid)).collect()
        }
        Discretization::Radial(m) => (0..m.nodes).collect(),
    }
}

fn run_branch(base: &Base, eps: Option<f64>) -> Result<BranchData> {
    let cfg = base.cfg;
    let g = base.g;
    let copts = curvature_options(cfg);
    let (gm, region, hausdorff) = match eps {
        Some(e) => {
            let sm = mollify(g, &MollifierSpec { eps: e, charts: base.charts.clone() })?;
            (sm.metric, sm.region, sm.hausdorff)
        }
        None => (g.clone(), Region::whole(*g.disc()), 0.0),
    };
    let disc = *gm.disc();
    let n = disc.dim();
    let whole = Region::whole(disc);
    let s = match eps {
        Some(_) => scalar_curvature(&gm, &copts)?.field,
        None => base.s.clone(),
    };
    let crit = n as f64 / 2.0;
    let (sup_dist, w2_dist, s_diff, rho) = match eps {
        Some(_) => {
            let diff = s.zip_map(&base.s, |a, b| a - b)?;
            (
                sup_distance(&gm, g)?,
                sobolev_distance(&gm, g, &whole)?,
                lp_norm(&diff, crit, g, &region)?,
                equivalence_factor(g, &gm)?,
            )
        }
        None => (0.0, 0.0, 0.0, 1.0),
    };

    let neg = clean_negative_part(&s, cfg.bounds.support_threshold);
    let f = neg.map(|v| v / a_n(n));
    let omega = match cfg.elliptic.omega_radius {
        Some(r) => Region::ball(disc, r),
        None => whole.clone(),
    };
    let c1 = sobolev_constant(&gm, &omega, &cfg.bounds.sobolev())?;
    let data = NegativeData::from_negative_part(&gm, &neg, &omega, cfg.bounds.p)?;
    let sopts = SolveOptions {
        tol: cfg.elliptic.tol,
        max_iter: cfg.elliptic.max_iter,
        decay_annulus: cfg.elliptic.decay_annulus,
        alpha: Some(crate::bounds::alpha(n, c1.c1, data.s_neg_omega)),
    };
    let rep = solve_dirichlet(&gm, &f, &omega, &sopts)?;

    let s_hat = conformal_scalar_with(&gm, &rep.u, &s)?;
    let check = rep.unknowns.interior();
    let s_hat_min = check.nodes().map(|i| s_hat.values()[i]).fold(f64::INFINITY, f64::min);
    let curvature_tol = cfg.elliptic.curvature_tol * s.max_abs().max(1.0);

    let mut mopts = cfg.mass.options();
    let hat = conformal_rescale(&gm, &rep.u)?;
    if hat.exterior().is_none() {
        mopts.force_fd = true;
    }
    let mg = adm_mass(&gm, &mopts)?;
    let mh = adm_mass(&hat, &mopts)?;
    let shift_gap = (mh.mass - mg.mass - 2.0 * rep.a_int).abs();
    let mass_profile = mg.profile.iter().zip(&mh.profile).map(|(a, b)| (a.0, a.1, b.1)).collect();

    let vals = rep.v.values();
    let v_min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let v_max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let v_nstar = lp_norm(&rep.v, n_star(n), &gm, &whole)?;
    let grad_sq = discrete_energy(&gm, &rep.v)?;
    let energy = energy_identity(&gm, &rep.v, &f)?;
    let measured =
        Measured { v_nstar: Some(v_nstar), grad_sq: Some(grad_sq), v_min: Some(v_min), v_max: Some(v_max), adm_mass: Some(mg.mass) };
    let bounds = BoundsReport::evaluate(c1.c1, SobolevEstimate::METHOD, &data, &measured);
    if bounds.worst_status() == SlackStatus::Fail {
        log::warn!("negative bound slack:\n{}", bounds.to_key_value());
    }
    let line = axis_line(&disc)
        .into_iter()
        .map(|i| [disc.radius(i), s.values()[i], s_hat.values()[i], vals[i]])
        .collect();
    Ok(BranchData {
        hausdorff,
        sup_dist,
        w2_dist,
        s_diff,
        rho,
        s_neg: data.s_neg_total,
        c1,
        iterations: rep.iterations,
        residual: rep.residual,
        v_min,
        v_max,
        v_nstar,
        grad_sq,
        energy,
        a_int: rep.a_int,
        a_fit: rep.a_fit,
        adm_g_eps: mg.mass,
        adm_hat: mh.mass,
        shift_gap,
        s_hat_min,
        curvature_tol,
        bounds,
        mass_profile,
        line,
    })
}

/// Runs every branch; branch failures are recorded, not propagated.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineResult> {
    let sc = check_config(cfg)?;
    let s = scalar_curvature(&sc.metric, &curvature_options(cfg))?.field;
    let adm_g = adm_mass(&sc.metric, &cfg.mass.options()).ok().map(|r| r.mass);
    let base = Base { cfg, g: &sc.metric, s, charts: charts(cfg, &sc) };
    let scales: Vec<Option<f64>> =
        if cfg.mollify.eps.is_empty() { vec![None] } else { cfg.mollify.eps.iter().map(|&e| Some(e)).collect() };
    let branches: Vec<Branch> = scales
        .into_iter()
        .map(|eps| match run_branch(&base, eps) {
            Ok(d) => Branch { eps, outcome: Ok(d), numerical_failure: false },
            Err(e) => {
                log::warn!("branch eps = {eps:?} failed: {e}");
                Branch { eps, outcome: Err(e.to_string()), numerical_failure: e.is_numerical() }
            }
        })
        .collect();
    let mut result = PipelineResult {
        scenario: sc.kind.name().to_string(),
        truth_mass: sc.truth.adm_mass,
        adm_g,
        branches,
        verdicts: Vec::new(),
    };
    result.verdicts = verdicts(cfg, &sc, &result);
    Ok(result)
}

fn verdicts(cfg: &PipelineConfig, sc: &Scenario, r: &PipelineResult) -> Vec<Verdict> {
    let mut out = Vec::new();
    let ok: Vec<(&Branch, &BranchData)> = r.branches.iter().filter_map(|b| b.outcome.as_ref().ok().map(|d| (b, d))).collect();
    let failed = r.branches.len() - ok.len();
    out.push(Verdict {
        name: "branches".into(),
        pass: failed == 0 && !r.branches.is_empty(),
        detail: format!("{} of {} branches completed", ok.len(), r.branches.len()),
    });
    let worst = ok.iter().map(|(_, d)| d.s_hat_min + d.curvature_tol).fold(f64::INFINITY, f64::min);
    out.push(Verdict {
        name: "nonnegative_curvature".into(),
        pass: ok.iter().all(|(_, d)| d.s_hat_min >= -d.curvature_tol),
        detail: format!("min s_hat over interior nodes exceeds -tol by {worst:.3e}"),
    });
    if cfg.bounds.check {
        let bad: Vec<String> = ok
            .iter()
            .flat_map(|(_, d)| d.bounds.slacks.iter())
            .filter(|s| s.name != "adm_mass_lower" && s.status == SlackStatus::Fail)
            .map(|s| s.name.clone())
            .collect();
        let margin = ok.iter().map(|(_, d)| 1.0 - d.bounds.smallness.alpha).fold(f64::INFINITY, f64::min);
        out.push(Verdict {
            name: "bound_suite".into(),
            pass: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("all elliptic and Moser bounds hold; alpha gate margin {margin:.4}")
            } else {
                format!("violated: {}", bad.join(" "))
            },
        });
    }
    if cfg.bounds.check_mass_lower {
        let worst = ok
            .iter()
            .flat_map(|(_, d)| d.bounds.slacks.iter())
            .filter(|s| s.name == "adm_mass_lower")
            .map(|s| s.slack)
            .fold(f64::INFINITY, f64::min);
        out.push(Verdict {
            name: "mass_lower_bound".into(),
            pass: !(worst < 0.0),
            detail: format!("ADM(g) minus the lower bound: {worst:.6e}"),
        });
    }
    if cfg.mass.check_truth {
        if let (Some(t), Some(m)) = (r.truth_mass, r.adm_g) {
            let err = (m - t).abs();
            let tol = cfg.mass.truth_tolerance * t.abs() + 1e-8;
            out.push(Verdict {
                name: "adm_truth".into(),
                pass: err <= tol,
                detail: format!("ADM(g) = {m:.8} against exact {t:.8}"),
            });
        }
    }
    let floor = cfg.mass.nonnegative_tolerance;
    let min_hat = ok.iter().map(|(_, d)| d.adm_hat).fold(f64::INFINITY, f64::min);
    out.push(Verdict {
        name: "corrected_mass_nonnegative".into(),
        pass: ok.iter().all(|(_, d)| d.adm_hat >= -floor),
        detail: format!("min ADM(g_hat) = {min_hat:.6e}"),
    });
    let nonneg = matches!(sc.truth.s_sign, SignClass::Zero | SignClass::NonNegative);
    if nonneg {
        let spreads: Vec<f64> = ok.iter().map(|(_, d)| (d.adm_hat - d.adm_g_eps).abs()).collect();
        let scale = r.adm_g.map_or(0.0, f64::abs).max(1e-12);
        let gap = spreads.iter().fold(0.0f64, |m, v| m.max(*v)) / scale;
        let shrinking = spreads.windows(2).all(|w| w[1] <= 1.1 * w[0] + 1e-10);
        out.push(Verdict {
            name: "mass_convergence".into(),
            pass: shrinking,
            detail: format!("ADM(g_hat_eps) -> ADM(g): max gap {:.3}%", 100.0 * gap),
        });
    }
    out
}
