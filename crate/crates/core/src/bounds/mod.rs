//! Sobolev-constant estimation and the explicit inequalities: smallness
//! gates, elliptic bounds, the mass lower bound and the Moser sup bounds.

mod sobolev;

use std::fmt::Write as _;

use serde::Serialize;

pub use sobolev::{sharp_sobolev_constant, sobolev_constant, SobolevEstimate, SobolevOptions, TrialFamily};

use crate::conformal::{a_n, n_star, structural_constants};
use crate::error::{Error, Result};
use crate::geometry::{lp_norm, negative_part, riemannian_volume, sphere_area, MetricField, Region, ScalarField};

/// alpha = c1 ||s_-||_{n/2} / a_n.
pub fn alpha(n: usize, c1: f64, s_neg_norm: f64) -> f64 {
    c1 * s_neg_norm / a_n(n)
}

/// A_p = c1 ||f||_p vol^{2/n - 1/p}.
pub fn a_p(n: usize, p: f64, c1: f64, f_norm: f64, vol: f64) -> f64 {
    if f_norm == 0.0 {
        return 0.0;
    }
    c1 * f_norm * vol.powf(2.0 / n as f64 - 1.0 / p)
}

/// Norms of the negative part of s needed by every bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NegativeData {
    pub n: usize,
    pub p: f64,
    /// ||s_-||_{n/2} over Omega.
    pub s_neg_omega: f64,
    /// mu(Omega ∩ supp s_-).
    pub mu_omega: f64,
    /// ||s_-||_{n/2} over the whole grid.
    pub s_neg_total: f64,
    /// mu(supp s_-) over the whole grid.
    pub mu_total: f64,
    /// ||f||_p over Omega, f = s_- / a_n.
    pub f_p: f64,
}

/// Negative part of s with values below `rel * max s_-` set to zero.
pub fn clean_negative_part(s: &ScalarField, rel: f64) -> ScalarField {
    let neg = negative_part(s);
    let cut = rel * neg.max_abs();
    neg.map(|v| if v > cut { v } else { 0.0 })
}

impl NegativeData {
    pub fn new(g: &MetricField, s: &ScalarField, omega: &Region, p: f64) -> Result<Self> {
        Self::from_negative_part(g, &negative_part(s), omega, p)
    }

    pub fn from_negative_part(g: &MetricField, neg: &ScalarField, omega: &Region, p: f64) -> Result<Self> {
        let n = g.dim();
        let neg = neg.clone();
        let supp = Region::support(&neg);
        let supp_omega = supp.intersect(omega)?;
        let whole = Region::whole(*g.disc());
        let crit = n as f64 / 2.0;
        let s_neg_omega = lp_norm(&neg, crit, g, omega)?;
        let f_p = if p.is_finite() { lp_norm(&neg, p, g, omega)? / a_n(n) } else { f64::NAN };
        Ok(Self {
            n,
            p,
            s_neg_omega,
            mu_omega: riemannian_volume(&supp_omega, g)?,
            s_neg_total: lp_norm(&neg, crit, g, &whole)?,
            mu_total: riemannian_volume(&supp, g)?,
            f_p,
        })
    }

    /// ||f||_{n/2} over Omega.
    pub fn f_critical(&self) -> f64 {
        self.s_neg_omega / a_n(self.n)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Smallness {
    pub alpha: f64,
    pub a_p: f64,
    pub alpha_ok: bool,
    pub a_p_ok: bool,
}

/// alpha on Omega and A_p for the configured p, with their gates.
pub fn smallness_alpha(c1: f64, data: &NegativeData) -> Smallness {
    let al = alpha(data.n, c1, data.s_neg_omega);
    let ap = if data.p > data.n as f64 / 2.0 && data.f_p.is_finite() {
        a_p(data.n, data.p, c1, data.f_p, data.mu_omega)
    } else {
        f64::INFINITY
    };
    Smallness { alpha: al, a_p: ap, alpha_ok: al < 1.0, a_p_ok: ap < 1.0 }
}

fn v_rhs(n: usize, al: f64, mu: f64) -> f64 {
    if al == 0.0 {
        return 0.0;
    }
    al / (1.0 - al) * mu.powf(1.0 / n_star(n))
}

fn dw_rhs(n: usize, al: f64, s_neg: f64, mu: f64) -> f64 {
    if al == 0.0 {
        return 0.0;
    }
    al / (1.0 - al).powi(2) * s_neg / a_n(n) * mu.powf(2.0 / n_star(n))
}

/// Right-hand sides of the elliptic bounds on ||v||_{n*} and ||grad v||_2^2.
#[derive(Clone, Debug, Serialize)]
pub struct EllipticRhs {
    /// Local bounds, norms over Omega.
    pub v_local: f64,
    pub dw_local: f64,
    /// Global bounds, norms over the whole manifold.
    pub v_global: f64,
    pub dw_global: f64,
    /// Remark form c1||s|| / (a_n - c1||s||), norms over Omega.
    pub v_remark: f64,
    pub dw_remark: f64,
    pub violated: Option<String>,
}

pub fn elliptic_bounds_rhs(c1: f64, data: &NegativeData) -> EllipticRhs {
    let n = data.n;
    let an = a_n(n);
    let al = alpha(n, c1, data.s_neg_omega);
    let ag = alpha(n, c1, data.s_neg_total);
    let mut out = EllipticRhs {
        v_local: v_rhs(n, al, data.mu_omega),
        dw_local: dw_rhs(n, al, data.s_neg_omega, data.mu_omega),
        v_global: v_rhs(n, ag, data.mu_total),
        dw_global: dw_rhs(n, ag, data.s_neg_total, data.mu_total),
        v_remark: 0.0,
        dw_remark: 0.0,
        violated: None,
    };
    let cs = c1 * data.s_neg_omega;
    if cs > 0.0 {
        out.v_remark = cs / (an - cs) * data.mu_omega.powf(1.0 / n_star(n));
        out.dw_remark = c1 * data.s_neg_omega.powi(2) / (an - cs).powi(2) * data.mu_omega.powf(2.0 / n_star(n));
    }
    if al >= 1.0 {
        out.v_local = f64::INFINITY;
        out.dw_local = f64::INFINITY;
        out.v_remark = f64::INFINITY;
        out.dw_remark = f64::INFINITY;
        out.violated = Some(format!("alpha = {al:.6} >= 1 on Omega"));
    }
    if ag >= 1.0 {
        out.v_global = f64::INFINITY;
        out.dw_global = f64::INFINITY;
        out.violated.get_or_insert(format!("alpha = {ag:.6} >= 1 on M"));
    }
    out
}

/// -(1/(2(n-1) omega_{n-1})) ||s_-|| / (1 - alpha)^2 mu(supp s_-)^{2/n*}.
pub fn mass_lower_bound_value(n: usize, c1: f64, s_neg_norm: f64, mu: f64) -> Result<f64> {
    if s_neg_norm == 0.0 {
        return Ok(0.0);
    }
    let al = alpha(n, c1, s_neg_norm);
    if al >= 1.0 {
        return Err(Error::GateViolated(format!("c1 ||s_-||_{{n/2}} < a_n fails: alpha = {al:.6}")));
    }
    let nf = n as f64;
    Ok(-s_neg_norm / (1.0 - al).powi(2) * mu.powf(2.0 / n_star(n)) / (2.0 * (nf - 1.0) * sphere_area(n)))
}

pub fn mass_lower_bound(c1: f64, data: &NegativeData) -> Result<f64> {
    mass_lower_bound_value(data.n, c1, data.s_neg_total, data.mu_total)
}

/// Moser sup bounds (-lower, upper) bracketing v.
pub fn moser_bounds(n: usize, p: f64, c1: f64, f_norm: f64, vol: f64) -> Result<(f64, f64)> {
    if !(p > n as f64 / 2.0) {
        return Err(Error::GateViolated(format!("p = {p} must exceed n/2 = {}", n as f64 / 2.0)));
    }
    let sc = structural_constants(n, p)?;
    let ap = a_p(n, p, c1, f_norm, vol);
    if !(ap < 1.0) {
        return Err(Error::GateViolated(format!("A_p = {ap:.6} must be < 1")));
    }
    if ap == 0.0 {
        return Ok((0.0, 0.0));
    }
    let ct = sc.chi_pow_tau();
    Ok((-ct * ap.powf(sc.sigma / 2.0 + 1.0) / (1.0 - ap), ct * ap / (1.0 - ap)))
}

const GATE_LIST_CAP: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct Breakdown {
    pub beta_max: u64,
    pub p_max: f64,
    /// c1 beta^2 ||f||_{n/2} for beta = 1..beta_max, truncated at 4096 entries.
    pub gates: Vec<f64>,
}

/// Largest admissible Moser exponent when only ||f||_{n/2} is controlled.
pub fn moser_breakdown(n: usize, c1: f64, f_norm_critical: f64) -> Result<Breakdown> {
    let x = c1 * f_norm_critical;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("c1 ||f||_{{n/2}} must be positive and finite, got {x}")));
    }
    let beta_max = ((1.0 / x.sqrt()) * (1.0 + 1e-12)).floor();
    let beta_max = if beta_max > u64::MAX as f64 { u64::MAX } else { beta_max as u64 };
    let gates = (1..=beta_max.min(GATE_LIST_CAP as u64)).map(|b| x * (b * b) as f64).collect();
    Ok(Breakdown { beta_max, p_max: beta_max as f64 * n_star(n), gates })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlackStatus {
    Ok,
    Warn,
    Fail,
    Skipped,
}

impl SlackStatus {
    pub fn label(self) -> &'static str {
        match self {
            SlackStatus::Ok => "ok",
            SlackStatus::Warn => "warn",
            SlackStatus::Fail => "fail",
            SlackStatus::Skipped => "skipped",
        }
    }
}

/// Relative tolerance below which a negative slack is a warning only.
pub const SLACK_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct Slack {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub slack: f64,
    pub status: SlackStatus,
}

impl Slack {
    fn classify(name: &str, measured: f64, bound: f64, slack: f64) -> Self {
        let status = if !measured.is_finite() || bound.is_nan() {
            SlackStatus::Skipped
        } else if slack >= 0.0 {
            SlackStatus::Ok
        } else if slack >= -SLACK_TOLERANCE * bound.abs().max(measured.abs()) {
            SlackStatus::Warn
        } else {
            SlackStatus::Fail
        };
        Self { name: name.to_string(), measured, bound, slack, status }
    }

    /// measured <= bound
    pub fn upper(name: &str, measured: f64, bound: f64) -> Self {
        Self::classify(name, measured, bound, bound - measured)
    }

    /// measured >= bound
    pub fn lower(name: &str, measured: f64, bound: f64) -> Self {
        Self::classify(name, measured, bound, measured - bound)
    }
}

/// Quantities measured from a solve, checked against the bounds.
#[derive(Clone, Copy, Debug, Default)]
pub struct Measured {
    pub v_nstar: Option<f64>,
    pub grad_sq: Option<f64>,
    pub v_min: Option<f64>,
    pub v_max: Option<f64>,
    pub adm_mass: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub p: f64,
    pub c1: f64,
    pub c1_method: String,
    pub data: NegativeData,
    pub smallness: Smallness,
    pub elliptic: EllipticRhs,
    pub mass_lower: f64,
    pub moser_lower: f64,
    pub moser_upper: f64,
    pub beta_max: u64,
    pub p_max: f64,
    pub slacks: Vec<Slack>,
}

impl BoundsReport {
    pub fn evaluate(c1: f64, c1_method: &str, data: &NegativeData, measured: &Measured) -> Self {
        let n = data.n;
        let smallness = smallness_alpha(c1, data);
        let elliptic = elliptic_bounds_rhs(c1, data);
        let mass_lower = mass_lower_bound(c1, data).unwrap_or(f64::NEG_INFINITY);
        let (moser_lower, moser_upper) =
            moser_bounds(n, data.p, c1, data.f_p, data.mu_omega).unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        let (beta_max, p_max) = match moser_breakdown(n, c1, data.f_critical()) {
            Ok(b) => (b.beta_max, b.p_max),
            Err(_) => (u64::MAX, f64::INFINITY),
        };
        let m = |x: Option<f64>| x.unwrap_or(f64::NAN);
        let slacks = vec![
            Slack::upper("v_nstar_local", m(measured.v_nstar), elliptic.v_local),
            Slack::upper("grad_sq_local", m(measured.grad_sq), elliptic.dw_local),
            Slack::upper("v_nstar_global", m(measured.v_nstar), elliptic.v_global),
            Slack::upper("grad_sq_global", m(measured.grad_sq), elliptic.dw_global),
            Slack::lower("v_min_moser", m(measured.v_min), moser_lower),
            Slack::upper("v_max_moser", m(measured.v_max), moser_upper),
            Slack::lower("adm_mass_lower", m(measured.adm_mass), mass_lower),
        ];
        Self {
            n,
            p: data.p,
            c1,
            c1_method: c1_method.to_string(),
            data: *data,
            smallness,
            elliptic,
            mass_lower,
            moser_lower,
            moser_upper,
            beta_max,
            p_max,
            slacks,
        }
    }

    pub fn worst_status(&self) -> SlackStatus {
        let rank = |s: SlackStatus| match s {
            SlackStatus::Fail => 3,
            SlackStatus::Warn => 2,
            SlackStatus::Ok => 1,
            SlackStatus::Skipped => 0,
        };
        self.slacks.iter().map(|s| s.status).max_by_key(|&s| rank(s)).unwrap_or(SlackStatus::Skipped)
    }

    pub fn scalars(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("n", self.n as f64),
            ("p", self.p),
            ("c1", self.c1),
            ("alpha", self.smallness.alpha),
            ("a_p", self.smallness.a_p),
            ("s_neg_omega", self.data.s_neg_omega),
            ("mu_omega", self.data.mu_omega),
            ("s_neg_total", self.data.s_neg_total),
            ("mu_total", self.data.mu_total),
            ("f_p", self.data.f_p),
            ("v_bound_local", self.elliptic.v_local),
            ("grad_bound_local", self.elliptic.dw_local),
            ("v_bound_global", self.elliptic.v_global),
            ("grad_bound_global", self.elliptic.dw_global),
            ("v_bound_remark", self.elliptic.v_remark),
            ("grad_bound_remark", self.elliptic.dw_remark),
            ("mass_lower_bound", self.mass_lower),
            ("moser_lower", self.moser_lower),
            ("moser_upper", self.moser_upper),
            ("beta_max", self.beta_max as f64),
            ("p_max", self.p_max),
        ]
    }

    /// Flat `key = value` block.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "c1_method = {}", self.c1_method);
        for (k, v) in self.scalars() {
            let _ = writeln!(s, "{k} = {v:.16e}");
        }
        let _ = writeln!(s, "alpha_gate = {}", self.smallness.alpha_ok);
        let _ = writeln!(s, "a_p_gate = {}", self.smallness.a_p_ok);
        if let Some(v) = &self.elliptic.violated {
            let _ = writeln!(s, "violated = {v}");
        }
        for sl in &self.slacks {
            let _ = writeln!(s, "slack.{} = {:.16e} ({})", sl.name, sl.slack, sl.status.label());
        }
        s
    }

    pub const CSV_HEADER: &'static str = "inequality,measured,bound,slack,status";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for sl in &self.slacks {
            let _ = writeln!(s, "{},{:.16e},{:.16e},{:.16e},{}", sl.name, sl.measured, sl.bound, sl.slack, sl.status.label());
        }
        s
    }
}
