//! Structural constants, conformal rescaling and the conformal transformation
//! law for scalar curvature.

use std::sync::Arc;

use serde::Serialize;

use crate::elliptic::laplace_beltrami;
use crate::error::{Error, Result};
use crate::geometry::{
    scalar_curvature, CurvatureOptions, MetricData, MetricField, PowerProfile, ProductProfile, ScalarField,
};

/// Where p sits relative to n/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Supercritical,
    Critical,
    Subcritical,
}

/// Exponents of the conformal Laplacian and the Moser iteration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StructuralConstants {
    pub n: usize,
    pub p: f64,
    /// 4(n-1)/(n-2)
    pub a_n: f64,
    /// 2n/(n-2)
    pub n_star: f64,
    /// 4p/(2p-2)
    pub two_p_star: f64,
    /// n* / (2p)*; only meaningful when p > n/2.
    pub chi: f64,
    pub sigma: f64,
    pub tau: f64,
    pub regime: Regime,
}

impl StructuralConstants {
    /// chi, sigma and tau are defined.
    pub fn is_supercritical(&self) -> bool {
        self.regime == Regime::Supercritical
    }

    /// chi^tau, the constant in the Moser bounds.
    pub fn chi_pow_tau(&self) -> f64 {
        self.chi.powf(self.tau)
    }
}

pub fn a_n(n: usize) -> f64 {
    4.0 * (n as f64 - 1.0) / (n as f64 - 2.0)
}

pub fn n_star(n: usize) -> f64 {
    2.0 * n as f64 / (n as f64 - 2.0)
}

pub fn structural_constants(n: usize, p: f64) -> Result<StructuralConstants> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dimension must be at least 3, got {n}")));
    }
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!("exponent p must be in (1, inf), got {p}")));
    }
    let nf = n as f64;
    let ns = n_star(n);
    let tps = 4.0 * p / (2.0 * p - 2.0);
    let chi = ns / tps;
    let regime = if p > nf / 2.0 {
        Regime::Supercritical
    } else if p == nf / 2.0 {
        Regime::Critical
    } else {
        Regime::Subcritical
    };
    let (sigma, tau) = if regime == Regime::Supercritical {
        (1.0 / (chi - 1.0), chi / (chi - 1.0).powi(2))
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    Ok(StructuralConstants { n, p, a_n: a_n(n), n_star: ns, two_p_star: tps, chi, sigma, tau, regime })
}

fn check_positive(u: &ScalarField) -> Result<()> {
    for (node, &v) in u.values().iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::NonPositiveFactor { node, value: v });
        }
    }
    Ok(())
}

/// The metric u^{4/(n-2)} g.
///
/// The closed-form exterior is kept only when both `g` and `u` carry one.
pub fn conformal_rescale(g: &MetricField, u: &ScalarField) -> Result<MetricField> {
    g.disc().ensure_same(u.disc())?;
    check_positive(u)?;
    let n = g.dim() as f64;
    let k = 4.0 / (n - 2.0);
    let factor: Vec<f64> = u.values().iter().map(|v| v.powf(k)).collect();
    let data = match g.data() {
        MetricData::Cartesian(v) => {
            MetricData::Cartesian(v.iter().zip(&factor).map(|(s, f)| s.map(|c| c * f)).collect())
        }
        MetricData::Radial(v) => MetricData::Radial(v.iter().zip(&factor).map(|(s, f)| s.map(|c| c * f)).collect()),
    };
    let exterior = match (g.exterior(), u.profile()) {
        (Some(pg), Some(pu)) => Some(Arc::new(ProductProfile(
            pg.clone(),
            Arc::new(PowerProfile { base: pu.clone(), exponent: k }),
        )) as _),
        _ => None,
    };
    MetricField::new(*g.disc(), data, exterior, g.compact_radius(), g.decay_exponent())
}

/// Scalar curvature of u^{4/(n-2)} g from the transformation law, with s_g supplied.
pub fn conformal_scalar_with(g: &MetricField, u: &ScalarField, s_g: &ScalarField) -> Result<ScalarField> {
    g.disc().ensure_same(u.disc())?;
    g.disc().ensure_same(s_g.disc())?;
    check_positive(u)?;
    let n = g.dim();
    let an = a_n(n);
    let e = (n as f64 + 2.0) / (n as f64 - 2.0);
    let lap = laplace_beltrami(g, u)?;
    let out: Vec<f64> = u
        .values()
        .iter()
        .zip(lap.values())
        .zip(s_g.values())
        .map(|((&uv, &l), &s)| an * uv.powf(-e) * (-l + s * uv / an))
        .collect();
    ScalarField::new(*g.disc(), out)
}

/// Scalar curvature of u^{4/(n-2)} g from the transformation law.
pub fn conformal_scalar(g: &MetricField, u: &ScalarField, opts: &CurvatureOptions) -> Result<ScalarField> {
    let s = scalar_curvature(g, opts)?;
    conformal_scalar_with(g, u, &s.field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_for_three_dimensions() {
        let c = structural_constants(3, 2.0).unwrap();
        assert_eq!(c.a_n, 8.0);
        assert_eq!(c.n_star, 6.0);
        assert_eq!(c.two_p_star, 4.0);
        assert_eq!(c.chi, 1.5);
        assert_eq!(c.sigma, 2.0);
        assert_eq!(c.tau, 6.0);
        assert!((c.chi_pow_tau() - 11.390625).abs() < 1e-12);
    }

    #[test]
    fn critical_exponent_is_flagged() {
        let c = structural_constants(4, 2.0).unwrap();
        assert_eq!(c.regime, Regime::Critical);
        assert!(c.chi == 1.0 && c.sigma.is_infinite());
        assert!(structural_constants(2, 2.0).is_err());
        assert!(structural_constants(3, 1.0).is_err());
    }
}
