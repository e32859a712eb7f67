use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adm::MassOptions;
use crate::bounds::SobolevOptions;
use crate::error::{Error, Result};
use crate::geometry::StencilOrder;
use crate::mollifier::Chart;
use crate::scenarios::ScenarioSpec;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub mollify: MollifyConfig,
    #[serde(default)]
    pub elliptic: EllipticConfig,
    #[serde(default)]
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub mass: MassConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MollifyConfig {
    /// Smoothing scales, strictly decreasing. Empty runs the metric as given.
    pub eps: Vec<f64>,
    /// Overrides the scenario's charts.
    pub charts: Option<Vec<Chart>>,
    pub order: StencilOrder,
}

impl Default for MollifyConfig {
    fn default() -> Self {
        Self { eps: Vec::new(), charts: None, order: StencilOrder::Second }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EllipticConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Solve on the ball of this radius instead of the whole grid.
    pub omega_radius: Option<f64>,
    pub decay_annulus: Option<(f64, f64)>,
    /// s_hat >= -curvature_tol * max(||s||_inf, 1) is required on the interior.
    pub curvature_tol: f64,
}

impl Default for EllipticConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 20_000, omega_radius: None, decay_annulus: None, curvature_tol: 1e-3 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    /// Exponent p of the Moser bounds.
    pub p: f64,
    pub seed: u64,
    pub scales: usize,
    pub jitter_centers: usize,
    /// s_- below this fraction of its maximum is treated as discretization noise.
    pub support_threshold: f64,
    pub check: bool,
    pub check_mass_lower: bool,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            p: 2.0,
            seed: 0,
            scales: 12,
            jitter_centers: 2,
            support_threshold: 1e-4,
            check: true,
            check_mass_lower: true,
        }
    }
}

impl BoundsConfig {
    pub fn sobolev(&self) -> SobolevOptions {
        SobolevOptions { scales: self.scales, jitter_centers: self.jitter_centers, seed: self.seed }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MassConfig {
    pub radii: Option<Vec<f64>>,
    pub count: usize,
    pub quadrature: usize,
    pub force_fd: bool,
    pub fit_terms: usize,
    /// Relative tolerance of ADM(g) against the scenario's exact mass.
    pub truth_tolerance: f64,
    pub check_truth: bool,
    /// ADM(g_hat) >= -nonnegative_tolerance is required.
    pub nonnegative_tolerance: f64,
}

impl Default for MassConfig {
    fn default() -> Self {
        let m = MassOptions::default();
        Self {
            radii: m.radii,
            count: m.count,
            quadrature: m.quadrature,
            force_fd: m.force_fd,
            fit_terms: m.fit_terms,
            truth_tolerance: 0.02,
            check_truth: true,
            nonnegative_tolerance: 1e-4,
        }
    }
}

impl MassConfig {
    pub fn options(&self) -> MassOptions {
        MassOptions {
            radii: self.radii.clone(),
            count: self.count,
            quadrature: self.quadrature,
            force_fd: self.force_fd,
            fit_terms: self.fit_terms,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub plotdata: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), plotdata: true }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Checks that do not need the metric.
    pub fn validate_static(&self) -> Result<()> {
        let eps = &self.mollify.eps;
        if eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::Config("mollify.eps entries must be positive".into()));
        }
        if eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("mollify.eps must be strictly decreasing".into()));
        }
        if !(self.bounds.p > 1.0) {
            return Err(Error::Config(format!("bounds.p must exceed 1, got {}", self.bounds.p)));
        }
        if !(self.bounds.support_threshold >= 0.0 && self.bounds.support_threshold < 1.0) {
            return Err(Error::Config("bounds.support_threshold must lie in [0, 1)".into()));
        }
        if !(self.elliptic.tol > 0.0) || self.elliptic.max_iter == 0 {
            return Err(Error::Config("elliptic.tol and elliptic.max_iter must be positive".into()));
        }
        if self.mass.count < 3 && self.mass.radii.is_none() {
            return Err(Error::Config("mass.count must be at least 3".into()));
        }
        Ok(())
    }
}
