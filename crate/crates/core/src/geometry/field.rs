use crate::error::{Error, Result};

use super::discretization::Discretization;
use super::profile::SharedProfile;

/// Symmetric 3x3 tensor stored as (xx, xy, xz, yy, yz, zz).
pub type Sym3 = [f64; 6];

pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

#[inline]
pub const fn sym_index(i: usize, j: usize) -> usize {
    const T: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    T[i][j]
}

pub const IDENTITY: Sym3 = [1.0, 0.0, 0.0, 1.0, 0.0, 1.0];

#[inline]
pub fn sym_det(s: &Sym3) -> f64 {
    s[0] * (s[3] * s[5] - s[4] * s[4]) - s[1] * (s[1] * s[5] - s[4] * s[2]) + s[2] * (s[1] * s[4] - s[3] * s[2])
}

#[inline]
pub fn sym_inverse(s: &Sym3) -> Sym3 {
    let d = sym_det(s);
    [
        (s[3] * s[5] - s[4] * s[4]) / d,
        (s[2] * s[4] - s[1] * s[5]) / d,
        (s[1] * s[4] - s[2] * s[3]) / d,
        (s[0] * s[5] - s[2] * s[2]) / d,
        (s[1] * s[2] - s[0] * s[4]) / d,
        (s[0] * s[3] - s[1] * s[1]) / d,
    ]
}

/// Frobenius norm, off-diagonal entries counted twice.
#[inline]
pub fn sym_frobenius(s: &Sym3) -> f64 {
    (s[0] * s[0] + s[3] * s[3] + s[5] * s[5] + 2.0 * (s[1] * s[1] + s[2] * s[2] + s[4] * s[4])).sqrt()
}

/// Cholesky test for `s - lambda I > 0`.
pub fn sym_exceeds(s: &Sym3, lambda: f64) -> bool {
    let a00 = s[0] - lambda;
    if !(a00 > 0.0) {
        return false;
    }
    let l10 = s[1] / a00.sqrt();
    let l20 = s[2] / a00.sqrt();
    let a11 = s[3] - lambda - l10 * l10;
    if !(a11 > 0.0) {
        return false;
    }
    let l21 = (s[4] - l20 * l10) / a11.sqrt();
    let a22 = s[5] - lambda - l20 * l20 - l21 * l21;
    a22 > 0.0
}

pub fn sym_min_eigenvalue(s: &Sym3) -> f64 {
    let m = nalgebra::Matrix3::new(s[0], s[1], s[2], s[1], s[3], s[4], s[2], s[4], s[5]);
    m.symmetric_eigenvalues().min()
}

/// Samples of a metric. Radial metrics are g = A dr^2 + B r^2 dsigma^2.
#[derive(Clone, Debug)]
pub enum MetricData {
    Cartesian(Vec<Sym3>),
    Radial(Vec<[f64; 2]>),
}

/// A metric sampled on a discretization, asymptotically flat outside the ball
/// of radius `compact_radius`.
///
/// When `exterior` is present the metric equals psi(|x|) delta for
/// |x| > compact_radius, and derivative-based routines may use it there.
#[derive(Clone, Debug)]
pub struct MetricField {
    disc: Discretization,
    data: MetricData,
    exterior: Option<SharedProfile>,
    compact_radius: f64,
    decay_exponent: f64,
}

/// Eigenvalue floor used by the definiteness check.
pub const DEFINITENESS_FLOOR: f64 = 1e-8;

impl MetricField {
    pub fn new(
        disc: Discretization,
        data: MetricData,
        exterior: Option<SharedProfile>,
        compact_radius: f64,
        decay_exponent: f64,
    ) -> Result<Self> {
        let len = match &data {
            MetricData::Cartesian(v) => {
                if disc.cartesian().is_none() {
                    return Err(Error::DiscretizationMismatch);
                }
                v.len()
            }
            MetricData::Radial(v) => {
                if disc.radial().is_none() {
                    return Err(Error::DiscretizationMismatch);
                }
                v.len()
            }
        };
        if len != disc.len() {
            return Err(Error::DiscretizationMismatch);
        }
        let n = disc.dim() as f64;
        if !(decay_exponent > (n - 2.0) / 2.0) {
            return Err(Error::InvalidInput(format!(
                "decay exponent {decay_exponent} must exceed (n-2)/2 = {}",
                (n - 2.0) / 2.0
            )));
        }
        if !(compact_radius >= 0.0) {
            return Err(Error::InvalidInput(format!("bad compact radius {compact_radius}")));
        }
        let field = Self { disc, data, exterior, compact_radius, decay_exponent };
        field.check_definite()?;
        Ok(field)
    }

    /// Samples `psi(|x|) delta` everywhere and keeps `psi` as the exterior closed form.
    pub fn from_profile(
        disc: Discretization,
        profile: SharedProfile,
        compact_radius: f64,
        decay_exponent: f64,
    ) -> Result<Self> {
        let data = match &disc {
            Discretization::Cartesian(_) => MetricData::Cartesian(
                (0..disc.len())
                    .map(|i| {
                        let p = profile.value(disc.radius(i));
                        [p, 0.0, 0.0, p, 0.0, p]
                    })
                    .collect(),
            ),
            Discretization::Radial(_) => MetricData::Radial(
                (0..disc.len())
                    .map(|i| {
                        let p = profile.value(disc.radius(i));
                        [p, p]
                    })
                    .collect(),
            ),
        };
        Self::new(disc, data, Some(profile), compact_radius, decay_exponent)
    }

    /// The flat metric with no compact set to speak of.
    pub fn euclidean(disc: Discretization) -> Result<Self> {
        let n = disc.dim() as f64;
        Self::from_profile(disc, std::sync::Arc::new(super::profile::ConstantProfile(1.0)), 0.0, n - 2.0)
    }

    fn check_definite(&self) -> Result<()> {
        match &self.data {
            MetricData::Cartesian(v) => {
                for (node, s) in v.iter().enumerate() {
                    if !sym_exceeds(s, DEFINITENESS_FLOOR) {
                        return Err(Error::NotPositiveDefinite { node, min_eigenvalue: sym_min_eigenvalue(s) });
                    }
                }
            }
            MetricData::Radial(v) => {
                for (node, ab) in v.iter().enumerate() {
                    let m = ab[0].min(ab[1]);
                    if !(m > DEFINITENESS_FLOOR) {
                        return Err(Error::NotPositiveDefinite { node, min_eigenvalue: m });
                    }
                }
            }
        }
        Ok(())
    }

    /// Same discretization, exterior and decay data, new samples.
    pub fn with_data(&self, data: MetricData) -> Result<Self> {
        Self::new(self.disc, data, self.exterior.clone(), self.compact_radius, self.decay_exponent)
    }

    /// Replaces the exterior closed form.
    pub fn with_exterior(mut self, exterior: Option<SharedProfile>) -> Self {
        self.exterior = exterior;
        self
    }

    pub fn disc(&self) -> &Discretization {
        &self.disc
    }

    pub fn dim(&self) -> usize {
        self.disc.dim()
    }

    pub fn len(&self) -> usize {
        self.disc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disc.is_empty()
    }

    pub fn data(&self) -> &MetricData {
        &self.data
    }

    pub fn cartesian(&self) -> Option<&[Sym3]> {
        match &self.data {
            MetricData::Cartesian(v) => Some(v),
            _ => None,
        }
    }

    pub fn radial(&self) -> Option<&[[f64; 2]]> {
        match &self.data {
            MetricData::Radial(v) => Some(v),
            _ => None,
        }
    }

    pub fn exterior(&self) -> Option<&SharedProfile> {
        self.exterior.as_ref()
    }

    pub fn compact_radius(&self) -> f64 {
        self.compact_radius
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }

    /// True when node `idx` lies outside K and the closed form may be used there.
    #[inline]
    pub fn uses_exterior(&self, idx: usize) -> bool {
        self.exterior.is_some() && self.disc.radius(idx) > self.compact_radius
    }

    /// Density of the Riemannian measure relative to the Euclidean one.
    #[inline]
    pub fn density(&self, idx: usize) -> f64 {
        match &self.data {
            MetricData::Cartesian(v) => sym_det(&v[idx]).sqrt(),
            MetricData::Radial(v) => {
                let [a, b] = v[idx];
                a.sqrt() * b.powf((self.disc.dim() as f64 - 1.0) / 2.0)
            }
        }
    }

    /// Riemannian quadrature weight of node `idx`.
    #[inline]
    pub fn measure_weight(&self, idx: usize) -> f64 {
        self.disc.weight(idx) * self.density(idx)
    }

    /// Checks that samples outside K agree with the closed-form exterior.
    pub fn check_exterior(&self, rel_tol: f64) -> Result<()> {
        let Some(ext) = &self.exterior else { return Ok(()) };
        for idx in 0..self.len() {
            let r = self.disc.radius(idx);
            if r <= self.compact_radius {
                continue;
            }
            let p = ext.value(r);
            let ok = match &self.data {
                MetricData::Cartesian(v) => {
                    let s = v[idx];
                    let want = [p, 0.0, 0.0, p, 0.0, p];
                    s.iter().zip(want).all(|(a, b)| (a - b).abs() <= rel_tol * p.abs())
                }
                MetricData::Radial(v) => v[idx].iter().all(|a| (a - p).abs() <= rel_tol * p.abs()),
            };
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "node {idx} at r = {r} disagrees with the exterior closed form"
                )));
            }
        }
        Ok(())
    }
}

/// A scalar sampled on a discretization, optionally with a radial closed form.
#[derive(Clone, Debug)]
pub struct ScalarField {
    disc: Discretization,
    values: Vec<f64>,
    profile: Option<SharedProfile>,
}

impl ScalarField {
    pub fn new(disc: Discretization, values: Vec<f64>) -> Result<Self> {
        if values.len() != disc.len() {
            return Err(Error::DiscretizationMismatch);
        }
        Ok(Self { disc, values, profile: None })
    }

    pub fn zeros(disc: Discretization) -> Self {
        Self { disc, values: vec![0.0; disc.len()], profile: None }
    }

    pub fn constant(disc: Discretization, c: f64) -> Self {
        Self { disc, values: vec![c; disc.len()], profile: None }
    }

    pub fn from_fn(disc: Discretization, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = match &disc {
            Discretization::Cartesian(g) => (0..disc.len()).map(|i| f(g.point(i))).collect(),
            Discretization::Radial(m) => (0..disc.len()).map(|i| f([m.radius(i), 0.0, 0.0])).collect(),
        };
        Self { disc, values, profile: None }
    }

    /// Samples `profile(|x|)` and keeps the closed form.
    pub fn from_profile(disc: Discretization, profile: SharedProfile) -> Self {
        let values = (0..disc.len()).map(|i| profile.value(disc.radius(i))).collect();
        Self { disc, values, profile: Some(profile) }
    }

    pub fn disc(&self) -> &Discretization {
        &self.disc
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        self.profile = None;
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn profile(&self) -> Option<&SharedProfile> {
        self.profile.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { disc: self.disc, values: self.values.iter().map(|&v| f(v)).collect(), profile: None }
    }

    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.disc.ensure_same(&other.disc)?;
        Ok(Self {
            disc: self.disc,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            profile: None,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
