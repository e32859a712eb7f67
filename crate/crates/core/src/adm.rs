//! ADM mass: flux integrals over coordinate spheres, extrapolation in r, and
//! the mass shift under a conformal correction.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::conformal::conformal_rescale;
use crate::error::{Error, Result};
use crate::geometry::{
    conformally_flat_jet, radial_derivatives, sphere_area, sym_index, Discretization, FdEngine, MetricField,
    ScalarField, StencilOrder, Sym3,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MassOptions {
    /// Radii for the extrapolation; chosen automatically when absent.
    pub radii: Option<Vec<f64>>,
    /// Number of automatic radii.
    pub count: usize,
    /// Gauss-Legendre nodes in cos(theta); twice as many uniform nodes in phi.
    pub quadrature: usize,
    /// Ignore the closed-form exterior and difference the samples.
    pub force_fd: bool,
    /// Correction terms r^{-k e} kept in the fit, k = 1..=terms.
    pub fit_terms: usize,
}

impl Default for MassOptions {
    fn default() -> Self {
        Self { radii: None, count: 8, quadrature: 24, force_fd: false, fit_terms: 2 }
    }
}

/// Which derivatives fed the flux integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MassRoute {
    ClosedForm,
    FiniteDifference,
}

#[derive(Clone, Debug, Serialize)]
pub struct MassReport {
    /// Extrapolated mass.
    pub mass: f64,
    /// (r, m(r)) pairs used in the fit.
    pub profile: Vec<(f64, f64)>,
    /// Correction coefficients c_k of r^{-k e}.
    pub corrections: Vec<f64>,
    /// Exponent e = 2q + 2 - n.
    pub exponent: f64,
    /// RMS fit residual.
    pub residual: f64,
    /// Set when the profile is too erratic to trust the extrapolation.
    pub unresolved: Option<String>,
    pub route: MassRoute,
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn flux_integrand(dg: &[Sym3; 3], nu: [f64; 3]) -> f64 {
    // (d_i g_ij - d_j g_ii) nu^j
    let mut acc = 0.0;
    for j in 0..3 {
        let mut t = 0.0;
        for i in 0..3 {
            t += dg[i][sym_index(i, j)] - dg[j][sym_index(i, i)];
        }
        acc += t * nu[j];
    }
    acc
}

/// First derivatives of the metric at an arbitrary point, by trilinear
/// interpolation of nodal centered differences.
fn interpolated_derivative(fd: &FdEngine, data: &[Sym3], x: [f64; 3]) -> [Sym3; 3] {
    let grid = fd.grid();
    let h = grid.spacing();
    let mut base = [0usize; 3];
    let mut frac = [0.0; 3];
    for a in 0..3 {
        let t = (x[a] + grid.half_width) / h;
        let i = (t.floor() as usize).min(grid.nodes - 2);
        base[a] = i;
        frac[a] = t - i as f64;
    }
    let mut out = [[0.0; 6]; 3];
    for c in 0..8 {
        let o = [(c >> 2) & 1, (c >> 1) & 1, c & 1];
        let w: f64 = (0..3).map(|a| if o[a] == 1 { frac[a] } else { 1.0 - frac[a] }).product();
        if w == 0.0 {
            continue;
        }
        let idx = grid.index(base[0] + o[0], base[1] + o[1], base[2] + o[2]);
        let jet = fd.jet(idx, |i| data[i]);
        for k in 0..3 {
            for q in 0..6 {
                out[k][q] += w * jet.first[k][q];
            }
        }
    }
    out
}

fn check_radius(g: &MetricField, r: f64) -> Result<()> {
    if r <= g.compact_radius() {
        return Err(Error::RadiusInsideCompactSet { radius: r, compact_radius: g.compact_radius() });
    }
    let max = g.disc().max_sphere_radius();
    if r > max {
        return Err(Error::RadiusOutsideDomain { radius: r, max });
    }
    Ok(())
}

struct MassEvaluator<'a> {
    g: &'a MetricField,
    use_closed_form: bool,
    fd: Option<FdEngine>,
    radial_deriv: Option<(Vec<f64>, Vec<f64>)>,
    nodes: (Vec<f64>, Vec<f64>),
    n_phi: usize,
}

impl<'a> MassEvaluator<'a> {
    fn new(g: &'a MetricField, opts: &MassOptions) -> Self {
        let use_closed_form = g.exterior().is_some() && !opts.force_fd;
        let fd = match g.disc() {
            Discretization::Cartesian(grid) if !use_closed_form => Some(FdEngine::new(*grid, StencilOrder::Second)),
            _ => None,
        };
        let radial_deriv = match g.disc() {
            Discretization::Radial(mesh) if !use_closed_form => {
                let b: Vec<f64> = g.radial().unwrap().iter().map(|v| v[1]).collect();
                Some(radial_derivatives(mesh, &b, StencilOrder::Second))
            }
            _ => None,
        };
        Self { g, use_closed_form, fd, radial_deriv, nodes: gauss_legendre(opts.quadrature), n_phi: 2 * opts.quadrature }
    }

    fn route(&self) -> MassRoute {
        if self.use_closed_form {
            MassRoute::ClosedForm
        } else {
            MassRoute::FiniteDifference
        }
    }

    fn at(&self, r: f64) -> Result<f64> {
        check_radius(self.g, r)?;
        let n = self.g.dim();
        match self.g.disc() {
            Discretization::Radial(mesh) => {
                let (a, b, db) = if self.use_closed_form {
                    let [p, dp, _] = self.g.exterior().unwrap().jet(r);
                    (p, p, dp)
                } else {
                    let data = self.g.radial().unwrap();
                    let t = (r - mesh.r0) / mesh.h;
                    let i = (t.floor() as usize).min(mesh.nodes - 2);
                    let f = t - i as f64;
                    let lerp = |x: f64, y: f64| (1.0 - f) * x + f * y;
                    let db = &self.radial_deriv.as_ref().unwrap().0;
                    (lerp(data[i][0], data[i + 1][0]), lerp(data[i][1], data[i + 1][1]), lerp(db[i], db[i + 1]))
                };
                Ok(0.5 * r.powi(n as i32 - 1) * ((a - b) / r - db))
            }
            Discretization::Cartesian(_) => {
                let (ct, wt) = &self.nodes;
                let dphi = 2.0 * std::f64::consts::PI / self.n_phi as f64;
                let mut total = 0.0;
                for (c, w) in ct.iter().zip(wt) {
                    let s = (1.0 - c * c).sqrt();
                    for k in 0..self.n_phi {
                        let phi = (k as f64 + 0.5) * dphi;
                        let nu = [s * phi.cos(), s * phi.sin(), *c];
                        let x = [r * nu[0], r * nu[1], r * nu[2]];
                        let dg = if self.use_closed_form {
                            conformally_flat_jet(self.g.exterior().unwrap().as_ref(), x).dg
                        } else {
                            interpolated_derivative(self.fd.as_ref().unwrap(), self.g.cartesian().unwrap(), x)
                        };
                        total += w * dphi * flux_integrand(&dg, nu);
                    }
                }
                Ok(total * r * r / (2.0 * (n as f64 - 1.0) * sphere_area(n)))
            }
        }
    }
}

/// Flux mass m(r) over the coordinate sphere of radius r.
pub fn mass_at_radius(g: &MetricField, r: f64, opts: &MassOptions) -> Result<f64> {
    MassEvaluator::new(g, opts).at(r)
}

/// Radii spread uniformly in 1/r over the usable exterior.
pub fn default_radii(g: &MetricField, count: usize) -> Result<Vec<f64>> {
    let h = g.disc().spacing();
    let hi = g.disc().max_sphere_radius();
    let lo = (g.compact_radius() + 2.0 * h).max(0.25 * hi);
    if !(lo < hi) || count < 3 {
        return Err(Error::RadiusOutsideDomain { radius: lo, max: hi });
    }
    Ok((0..count)
        .map(|k| {
            let t = k as f64 / (count - 1) as f64;
            (1.0 / ((1.0 - t) / lo + t / hi)).clamp(lo, hi)
        })
        .collect())
}

/// Least-squares fit m(r) = m_inf + sum_k c_k r^{-k e}.
pub fn extrapolate(profile: &[(f64, f64)], exponent: f64, terms: usize) -> Result<(f64, Vec<f64>, f64)> {
    let terms = terms.min(profile.len().saturating_sub(2));
    if profile.len() < 2 {
        return Err(Error::InvalidInput("need at least two radii to extrapolate".into()));
    }
    let rmin = profile.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let cols = terms + 1;
    let a = DMatrix::from_fn(profile.len(), cols, |i, j| (rmin / profile[i].0).powf(j as f64 * exponent));
    let b = DVector::from_iterator(profile.len(), profile.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-14).map_err(|e| Error::IllConditioned(e.to_string()))?;
    let resid = (&a * &x - &b).norm() / (profile.len() as f64).sqrt();
    let corrections = (1..cols).map(|j| x[j] * rmin.powf(j as f64 * exponent)).collect();
    Ok((x[0], corrections, resid))
}

/// ADM mass by extrapolating flux masses to r = infinity.
pub fn adm_mass(g: &MetricField, opts: &MassOptions) -> Result<MassReport> {
    let radii = match &opts.radii {
        Some(r) => r.clone(),
        None => default_radii(g, opts.count)?,
    };
    let eval = MassEvaluator::new(g, opts);
    let profile: Vec<(f64, f64)> = radii.iter().map(|&r| Ok((r, eval.at(r)?))).collect::<Result<_>>()?;
    let n = g.dim() as f64;
    let exponent = 2.0 * g.decay_exponent() + 2.0 - n;
    let (mass, corrections, residual) = extrapolate(&profile, exponent, opts.fit_terms)?;
    let scale = profile.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    let unresolved = if residual > 1e-3 * scale + 1e-12 {
        Some(format!("asymptotics unresolved (fit residual {residual:.3e}); increase the domain size"))
    } else {
        None
    };
    Ok(MassReport { mass, profile, corrections, exponent, residual, unresolved, route: eval.route() })
}

#[derive(Clone, Debug, Serialize)]
pub struct MassShift {
    pub adm_g: f64,
    pub adm_hat: f64,
    pub two_a: f64,
    /// |ADM(g_hat) - ADM(g) - 2A|
    pub gap: f64,
    /// gap / max(|ADM(g)|, |2A|, 1e-12)
    pub relative_gap: f64,
}

/// Compares ADM(u^{4/(n-2)} g) - ADM(g) with 2A. When the rescaled metric has no
/// closed form both masses are taken by finite differences.
pub fn mass_shift_check(g: &MetricField, u: &ScalarField, a: f64, opts: &MassOptions) -> Result<MassShift> {
    let hat = conformal_rescale(g, u)?;
    let mut o = opts.clone();
    if hat.exterior().is_none() {
        o.force_fd = true;
    }
    let adm_g = adm_mass(g, &o)?.mass;
    let adm_hat = adm_mass(&hat, &o)?.mass;
    let gap = (adm_hat - adm_g - 2.0 * a).abs();
    let relative_gap = gap / adm_g.abs().max((2.0 * a).abs()).max(1e-12);
    Ok(MassShift { adm_g, adm_hat, two_a: 2.0 * a, gap, relative_gap })
}
