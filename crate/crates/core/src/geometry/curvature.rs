use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::discretization::Discretization;
use super::field::{sym_index, sym_inverse, MetricField, ScalarField, Sym3};
use super::profile::RadialProfile;
use super::stencil::{radial_derivatives, FdEngine, StencilOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureOptions {
    pub order: StencilOrder,
    /// Use the closed-form exterior at nodes outside K when the metric has one.
    pub use_exterior: bool,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        Self { order: StencilOrder::Second, use_exterior: true }
    }
}

#[derive(Clone, Debug)]
pub struct Curvature {
    pub field: ScalarField,
    /// Nodes where a stencil was demoted to a lower-order or one-sided form.
    pub degraded_nodes: usize,
    pub order: StencilOrder,
}

/// Metric jet: g_ij, d_k g_ij and d_k d_l g_ij.
#[derive(Clone, Copy, Debug)]
pub struct MetricJet {
    pub g: Sym3,
    pub dg: [Sym3; 3],
    pub ddg: [[Sym3; 3]; 3],
}

/// Scalar curvature of a 3-D metric from its jet, through the Christoffel symbols.
pub fn scalar_from_jet(jet: &MetricJet) -> f64 {
    let gi = sym_inverse(&jet.g);
    let g_inv = |i: usize, j: usize| gi[sym_index(i, j)];
    let d = |k: usize, i: usize, j: usize| jet.dg[k][sym_index(i, j)];
    let dd = |k: usize, l: usize, i: usize, j: usize| jet.ddg[k][l][sym_index(i, j)];

    let mut gamma1 = [[[0.0; 3]; 3]; 3];
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                gamma1[l][i][j] = 0.5 * (d(i, l, j) + d(j, l, i) - d(l, i, j));
            }
        }
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                gamma[k][i][j] = (0..3).map(|l| g_inv(k, l) * gamma1[l][i][j]).sum();
            }
        }
    }
    let mut dgi = [[[0.0; 3]; 3]; 3];
    for m in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                let mut acc = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        acc -= g_inv(k, a) * d(m, a, b) * g_inv(b, l);
                    }
                }
                dgi[m][k][l] = acc;
            }
        }
    }
    // d_m Gamma^k_ij
    let dgamma = |m: usize, k: usize, i: usize, j: usize| -> f64 {
        (0..3)
            .map(|l| {
                let dg1 = 0.5 * (dd(m, i, l, j) + dd(m, j, l, i) - dd(m, l, i, j));
                dgi[m][k][l] * gamma1[l][i][j] + g_inv(k, l) * dg1
            })
            .sum()
    };
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let gij = g_inv(i, j);
            if gij == 0.0 {
                continue;
            }
            let mut r = 0.0;
            for k in 0..3 {
                r += dgamma(k, k, i, j) - dgamma(j, k, i, k);
                for l in 0..3 {
                    r += gamma[k][k][l] * gamma[l][i][j] - gamma[k][j][l] * gamma[l][i][k];
                }
            }
            s += gij * r;
        }
    }
    s
}

/// Jet of psi(|x|) delta at a point x != 0.
pub fn conformally_flat_jet(profile: &dyn RadialProfile, x: [f64; 3]) -> MetricJet {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let [p, dp, ddp] = profile.jet(r);
    let mut jet = MetricJet { g: [p, 0.0, 0.0, p, 0.0, p], dg: [[0.0; 6]; 3], ddg: [[[0.0; 6]; 3]; 3] };
    for k in 0..3 {
        let v = dp * x[k] / r;
        jet.dg[k] = [v, 0.0, 0.0, v, 0.0, v];
        for l in 0..3 {
            let delta = if k == l { 1.0 } else { 0.0 };
            let v = ddp * x[k] * x[l] / (r * r) + dp * (delta / r - x[k] * x[l] / (r * r * r));
            jet.ddg[k][l] = [v, 0.0, 0.0, v, 0.0, v];
        }
    }
    jet
}

/// Scalar curvature of g = A dr^2 + B r^2 dsigma^2 in dimension n.
pub fn radial_scalar(n: usize, r: f64, a: f64, da: f64, b: f64, db: f64, ddb: f64) -> f64 {
    let nf = n as f64;
    let sb = b.sqrt();
    // R = r sqrt(B) is the areal radius.
    let big_r = r * sb;
    let dr = sb + r * db / (2.0 * sb);
    let ddr = db / sb + r * ddb / (2.0 * sb) - r * db * db / (4.0 * b * sb);
    -2.0 * (nf - 1.0) * (ddr / (a * big_r) - dr * da / (2.0 * a * a * big_r))
        + (nf - 1.0) * (nf - 2.0) * (1.0 - dr * dr / a) / (big_r * big_r)
}

/// Pointwise scalar curvature of a sampled metric.
pub fn scalar_curvature(g: &MetricField, opts: &CurvatureOptions) -> Result<Curvature> {
    let disc = *g.disc();
    let exterior = if opts.use_exterior { g.exterior().cloned() } else { None };
    let rk = g.compact_radius();
    let mut degraded = 0usize;
    let values = match &disc {
        Discretization::Cartesian(grid) => {
            let data = g.cartesian().expect("cartesian data");
            let fd = FdEngine::new(*grid, opts.order);
            let mut out = vec![0.0; disc.len()];
            for (idx, slot) in out.iter_mut().enumerate() {
                let x = grid.point(idx);
                let r = disc.radius(idx);
                let jet = match &exterior {
                    Some(p) if r > rk && r > 0.0 => conformally_flat_jet(p.as_ref(), x),
                    _ => {
                        let j = fd.jet(idx, |i| data[i]);
                        degraded += j.degraded as usize;
                        MetricJet { g: j.value, dg: j.first, ddg: j.second }
                    }
                };
                *slot = scalar_from_jet(&jet);
            }
            out
        }
        Discretization::Radial(mesh) => {
            let data = g.radial().expect("radial data");
            let a: Vec<f64> = data.iter().map(|v| v[0]).collect();
            let b: Vec<f64> = data.iter().map(|v| v[1]).collect();
            let (da, _) = radial_derivatives(mesh, &a, opts.order);
            let (db, ddb) = radial_derivatives(mesh, &b, opts.order);
            let reach = if opts.order == StencilOrder::Fourth { 2 } else { 1 };
            (0..mesh.nodes)
                .map(|i| {
                    let r = mesh.radius(i);
                    match &exterior {
                        Some(p) if r > rk => {
                            let [v, dv, ddv] = p.jet(r);
                            radial_scalar(mesh.dim, r, v, dv, v, dv, ddv)
                        }
                        _ => {
                            let inner_cut = mesh.inner == super::discretization::InnerBoundary::Excised && i < reach;
                            if inner_cut || i + reach >= mesh.nodes {
                                degraded += 1;
                            }
                            radial_scalar(mesh.dim, r, a[i], da[i], b[i], db[i], ddb[i])
                        }
                    }
                })
                .collect()
        }
    };
    Ok(Curvature { field: ScalarField::new(disc, values)?, degraded_nodes: degraded, order: opts.order })
}

/// Jet of a Cartesian metric at every node of `g`, by finite differences.
pub(crate) fn metric_jet_fd(fd: &FdEngine, data: &[Sym3], idx: usize) -> MetricJet {
    let j = fd.jet(idx, |i| data[i]);
    MetricJet { g: j.value, dg: j.first, ddg: j.second }
}
