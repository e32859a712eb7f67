//! Chartwise mollification of a metric near its compact rough set, and the
//! diagnostics that track g_eps -> g.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    lp_norm, negative_part, norm, scalar_curvature, sobolev_distance, sup_distance, sym_exceeds, CartesianGrid,
    CurvatureOptions, MetricData, MetricField, Region, ScalarField, Sym3, DEFINITENESS_FLOOR,
};
use crate::scenarios::smooth_step;

/// A coordinate ball O_i = B(center, domain_radius) with partition-of-unity
/// cut-offs: weight 1 inside `inner_radius`, 0 beyond `outer_radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chart {
    pub center: [f64; 3],
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub domain_radius: f64,
}

impl Chart {
    pub fn centered(inner_radius: f64, outer_radius: f64, domain_radius: f64) -> Self {
        Self { center: [0.0; 3], inner_radius, outer_radius, domain_radius }
    }

    fn distance(&self, x: [f64; 3]) -> f64 {
        norm([x[0] - self.center[0], x[1] - self.center[1], x[2] - self.center[2]])
    }

    /// Largest admissible mollification scale for this chart.
    pub fn eps0(&self) -> f64 {
        self.domain_radius - self.outer_radius
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub eps: f64,
    pub charts: Vec<Chart>,
}

/// Result of mollifying a metric.
#[derive(Clone, Debug)]
pub struct Smoothed {
    pub metric: MetricField,
    /// K: nodes within the outer radius of some chart.
    pub compact: Region,
    /// K_eps: nodes within eps of K, grown by the stencil reach.
    pub region: Region,
    pub eps: f64,
    /// max over K_eps of the distance to K.
    pub hausdorff: f64,
}

/// Unnormalized weights a_1..a_N and a_exterior at a point.
fn raw_weights(charts: &[Chart], x: [f64; 3], out: &mut Vec<f64>) -> f64 {
    out.clear();
    let mut ext = 1.0;
    for c in charts {
        let d = c.distance(x);
        let w = c.outer_radius - c.inner_radius;
        out.push(smooth_step((c.outer_radius - d) / w));
        ext *= smooth_step((d - c.inner_radius) / w);
    }
    ext
}

/// Partition functions chi_i with sum chi_i^2 + chi_ext^2 = 1 at a point.
pub fn partition(charts: &[Chart], x: [f64; 3]) -> (Vec<f64>, f64) {
    let mut a = Vec::with_capacity(charts.len());
    let ext = raw_weights(charts, x, &mut a);
    let s = (a.iter().map(|v| v * v).sum::<f64>() + ext * ext).sqrt();
    (a.iter().map(|v| v / s).collect(), ext / s)
}

/// Distance from x to K, the union of the outer balls.
fn distance_to_k(charts: &[Chart], x: [f64; 3]) -> f64 {
    charts.iter().map(|c| (c.distance(x) - c.outer_radius).max(0.0)).fold(f64::INFINITY, f64::min)
}

/// Discrete standard mollifier exp(-1/(1-|y/eps|^2)), normalized to unit mass.
fn kernel(grid: &CartesianGrid, eps: f64) -> Vec<([isize; 3], f64)> {
    let h = grid.spacing();
    let m = (eps / h).floor() as isize;
    let mut out = Vec::new();
    for a in -m..=m {
        for b in -m..=m {
            for c in -m..=m {
                let t = ((a * a + b * b + c * c) as f64).sqrt() * h / eps;
                if t < 1.0 {
                    out.push(([a, b, c], (-1.0 / (1.0 - t * t)).exp()));
                }
            }
        }
    }
    let total: f64 = out.iter().map(|k| k.1).sum();
    for k in &mut out {
        k.1 /= total;
    }
    out
}

fn validate(grid: &CartesianGrid, spec: &MollifierSpec) -> Result<()> {
    let h = grid.spacing();
    if spec.charts.is_empty() {
        return Err(Error::InvalidInput("no charts".into()));
    }
    if spec.eps < 2.0 * h {
        return Err(Error::UnderResolved { eps: spec.eps, min: 2.0 * h });
    }
    for c in &spec.charts {
        if !(0.0 < c.inner_radius && c.inner_radius < c.outer_radius && c.outer_radius < c.domain_radius) {
            return Err(Error::InvalidInput(format!("chart radii must satisfy 0 < inner < outer < domain: {c:?}")));
        }
        if spec.eps >= c.eps0() {
            return Err(Error::EpsTooLarge { eps: spec.eps, eps0: c.eps0() });
        }
        let reach = c.center.iter().fold(0.0f64, |m, v| m.max(v.abs())) + c.domain_radius;
        if reach > grid.half_width {
            return Err(Error::InvalidInput(format!("chart domain {c:?} leaves the grid")));
        }
    }
    Ok(())
}

/// g_eps = (chi_ext^2 g + sum_i chi_i (rho_eps * (chi_i g))) / W with
/// W = chi_ext^2 + sum_i chi_i (rho_eps * chi_i), so constant metrics are fixed.
///
/// Nodes outside every outer ball are copied unchanged.
pub fn mollify(g: &MetricField, spec: &MollifierSpec) -> Result<Smoothed> {
    let grid = *g
        .disc()
        .cartesian()
        .ok_or_else(|| Error::Unsupported("mollification needs a cartesian grid".into()))?;
    validate(&grid, spec)?;
    let disc = *g.disc();
    let data = g.cartesian().unwrap();
    let ker = kernel(&grid, spec.eps);
    let nn = grid.nodes as isize;
    let st = [nn * nn, nn, 1];
    let ker_off: Vec<(isize, f64)> =
        ker.iter().map(|(o, w)| (o[0] * st[0] + o[1] * st[1] + o[2] * st[2], *w)).collect();

    let mut out: Vec<Sym3> = data.to_vec();
    let mut touched = vec![false; disc.len()];
    let mut acc: Vec<Sym3> = vec![[0.0; 6]; disc.len()];
    let mut acc_w = vec![0.0; disc.len()];
    let mut ext_sq = vec![1.0; disc.len()];

    for (ci, chart) in spec.charts.iter().enumerate() {
        let lo = chart.center.map(|c| c - chart.outer_radius - spec.eps);
        let hi = chart.center.map(|c| c + chart.outer_radius + spec.eps);
        let ranges = [grid.axis_range(lo[0], hi[0]), grid.axis_range(lo[1], hi[1]), grid.axis_range(lo[2], hi[2])];
        // chi_i on the bounding box, zero elsewhere
        let mut chi = vec![0.0; disc.len()];
        for i in ranges[0].clone() {
            for j in ranges[1].clone() {
                for k in ranges[2].clone() {
                    let idx = grid.index(i, j, k);
                    let x = grid.point(idx);
                    let (c, e) = partition(&spec.charts, x);
                    chi[idx] = c[ci];
                    if c.iter().any(|&v| v > 0.0) {
                        touched[idx] = true;
                        ext_sq[idx] = e * e;
                    }
                }
            }
        }
        for i in ranges[0].clone() {
            for j in ranges[1].clone() {
                for k in ranges[2].clone() {
                    let idx = grid.index(i, j, k);
                    let ci_x = chi[idx];
                    if ci_x == 0.0 {
                        continue;
                    }
                    let mut conv = [0.0; 6];
                    let mut conv_w = 0.0;
                    for &(o, w) in &ker_off {
                        let y = (idx as isize - o) as usize;
                        let c = chi[y];
                        if c == 0.0 {
                            continue;
                        }
                        let gy = &data[y];
                        let f = w * c;
                        for q in 0..6 {
                            conv[q] += f * gy[q];
                        }
                        conv_w += f;
                    }
                    for q in 0..6 {
                        acc[idx][q] += ci_x * conv[q];
                    }
                    acc_w[idx] += ci_x * conv_w;
                }
            }
        }
    }
    for idx in 0..disc.len() {
        if touched[idx] {
            let e = ext_sq[idx];
            let w = e + acc_w[idx];
            out[idx] = std::array::from_fn(|q| (e * data[idx][q] + acc[idx][q]) / w);
            if !sym_exceeds(&out[idx], DEFINITENESS_FLOOR) {
                return Err(Error::NotPositiveDefinite {
                    node: idx,
                    min_eigenvalue: crate::geometry::sym_min_eigenvalue(&out[idx]),
                });
            }
        }
    }

    let reach = spec.charts.iter().map(|c| norm(c.center) + c.outer_radius).fold(0.0, f64::max);
    let metric = MetricField::new(
        disc,
        MetricData::Cartesian(out),
        g.exterior().cloned(),
        g.compact_radius().max(reach),
        g.decay_exponent(),
    )?;
    let h = grid.spacing();
    let grow = spec.eps + 2.0 * 3f64.sqrt() * h;
    let dist: Vec<f64> = (0..disc.len()).map(|i| distance_to_k(&spec.charts, grid.point(i))).collect();
    let compact = Region::from_fn(disc, |i| dist[i] == 0.0);
    let region = Region::from_fn(disc, |i| dist[i] <= grow);
    let hausdorff = region.nodes().map(|i| dist[i]).fold(0.0, f64::max);
    Ok(Smoothed { metric, compact, region, eps: spec.eps, hausdorff })
}

/// Smallest rho >= 1 with g2 <= rho g1 and g1 <= rho g2 at every node.
pub fn equivalence_factor(g1: &MetricField, g2: &MetricField) -> Result<f64> {
    g1.disc().ensure_same(g2.disc())?;
    let mut rho = 1.0f64;
    match (g1.data(), g2.data()) {
        (MetricData::Cartesian(a), MetricData::Cartesian(b)) => {
            for (x, y) in a.iter().zip(b) {
                if x == y {
                    continue;
                }
                let m1 = nalgebra::Matrix3::new(x[0], x[1], x[2], x[1], x[3], x[4], x[2], x[4], x[5]);
                let m2 = nalgebra::Matrix3::new(y[0], y[1], y[2], y[1], y[3], y[4], y[2], y[4], y[5]);
                let l = m1.cholesky().ok_or(Error::NotPositiveDefinite { node: 0, min_eigenvalue: f64::NAN })?;
                let linv = l.l().try_inverse().expect("triangular factor is invertible");
                let m = linv * m2 * linv.transpose();
                let m = 0.5 * (m + m.transpose());
                let ev = m.symmetric_eigenvalues();
                rho = rho.max(ev.max()).max(1.0 / ev.min());
            }
        }
        (MetricData::Radial(a), MetricData::Radial(b)) => {
            for (x, y) in a.iter().zip(b) {
                for q in 0..2 {
                    let r = y[q] / x[q];
                    rho = rho.max(r).max(1.0 / r);
                }
            }
        }
        _ => return Err(Error::DiscretizationMismatch),
    }
    Ok(rho)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub eps: f64,
    /// max |g_eps - g|
    pub sup_dist: f64,
    /// ||g_eps - g||_{W^{2,n/2}}
    pub w2_dist: f64,
    /// ||s_eps - s||_{L^{n/2}(K_eps, g)}
    pub s_diff: f64,
    /// ||(s_eps)_-||_{L^{n/2}(K_eps, g)}
    pub s_neg: f64,
    /// ||s_-||_{L^{n/2}(K_eps, g)} of the rough metric
    pub s_neg_base: f64,
    pub rho: f64,
    pub hausdorff: f64,
}

impl ConvergenceRow {
    /// ||(s_eps)_-|| <= ||s_-|| + ||s_eps - s||, the pointwise bound with unit constants.
    pub fn negative_part_bounded(&self) -> bool {
        self.s_neg <= self.s_neg_base + self.s_diff + 1e-12 * (1.0 + self.s_neg)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceTable {
    /// Sorted by decreasing eps.
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub const HEADER: &'static str = "eps,sup_dist,w2_dist,s_diff_n2,s_neg_n2,s_neg_base_n2,rho,hausdorff";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.eps, r.sup_dist, r.w2_dist, r.s_diff, r.s_neg, r.s_neg_base, r.rho, r.hausdorff
            ));
        }
        s
    }

    /// Column strictly decreasing as eps decreases.
    pub fn strictly_decreasing(&self, col: impl Fn(&ConvergenceRow) -> f64) -> bool {
        self.rows.windows(2).all(|w| col(&w[1]) < col(&w[0]))
    }
}

/// Mollifies `g` at each scale and tabulates how g_eps approaches g.
pub fn convergence_table(
    g: &MetricField,
    charts: &[Chart],
    eps_list: &[f64],
    opts: &CurvatureOptions,
) -> Result<ConvergenceTable> {
    let s = scalar_curvature(g, opts)?.field;
    let s_neg_field = negative_part(&s);
    let p = g.dim() as f64 / 2.0;
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let mut rows = Vec::with_capacity(eps.len());
    for e in eps {
        let sm = mollify(g, &MollifierSpec { eps: e, charts: charts.to_vec() })?;
        let se = scalar_curvature(&sm.metric, opts)?.field;
        let diff = se.zip_map(&s, |a, b| a - b)?;
        rows.push(ConvergenceRow {
            eps: e,
            sup_dist: sup_distance(&sm.metric, g)?,
            w2_dist: sobolev_distance(&sm.metric, g, &Region::whole(*g.disc()))?,
            s_diff: lp_norm(&diff, p, g, &sm.region)?,
            s_neg: lp_norm(&negative_part(&se), p, g, &sm.region)?,
            s_neg_base: lp_norm(&s_neg_field, p, g, &sm.region)?,
            rho: equivalence_factor(g, &sm.metric)?,
            hausdorff: sm.hausdorff,
        });
    }
    Ok(ConvergenceTable { rows })
}

/// Scalar field restricted to a region, zero elsewhere.
pub fn restrict(u: &ScalarField, region: &Region) -> Result<ScalarField> {
    u.disc().ensure_same(region.disc())?;
    let vals = u.values().iter().enumerate().map(|(i, &v)| if region.contains(i) { v } else { 0.0 }).collect();
    ScalarField::new(*u.disc(), vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_squares_sum_to_one() {
        let charts = [Chart::centered(0.3, 0.6, 1.0), Chart { center: [0.4, 0.0, 0.0], ..Chart::centered(0.2, 0.5, 0.9) }];
        for x in [[0.0, 0.0, 0.0], [0.45, 0.1, 0.0], [0.55, 0.2, -0.1], [2.0, 0.0, 0.0]] {
            let (c, e) = partition(&charts, x);
            let s: f64 = c.iter().map(|v| v * v).sum::<f64>() + e * e;
            assert!((s - 1.0).abs() < 1e-14);
        }
        let (c, e) = partition(&charts, [0.0; 3]);
        assert_eq!(e, 0.0);
        assert!(c[0] > 0.0);
    }

    #[test]
    fn kernel_has_unit_mass_and_support_in_ball() {
        let grid = CartesianGrid::new(1.0, 41).unwrap();
        let k = kernel(&grid, 0.2);
        let total: f64 = k.iter().map(|v| v.1).sum();
        assert!((total - 1.0).abs() < 1e-14);
        let h = grid.spacing();
        assert!(k.iter().all(|(o, _)| ((o[0] * o[0] + o[1] * o[1] + o[2] * o[2]) as f64).sqrt() * h < 0.2));
    }
}
