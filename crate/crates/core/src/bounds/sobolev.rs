use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conformal::n_star;
use crate::error::{Error, Result};
use crate::geometry::{norm, sphere_area, sym_index, sym_inverse, Discretization, MetricData, MetricField, Region};

/// Sharp constant K_n in ||phi||_{n*}^2 <= K_n ||grad phi||_2^2 on R^n.
pub fn sharp_sobolev_constant(n: usize) -> f64 {
    let nf = n as f64;
    4.0 / (nf * (nf - 2.0) * sphere_area(n + 1).powf(2.0 / nf))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SobolevOptions {
    /// Trial scales per family and center.
    pub scales: usize,
    /// Extra centers, jittered about the center of the region.
    pub jitter_centers: usize,
    pub seed: u64,
}

impl Default for SobolevOptions {
    fn default() -> Self {
        Self { scales: 12, jitter_centers: 2, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrialFamily {
    /// (1 + d^2/lambda^2)^{-(n-2)/2}, shifted to vanish at the cut-off radius.
    Bubble,
    /// (1 - d^2/a^2)^2
    Bump,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SobolevEstimate {
    /// Largest Rayleigh-type quotient ||phi||_{n*}^2 / ||grad phi||_2^2 found.
    pub c1: f64,
    pub family: TrialFamily,
    pub center: [f64; 3],
    pub scale: f64,
    pub cutoff: f64,
    pub trials: usize,
}

impl SobolevEstimate {
    pub const METHOD: &'static str = "trial-function maximization over bubbles and bumps";
}

fn trial(family: TrialFamily, n: usize, scale: f64, cutoff: f64, d: f64) -> (f64, f64) {
    // value and d/dd
    match family {
        TrialFamily::Bubble => {
            let e = -(n as f64 - 2.0) / 2.0;
            let q = 1.0 + d * d / (scale * scale);
            let q0 = 1.0 + cutoff * cutoff / (scale * scale);
            (q.powf(e) - q0.powf(e), e * q.powf(e - 1.0) * 2.0 * d / (scale * scale))
        }
        TrialFamily::Bump => {
            let t = 1.0 - d * d / (scale * scale);
            (t * t, -4.0 * t * d / (scale * scale))
        }
    }
}

struct Prepared {
    nodes: Vec<usize>,
    weight: Vec<f64>,
    inv: Vec<[f64; 6]>,
}

fn log_space(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k <= 1 || hi <= lo {
        return vec![lo.max(hi)];
    }
    (0..k).map(|i| lo * (hi / lo).powf(i as f64 / (k - 1) as f64)).collect()
}

/// Lower estimate of the Sobolev constant c1[g] on `omega`, by maximizing the
/// quotient over a fixed, seed-determined family of trial functions with
/// support in `omega`.
pub fn sobolev_constant(g: &MetricField, omega: &Region, opts: &SobolevOptions) -> Result<SobolevEstimate> {
    g.disc().ensure_same(omega.disc())?;
    if omega.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let disc = *g.disc();
    let n = disc.dim();
    let ns = n_star(n);
    let h = disc.spacing();
    let prepared = Prepared {
        nodes: omega.nodes().collect(),
        weight: omega.nodes().map(|i| g.measure_weight(i)).collect(),
        inv: match g.data() {
            MetricData::Cartesian(v) => omega.nodes().map(|i| sym_inverse(&v[i])).collect(),
            MetricData::Radial(v) => omega.nodes().map(|i| [1.0 / v[i][0], 0.0, 0.0, 0.0, 0.0, 0.0]).collect(),
        },
    };

    let (center, cutoff) = match &disc {
        Discretization::Cartesian(grid) => {
            let cnt = prepared.nodes.len() as f64;
            let mut c = [0.0; 3];
            for &i in &prepared.nodes {
                let p = grid.point(i);
                for a in 0..3 {
                    c[a] += p[a] / cnt;
                }
            }
            let outside = (0..disc.len())
                .filter(|&i| !omega.contains(i))
                .map(|i| {
                    let p = grid.point(i);
                    norm([p[0] - c[0], p[1] - c[1], p[2] - c[2]])
                })
                .fold(f64::INFINITY, f64::min);
            let edge = grid.half_width - c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            (c, outside.min(edge) - h)
        }
        Discretization::Radial(mesh) => {
            let outside = (0..disc.len()).filter(|&i| !omega.contains(i)).map(|i| mesh.radius(i)).fold(f64::INFINITY, f64::min);
            ([0.0; 3], outside.min(mesh.outer()) - h)
        }
    };
    if !(cutoff > 4.0 * h) {
        return Err(Error::InvalidInput("region is too thin for Sobolev trial functions".into()));
    }

    let mut centers = vec![(center, cutoff)];
    if disc.cartesian().is_some() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.jitter_centers {
            let mut off = [0.0; 3];
            loop {
                for o in off.iter_mut() {
                    *o = rng.gen_range(-1.0..1.0);
                }
                if norm(off) <= 1.0 {
                    break;
                }
            }
            let off = off.map(|o| o * 0.2 * cutoff);
            centers.push(([center[0] + off[0], center[1] + off[1], center[2] + off[2]], cutoff - norm(off)));
        }
    }

    let mut best: Option<SobolevEstimate> = None;
    let mut trials = 0;
    for &(c, cut) in &centers {
        for family in [TrialFamily::Bubble, TrialFamily::Bump] {
            let scales = match family {
                TrialFamily::Bubble => log_space(2.0 * h, 0.5 * cut, opts.scales),
                TrialFamily::Bump => log_space(4.0 * h, cut, opts.scales),
            };
            for s in scales {
                let support = match family {
                    TrialFamily::Bubble => cut,
                    TrialFamily::Bump => s,
                };
                let q = quotient(&disc, &prepared, family, n, ns, s, support, c);
                trials += 1;
                if q > 0.0 && best.map_or(true, |b| q > b.c1) {
                    best = Some(SobolevEstimate { c1: q, family, center: c, scale: s, cutoff: support, trials: 0 });
                }
            }
        }
    }
    let mut est = best.ok_or_else(|| Error::InvalidInput("no admissible trial function".into()))?;
    est.trials = trials;
    Ok(est)
}

#[allow(clippy::too_many_arguments)]
fn quotient(
    disc: &Discretization,
    prep: &Prepared,
    family: TrialFamily,
    n: usize,
    ns: f64,
    scale: f64,
    support: f64,
    c: [f64; 3],
) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, &i) in prep.nodes.iter().enumerate() {
        let (x, d) = match disc {
            Discretization::Cartesian(grid) => {
                let p = grid.point(i);
                let x = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
                (x, norm(x))
            }
            Discretization::Radial(m) => {
                let r = m.radius(i);
                ([r, 0.0, 0.0], r)
            }
        };
        if d >= support {
            continue;
        }
        let (phi, dphi) = trial(family, n, scale, support, d);
        let w = prep.weight[k];
        num += phi.abs().powf(ns) * w;
        let grad_sq = if d > 0.0 {
            let gi = &prep.inv[k];
            let u = x.map(|v| v / d);
            let mut acc = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    acc += gi[sym_index(a, b)] * u[a] * u[b];
                }
            }
            acc * dphi * dphi
        } else {
            0.0
        };
        den += grad_sq * w;
    }
    if den > 0.0 {
        num.powf(2.0 / ns) / den
    } else {
        0.0
    }
}
