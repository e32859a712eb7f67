use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{MetricField, Region, ScalarField};

use super::decay::{decay_coefficient_integral, extract_decay_coefficient};
use super::operator::DivergenceOperator;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveOptions {
    /// Relative residual target for conjugate gradients.
    pub tol: f64,
    pub max_iter: usize,
    /// Annulus (r1, r2) for the least-squares decay fit; skipped when absent.
    pub decay_annulus: Option<(f64, f64)>,
    /// Smallness parameter c1 ||f||_{n/2}, if the caller has one.
    pub alpha: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 20_000, decay_annulus: None, alpha: None }
    }
}

/// Solution of Laplace_g v + f v = F with v = 0 off the interior of the domain.
#[derive(Clone, Debug)]
pub struct LinearSolve {
    pub v: ScalarField,
    pub iterations: usize,
    pub residual: f64,
    /// Nodes carrying unknowns.
    pub unknowns: Region,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub v: ScalarField,
    /// u = 1 + v
    pub u: ScalarField,
    pub iterations: usize,
    pub residual: f64,
    pub unknowns: Region,
    /// Decay coefficient from the energy integral; NaN below dimension three.
    pub a_int: f64,
    /// Decay coefficient from the least-squares fit, when an annulus was given.
    pub a_fit: Option<f64>,
    /// The smallness parameter was supplied and is not below one.
    pub gate_warning: bool,
    /// Largest |f| that was dropped because it sat outside the solve domain.
    pub discarded_potential: f64,
}

/// Nodes of `omega` whose whole stencil lies in `omega`.
pub fn unknown_nodes(op: &DivergenceOperator, omega: &Region) -> Region {
    let mut nb = Vec::with_capacity(18);
    let mask = (0..omega.disc().len())
        .map(|idx| {
            if !omega.contains(idx) || !op.has_stencil(idx) {
                return false;
            }
            op.neighbours(idx, &mut nb);
            nb.iter().all(|&j| omega.contains(j))
        })
        .collect();
    Region::from_mask(*omega.disc(), mask).expect("same length")
}

/// Solves Laplace_g v + f v = source on `omega`, v = 0 elsewhere, by Jacobi
/// preconditioned conjugate gradients on the symmetrized system.
pub fn solve_with_source(
    g: &MetricField,
    f: &ScalarField,
    source: &ScalarField,
    omega: &Region,
    opts: &SolveOptions,
) -> Result<LinearSolve> {
    let disc = *g.disc();
    disc.ensure_same(f.disc())?;
    disc.ensure_same(source.disc())?;
    disc.ensure_same(omega.disc())?;
    let op = DivergenceOperator::new(g);
    let unknowns = unknown_nodes(&op, omega);
    if unknowns.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let idx: Vec<usize> = unknowns.nodes().collect();
    let fv = f.values();
    let sv = source.values();
    let len = disc.len();

    // A = -M - W f,  b = -W F
    let shift: Vec<f64> = idx.iter().map(|&p| op.weight(p) * fv[p]).collect();
    let diag: Vec<f64> = idx.iter().zip(&shift).map(|(&p, s)| -op.diagonal(p) - s).collect();
    if let Some(k) = diag.iter().position(|d| !(*d > 0.0)) {
        return Err(Error::SolverBreakdown { detail: format!("non-positive diagonal at node {}", idx[k]) });
    }
    let b: Vec<f64> = idx.iter().map(|&p| -op.weight(p) * sv[p]).collect();
    let b_norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut x_full = vec![0.0; len];
    if b_norm == 0.0 {
        return Ok(LinearSolve { v: ScalarField::new(disc, x_full)?, iterations: 0, residual: 0.0, unknowns });
    }

    let apply = |full: &[f64], out: &mut [f64]| {
        for (k, &p) in idx.iter().enumerate() {
            out[k] = -op.apply_at(full, p) - shift[k] * full[p];
        }
    };

    let m = idx.len();
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(a, d)| a / d).collect();
    let mut p_full = vec![0.0; len];
    for (k, &node) in idx.iter().enumerate() {
        p_full[node] = z[k];
    }
    let mut ap = vec![0.0; m];
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let target = opts.tol * b_norm;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        apply(&p_full, &mut ap);
        let pap: f64 = idx.iter().zip(&ap).map(|(&node, a)| p_full[node] * a).sum();
        if !(pap > 0.0) {
            return Err(Error::SolverBreakdown {
                detail: format!("p^T A p = {pap:.3e} at iteration {iterations}"),
            });
        }
        let alpha = rz / pap;
        let mut rr = 0.0;
        for (k, &node) in idx.iter().enumerate() {
            x_full[node] += alpha * p_full[node];
            r[k] -= alpha * ap[k];
            rr += r[k] * r[k];
        }
        if rr.sqrt() <= target {
            converged = true;
            break;
        }
        for k in 0..m {
            z[k] = r[k] / diag[k];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for (k, &node) in idx.iter().enumerate() {
            p_full[node] = z[k] + beta * p_full[node];
        }
    }

    // true residual
    apply(&x_full, &mut ap);
    let res = ap.iter().zip(&b).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() / b_norm;
    if !converged {
        return Err(Error::NotConverged { iterations, residual: res });
    }
    Ok(LinearSolve { v: ScalarField::new(disc, x_full)?, iterations, residual: res, unknowns })
}

/// Solves Laplace_g v + f v + f = 0 on `omega` with v = 0 on its boundary, so
/// that u = 1 + v satisfies Laplace_g u + f u = 0.
pub fn solve_dirichlet(g: &MetricField, f: &ScalarField, omega: &Region, opts: &SolveOptions) -> Result<SolveReport> {
    g.disc().ensure_same(f.disc())?;
    g.disc().ensure_same(omega.disc())?;
    if omega.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let fmin = f.values().iter().copied().fold(f64::INFINITY, f64::min);
    if fmin < 0.0 {
        return Err(Error::NegativePotential { min: fmin });
    }
    let gate_warning = match opts.alpha {
        Some(a) if a >= 1.0 => {
            warn!("smallness parameter {a:.3} >= 1: solvability is not guaranteed, proceeding");
            true
        }
        _ => false,
    };
    let op = DivergenceOperator::new(g);
    let inner = unknown_nodes(&op, omega);
    let mut discarded = 0.0f64;
    let fr: Vec<f64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if inner.contains(i) {
                v
            } else {
                discarded = discarded.max(v.abs());
                0.0
            }
        })
        .collect();
    let f_in = ScalarField::new(*g.disc(), fr)?;
    let source = f_in.map(|v| -v);
    let sol = solve_with_source(g, &f_in, &source, omega, opts)?;
    let u = sol.v.map(|v| 1.0 + v);
    if let Some((node, &value)) = u.values().iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::PositivityLost { node, value });
    }
    let a_int = if g.dim() >= 3 {
        decay_coefficient_integral(g, &u, &f_in, &Region::whole(*g.disc()))?
    } else {
        f64::NAN
    };
    let a_fit = match opts.decay_annulus {
        Some((r1, r2)) => Some(extract_decay_coefficient(&sol.v, r1, r2)?),
        None => None,
    };
    Ok(SolveReport {
        v: sol.v,
        u,
        iterations: sol.iterations,
        residual: sol.residual,
        unknowns: sol.unknowns,
        a_int,
        a_fit,
        gate_warning,
        discarded_potential: discarded,
    })
}
