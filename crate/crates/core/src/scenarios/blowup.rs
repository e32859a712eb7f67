use serde::Serialize;

use crate::elliptic::{solve_dirichlet, SolveOptions};
use crate::error::Result;
use crate::geometry::{Discretization, MetricData, MetricField, RadialMesh, Region, ScalarField};

/// f_eps(r) = eps^{-2} F(r/eps) with F(t) = (3/pi)(1 - t^2)^2, unit mass in R^2.
pub fn blowup_potential(eps: f64, r: f64) -> f64 {
    let t = r / eps;
    if t >= 1.0 {
        0.0
    } else {
        3.0 / std::f64::consts::PI * (1.0 - t * t).powi(2) / (eps * eps)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BlowupPoint {
    pub eps: f64,
    /// u_eps at the innermost node.
    pub u_center: f64,
    pub iterations: usize,
}

/// Solves Laplace u + f_eps u = 0 on the unit disc with u = 1 on the circle.
pub fn blowup_solve(eps: f64, nodes: usize, opts: &SolveOptions) -> Result<BlowupPoint> {
    let h = 1.0 / (nodes as f64 - 0.5);
    let mesh = RadialMesh::regular(2, 1.0, h)?;
    let disc = Discretization::Radial(mesh);
    let g = MetricField::new(disc, MetricData::Radial(vec![[1.0, 1.0]; disc.len()]), None, 0.0, 0.5)?;
    let f = ScalarField::from_fn(disc, |x| blowup_potential(eps, x[0]));
    let rep = solve_dirichlet(&g, &f, &Region::whole(disc), opts)?;
    Ok(BlowupPoint { eps, u_center: rep.u.values()[0], iterations: rep.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_has_unit_mass() {
        let eps = 0.1;
        let m = 20000;
        let dr = eps / m as f64;
        let mass: f64 = (0..m)
            .map(|i| {
                let r = (i as f64 + 0.5) * dr;
                2.0 * std::f64::consts::PI * r * blowup_potential(eps, r) * dr
            })
            .sum();
        assert!((mass - 1.0).abs() < 1e-6);
    }
}
