//! Second-order convergence of the Laplace-Beltrami solve on a manufactured
//! solution w = (1 - r^2)^4 in flat space.

use roughmass::elliptic::{energy_identity, solve_dirichlet, solve_with_source, SolveOptions};
use roughmass::geometry::{CartesianGrid, Discretization, MetricField, Region, ScalarField};

fn exact(x: [f64; 3]) -> (f64, f64) {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let t = 1.0 - r2;
    if t <= 0.0 {
        (0.0, 0.0)
    } else {
        (t.powi(4), 48.0 * t * t * r2 - 24.0 * t.powi(3))
    }
}

fn main() -> roughmass::Result<()> {
    let potential = |x: [f64; 3]| 0.5 * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp();
    let opts = SolveOptions { tol: 1e-12, ..SolveOptions::default() };
    let mut prev: Option<f64> = None;
    println!("{:>6} {:>12} {:>7}", "h", "max error", "order");
    for h in [0.2, 0.1, 0.05] {
        let grid = CartesianGrid::with_spacing(1.6, h)?;
        let disc = Discretization::Cartesian(grid);
        let g = MetricField::euclidean(disc)?;
        let f = ScalarField::from_fn(disc, potential);
        let src = ScalarField::from_fn(disc, |x| exact(x).1 + potential(x) * exact(x).0);
        let sol = solve_with_source(&g, &f, &src, &Region::whole(disc), &opts)?;
        let err = (0..disc.len()).map(|i| (sol.v.values()[i] - exact(grid.point(i)).0).abs()).fold(0.0, f64::max);
        let order = prev.map_or(String::new(), |p| format!("{:.3}", (p / err).log2()));
        println!("{h:>6} {err:>12.4e} {order:>7}");
        prev = Some(err);
    }

    let disc = Discretization::Cartesian(CartesianGrid::with_spacing(1.6, 0.1)?);
    let g = MetricField::euclidean(disc)?;
    let f = ScalarField::from_fn(disc, potential);
    let rep = solve_dirichlet(&g, &f, &Region::whole(disc), &opts)?;
    let (lhs, rhs) = energy_identity(&g, &rep.v, &f)?;
    println!("energy identity: {lhs:.10} vs {rhs:.10} after {} iterations", rep.iterations);
    Ok(())
}
