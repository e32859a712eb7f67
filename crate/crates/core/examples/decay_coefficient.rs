//! The coefficient A of v ~ A / r^{n-2}: from the energy integral and from a fit.

use roughmass::conformal::a_n;
use roughmass::elliptic::{extract_decay_coefficient, solve_dirichlet, SolveOptions};
use roughmass::geometry::{Discretization, MetricField, RadialMesh, Region, ScalarField};

fn main() -> roughmass::Result<()> {
    let disc = Discretization::Radial(RadialMesh::regular(3, 40.0, 0.05)?);
    let synthetic = ScalarField::from_fn(disc, |x| 2.0 / x[0] + 5.0 / (x[0] * x[0]));
    println!("fit of 2/r + 5/r^2: {:.8}", extract_decay_coefficient(&synthetic, 4.0, 16.0)?);

    let g = MetricField::euclidean(disc)?;
    let f = ScalarField::from_fn(disc, |x| if x[0] < 1.0 { 0.3 * (1.0 - x[0] * x[0]).powi(2) / a_n(3) } else { 0.0 });
    let opts = SolveOptions { tol: 1e-12, decay_annulus: Some((4.0, 16.0)), ..SolveOptions::default() };
    let rep = solve_dirichlet(&g, &f, &Region::whole(disc), &opts)?;
    println!("energy integral A = {:.6}", rep.a_int);
    println!("least-squares   A = {:.6}", rep.a_fit.unwrap_or(f64::NAN));
    Ok(())
}
