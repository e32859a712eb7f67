//! Flat space on a 64^3 grid: zero curvature, zero correction, zero mass.

use roughmass::adm::{adm_mass, MassOptions};
use roughmass::bounds::clean_negative_part;
use roughmass::conformal::a_n;
use roughmass::elliptic::{solve_dirichlet, SolveOptions};
use roughmass::geometry::{scalar_curvature, CartesianGrid, CurvatureOptions, Discretization, MetricField, Region};

fn main() -> roughmass::Result<()> {
    let disc = Discretization::Cartesian(CartesianGrid::new(4.0, 64)?);
    let g = MetricField::euclidean(disc)?;
    let s = scalar_curvature(&g, &CurvatureOptions::default())?.field;
    let f = clean_negative_part(&s, 1e-4).map(|v| v / a_n(3));
    let rep = solve_dirichlet(&g, &f, &Region::whole(disc), &SolveOptions::default())?;
    let mass = adm_mass(&g, &MassOptions::default())?;
    let fd = adm_mass(&g, &MassOptions { force_fd: true, ..MassOptions::default() })?;

    println!("nodes        {}", disc.len());
    println!("h            {:.6}", disc.spacing());
    println!("max |s|      {:.3e}", s.max_abs());
    println!("max |v|      {:.3e}", rep.v.max_abs());
    println!("ADM (exact)  {:.3e}", mass.mass);
    println!("ADM (FD)     {:.3e}", fd.mass);
    Ok(())
}
