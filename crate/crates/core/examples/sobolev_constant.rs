//! Trial-function estimate of c1 on a flat ball and a conformally scaled one.

use roughmass::bounds::{sharp_sobolev_constant, sobolev_constant, SobolevOptions};
use roughmass::geometry::{CartesianGrid, Discretization, MetricData, MetricField, Region};

fn main() -> roughmass::Result<()> {
    let disc = Discretization::Cartesian(CartesianGrid::with_spacing(3.0, 0.1)?);
    let ball = Region::ball(disc, 2.5);
    let flat = MetricField::euclidean(disc)?;
    let opts = SobolevOptions::default();
    let est = sobolev_constant(&flat, &ball, &opts)?;
    println!("sharp K_3           {:.6}", sharp_sobolev_constant(3));
    println!("flat ball estimate  {:.6} ({:?}, scale {:.3}, {} trials)", est.c1, est.family, est.scale, est.trials);

    let four = MetricField::new(
        disc,
        MetricData::Cartesian(vec![[4.0, 0.0, 0.0, 4.0, 0.0, 4.0]; disc.len()]),
        None,
        0.0,
        1.0,
    )?;
    let scaled = sobolev_constant(&four, &ball, &opts)?;
    println!("4 delta estimate    {:.6} (the quotient is scale invariant in three dimensions)", scaled.c1);
    Ok(())
}
