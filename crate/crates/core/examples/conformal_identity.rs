//! The transformation law for s under g -> u^4 g against direct differentiation.

use roughmass::conformal::{conformal_rescale, conformal_scalar_with};
use roughmass::geometry::{
    scalar_curvature, CartesianGrid, CurvatureOptions, Discretization, MetricField, Region, ScalarField, StencilOrder,
};

fn main() -> roughmass::Result<()> {
    let opts = CurvatureOptions { order: StencilOrder::Second, use_exterior: false };
    println!("{:>8} {:>14}", "h", "max error");
    for h in [0.2, 0.1, 0.05] {
        let disc = Discretization::Cartesian(CartesianGrid::with_spacing(2.0, h)?);
        let g = MetricField::euclidean(disc)?;
        let u = ScalarField::from_fn(disc, |x| 1.0 + 0.5 * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp());
        let s = scalar_curvature(&g, &opts)?.field;
        let law = conformal_scalar_with(&g, &u, &s)?;
        let direct = scalar_curvature(&conformal_rescale(&g, &u)?, &opts)?.field;
        let inner = Region::whole(disc).interior().interior();
        let err = inner.nodes().map(|i| (law.values()[i] - direct.values()[i]).abs()).fold(0.0, f64::max);
        println!("{h:>8} {err:>14.4e}");
    }
    Ok(())
}
