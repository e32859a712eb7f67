#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use roughmass::conformal::a_n;
use roughmass::elliptic::{solve_with_source, SolveOptions};
use roughmass::geometry::{
    scalar_curvature, CartesianGrid, CurvatureOptions, Discretization, MetricData, MetricField, PowerProfile,
    RadialProfile, Region, ScalarField, SharedProfile, StencilOrder,
};
use roughmass::pipeline::PipelineConfig;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs").join(name)
}

pub fn load_config(name: &str) -> PipelineConfig {
    PipelineConfig::load(&config_path(name)).expect("shipped config loads")
}

pub fn cube(half_width: f64, h: f64) -> Discretization {
    Discretization::Cartesian(CartesianGrid::with_spacing(half_width, h).unwrap())
}

/// u(r) = 1 + c exp(-r^2)
#[derive(Debug)]
pub struct GaussBump(pub f64);

impl RadialProfile for GaussBump {
    fn jet(&self, r: f64) -> [f64; 3] {
        let e = (-r * r).exp();
        [1.0 + self.0 * e, -2.0 * r * self.0 * e, self.0 * e * (4.0 * r * r - 2.0)]
    }
}

pub fn gauss_laplacian(c: f64, r: f64) -> f64 {
    c * (-r * r).exp() * (4.0 * r * r - 6.0)
}

/// u^4 delta sampled on a cube, with every node treated as interior data.
pub fn gauss_conformal_metric(disc: Discretization, c: f64) -> MetricField {
    let u: SharedProfile = Arc::new(GaussBump(c));
    let psi: SharedProfile = Arc::new(PowerProfile { base: u, exponent: 4.0 });
    MetricField::from_profile(disc, psi, 10.0, 1.0).unwrap()
}

/// Max over interior nodes of |s_FD - s_exact| for u = 1 + c exp(-r^2).
pub fn conformal_identity_error(h: f64, c: f64) -> f64 {
    let disc = cube(2.0, h);
    let g = gauss_conformal_metric(disc, c);
    let opts = CurvatureOptions { order: StencilOrder::Second, use_exterior: false };
    let s = scalar_curvature(&g, &opts).unwrap().field;
    let inner = Region::whole(disc).interior().interior();
    inner
        .nodes()
        .map(|i| {
            let r = disc.radius(i);
            let u = GaussBump(c).value(r);
            let exact = -a_n(3) * u.powi(-5) * gauss_laplacian(c, r);
            (s.values()[i] - exact).abs()
        })
        .fold(0.0, f64::max)
}

/// Phi(x) = x + b (sin y, sin z, sin x) and its Jacobian J[k][i] = d_i Phi^k.
pub fn warp(x: [f64; 3], b: f64) -> ([f64; 3], [[f64; 3]; 3]) {
    let y = [x[0] + b * x[1].sin(), x[1] + b * x[2].sin(), x[2] + b * x[0].sin()];
    let j = [[1.0, b * x[1].cos(), 0.0], [0.0, 1.0, b * x[2].cos()], [b * x[0].cos(), 0.0, 1.0]];
    (y, j)
}

/// Pull-back of the flat metric under the warp, so Laplace_g (w o Phi) = (Laplace w) o Phi.
pub fn pullback_metric(disc: Discretization, b: f64) -> MetricField {
    let grid = *disc.cartesian().unwrap();
    let data = (0..disc.len())
        .map(|idx| {
            let (_, j) = warp(grid.point(idx), b);
            let gij = |i: usize, k: usize| (0..3).map(|l| j[l][i] * j[l][k]).sum::<f64>();
            [gij(0, 0), gij(0, 1), gij(0, 2), gij(1, 1), gij(1, 2), gij(2, 2)]
        })
        .collect();
    MetricField::new(disc, MetricData::Cartesian(data), None, 2.0 * grid.half_width, 1.0).unwrap()
}

/// w(y) = (1 - |y|^2 / R^2)^4 inside the ball of radius R.
pub fn mms_profile(y: [f64; 3], radius: f64) -> (f64, f64) {
    let rho2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let t = 1.0 - rho2 / (radius * radius);
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    let r2 = radius * radius;
    (t.powi(4), 48.0 * t * t * rho2 / (r2 * r2) - 24.0 * t.powi(3) / r2)
}

pub const MMS_WARP: f64 = 0.1;
pub const MMS_RADIUS: f64 = 1.0;
pub const MMS_BOX: f64 = 1.6;

pub fn mms_potential(x: [f64; 3]) -> f64 {
    0.5 * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp()
}

/// Max nodal error of the manufactured solve at spacing h.
pub fn mms_error(h: f64) -> f64 {
    let disc = cube(MMS_BOX, h);
    let g = pullback_metric(disc, MMS_WARP);
    let exact = ScalarField::from_fn(disc, |x| mms_profile(warp(x, MMS_WARP).0, MMS_RADIUS).0);
    let f = ScalarField::from_fn(disc, mms_potential);
    let source = ScalarField::from_fn(disc, |x| {
        let (w, lw) = mms_profile(warp(x, MMS_WARP).0, MMS_RADIUS);
        lw + mms_potential(x) * w
    });
    let opts = SolveOptions { tol: 1e-12, ..SolveOptions::default() };
    let sol = solve_with_source(&g, &f, &source, &Region::whole(disc), &opts).unwrap();
    sol.v.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
