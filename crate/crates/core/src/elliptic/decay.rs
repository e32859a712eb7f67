use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use super::operator::DivergenceOperator;
use crate::geometry::{
    radial_derivatives, sphere_area, sym_index, sym_inverse, Discretization, FdEngine, MetricField, Region,
    ScalarField, StencilOrder,
};

/// |grad u|_g^2 at every node, by centered differences.
pub fn gradient_norm_sq(g: &MetricField, u: &ScalarField) -> Result<ScalarField> {
    g.disc().ensure_same(u.disc())?;
    let disc = *g.disc();
    let vals = u.values();
    let out = match &disc {
        Discretization::Cartesian(grid) => {
            let fd = FdEngine::new(*grid, StencilOrder::Second);
            let data = g.cartesian().unwrap();
            (0..disc.len())
                .map(|i| {
                    let (d, _) = fd.gradient(i, vals);
                    let gi = sym_inverse(&data[i]);
                    let mut acc = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            acc += gi[sym_index(a, b)] * d[a] * d[b];
                        }
                    }
                    acc
                })
                .collect()
        }
        Discretization::Radial(mesh) => {
            let (d, _) = radial_derivatives(mesh, vals, StencilOrder::Second);
            let data = g.radial().unwrap();
            d.iter().zip(data).map(|(x, ab)| x * x / ab[0]).collect()
        }
    };
    ScalarField::new(disc, out)
}

/// Integral of |grad v|_g^2 over `region`.
pub fn dirichlet_energy(g: &MetricField, v: &ScalarField, region: &Region) -> Result<f64> {
    let e = gradient_norm_sq(g, v)?;
    Ok(region.nodes().map(|i| e.values()[i] * g.measure_weight(i)).sum())
}

/// Dirichlet energy as the quadratic form -v^T M v of the divergence-form
/// operator. `v` must vanish wherever the full stencil is missing.
pub fn discrete_energy(g: &MetricField, v: &ScalarField) -> Result<f64> {
    g.disc().ensure_same(v.disc())?;
    let op = DivergenceOperator::new(g);
    let vals = v.values();
    let mut total = 0.0;
    for (i, &x) in vals.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        if !op.has_stencil(i) {
            return Err(Error::InvalidInput(format!("v is nonzero at node {i}, which has no full stencil")));
        }
        total -= x * op.apply_at(vals, i) * g.measure_weight(i) / op.weight(i);
    }
    Ok(total)
}

/// Both sides of the energy identity  int |grad v|^2 = int f (v^2 + v), with
/// the discrete energy on the left.
pub fn energy_identity(g: &MetricField, v: &ScalarField, f: &ScalarField) -> Result<(f64, f64)> {
    let lhs = discrete_energy(g, v)?;
    let rhs = v
        .values()
        .iter()
        .zip(f.values())
        .enumerate()
        .map(|(i, (&vv, &ff))| ff * (vv * vv + vv) * g.measure_weight(i))
        .sum();
    Ok((lhs, rhs))
}

/// A = -(1 / ((n-2) omega_{n-1})) int (|grad u|^2 - f u^2) dmu over `region`.
pub fn decay_coefficient_integral(g: &MetricField, u: &ScalarField, f: &ScalarField, region: &Region) -> Result<f64> {
    g.disc().ensure_same(f.disc())?;
    g.disc().ensure_same(region.disc())?;
    let n = g.dim();
    if n < 3 {
        return Err(Error::Unsupported(format!("no decay coefficient in dimension {n}")));
    }
    let e = gradient_norm_sq(g, u)?;
    let (uv, fv, ev) = (u.values(), f.values(), e.values());
    let integral: f64 = region.nodes().map(|i| (ev[i] - fv[i] * uv[i] * uv[i]) * g.measure_weight(i)).sum();
    Ok(-integral / ((n as f64 - 2.0) * sphere_area(n)))
}

/// Coefficient A in v ~ A r^{2-n} + B r^{1-n} + C, least squares over the
/// nodes with r1 <= |x| <= r2. The constant absorbs Dirichlet truncation.
pub fn extract_decay_coefficient(v: &ScalarField, r1: f64, r2: f64) -> Result<f64> {
    if !(r1 > 0.0) || r2 < 1.5 * r1 {
        return Err(Error::IllConditioned(format!("annulus [{r1}, {r2}] is too thin, need r2 >= 1.5 r1")));
    }
    let disc = *v.disc();
    let n = disc.dim() as i32;
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    let mut count = 0;
    for (i, &val) in v.values().iter().enumerate() {
        let r = disc.radius(i);
        if r < r1 || r > r2 {
            continue;
        }
        let t = r1 / r;
        let row = Vector3::new(t.powi(n - 2), t.powi(n - 1), 1.0);
        ata += row * row.transpose();
        atb += row * val;
        count += 1;
    }
    if count < 6 {
        return Err(Error::IllConditioned(format!("only {count} nodes in the annulus [{r1}, {r2}]")));
    }
    let sol = ata
        .cholesky()
        .ok_or_else(|| Error::IllConditioned("singular normal equations".into()))?
        .solve(&atb);
    Ok(sol[0] * r1.powi(n - 2))
}
