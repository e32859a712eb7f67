use crate::error::{Error, Result};

use super::discretization::{Discretization, InnerBoundary};
use super::field::{MetricData, MetricField, ScalarField, SYM_PAIRS};
use super::region::Region;
use super::stencil::{radial_derivatives, FdEngine, StencilOrder};

/// L^p norm of `u` over `region` with respect to the measure of `g`.
/// `p = f64::INFINITY` gives the max norm.
pub fn lp_norm(u: &ScalarField, p: f64, g: &MetricField, region: &Region) -> Result<f64> {
    u.disc().ensure_same(g.disc())?;
    u.disc().ensure_same(region.disc())?;
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("exponent {p} must be >= 1")));
    }
    let vals = u.values();
    if p.is_infinite() {
        return Ok(region.nodes().fold(0.0, |m, i| m.max(vals[i].abs())));
    }
    let sum: f64 = region.nodes().map(|i| vals[i].abs().powf(p) * g.measure_weight(i)).sum();
    Ok(sum.powf(1.0 / p))
}

/// Riemannian volume of `region`.
pub fn riemannian_volume(region: &Region, g: &MetricField) -> Result<f64> {
    region.disc().ensure_same(g.disc())?;
    Ok(region.nodes().map(|i| g.measure_weight(i)).sum())
}

/// max(-u, 0) nodewise.
pub fn negative_part(u: &ScalarField) -> ScalarField {
    u.map(|v| if v < 0.0 { -v } else { 0.0 })
}

/// Integral of s * phi against the measure of g, for phi with support away from
/// the edge of the discretization.
pub fn distributional_pairing(s: &ScalarField, phi: &ScalarField, g: &MetricField) -> Result<f64> {
    s.disc().ensure_same(phi.disc())?;
    s.disc().ensure_same(g.disc())?;
    let disc = *g.disc();
    let pv = phi.values();
    for (i, &v) in pv.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let on_edge = match &disc {
            Discretization::Cartesian(grid) => grid.on_boundary(i),
            Discretization::Radial(m) => i + 1 == m.nodes || (i == 0 && m.inner == InnerBoundary::Excised),
        };
        if on_edge {
            return Err(Error::SupportNotCompact);
        }
    }
    Ok(s.values().iter().zip(pv).enumerate().map(|(i, (a, b))| a * b * g.measure_weight(i)).sum())
}

/// W^{2,n/2} distance between two metrics over `region`, Euclidean measure.
///
/// Pointwise norms are Frobenius norms of the difference tensor and its first
/// and second coordinate derivatives. On radial meshes the tensor norm is
/// |D|^2 = dA^2 + (n-1) dB^2.
pub fn sobolev_distance(g1: &MetricField, g2: &MetricField, region: &Region) -> Result<f64> {
    g1.disc().ensure_same(g2.disc())?;
    g1.disc().ensure_same(region.disc())?;
    let disc = *g1.disc();
    let p = disc.dim() as f64 / 2.0;
    let mut sum = 0.0;
    match (g1.data(), g2.data(), &disc) {
        (MetricData::Cartesian(a), MetricData::Cartesian(b), Discretization::Cartesian(grid)) => {
            let fd = FdEngine::new(*grid, StencilOrder::Second);
            let diff = |i: usize| -> [f64; 6] { std::array::from_fn(|q| a[i][q] - b[i][q]) };
            for i in region.nodes() {
                let j = fd.jet(i, diff);
                let mult = |q: usize| if SYM_PAIRS[q].0 == SYM_PAIRS[q].1 { 1.0 } else { 2.0 };
                let n0: f64 = (0..6).map(|q| mult(q) * j.value[q].powi(2)).sum();
                let n1: f64 = (0..3).flat_map(|k| (0..6).map(move |q| (k, q))).map(|(k, q)| mult(q) * j.first[k][q].powi(2)).sum();
                let mut n2 = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        for q in 0..6 {
                            n2 += mult(q) * j.second[k][l][q].powi(2);
                        }
                    }
                }
                sum += (n0.sqrt().powf(p) + n1.sqrt().powf(p) + n2.sqrt().powf(p)) * disc.weight(i);
            }
        }
        (MetricData::Radial(a), MetricData::Radial(b), Discretization::Radial(mesh)) => {
            let w = (mesh.dim - 1) as f64;
            let da: Vec<f64> = a.iter().zip(b).map(|(x, y)| x[0] - y[0]).collect();
            let db: Vec<f64> = a.iter().zip(b).map(|(x, y)| x[1] - y[1]).collect();
            let (da1, da2) = radial_derivatives(mesh, &da, StencilOrder::Second);
            let (db1, db2) = radial_derivatives(mesh, &db, StencilOrder::Second);
            for i in region.nodes() {
                let n0 = (da[i].powi(2) + w * db[i].powi(2)).sqrt();
                let n1 = (da1[i].powi(2) + w * db1[i].powi(2)).sqrt();
                let n2 = (da2[i].powi(2) + w * db2[i].powi(2)).sqrt();
                sum += (n0.powf(p) + n1.powf(p) + n2.powf(p)) * disc.weight(i);
            }
        }
        _ => return Err(Error::DiscretizationMismatch),
    }
    Ok(sum.powf(1.0 / p))
}

/// Largest pointwise Frobenius distance between two metrics.
pub fn sup_distance(g1: &MetricField, g2: &MetricField) -> Result<f64> {
    g1.disc().ensure_same(g2.disc())?;
    Ok(match (g1.data(), g2.data()) {
        (MetricData::Cartesian(a), MetricData::Cartesian(b)) => a
            .iter()
            .zip(b)
            .map(|(x, y)| super::field::sym_frobenius(&std::array::from_fn(|q| x[q] - y[q])))
            .fold(0.0, f64::max),
        (MetricData::Radial(a), MetricData::Radial(b)) => {
            let w = (g1.dim() - 1) as f64;
            a.iter()
                .zip(b)
                .map(|(x, y)| ((x[0] - y[0]).powi(2) + w * (x[1] - y[1]).powi(2)).sqrt())
                .fold(0.0, f64::max)
        }
        _ => return Err(Error::DiscretizationMismatch),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::discretization::CartesianGrid;

    fn flat() -> MetricField {
        MetricField::euclidean(Discretization::Cartesian(CartesianGrid::new(1.0, 21).unwrap())).unwrap()
    }

    #[test]
    fn constant_function_norms() {
        let g = flat();
        let d = *g.disc();
        let u = ScalarField::constant(d, 2.0);
        let all = Region::whole(d);
        let vol = riemannian_volume(&all, &g).unwrap();
        assert!((lp_norm(&u, 2.0, &g, &all).unwrap() - 2.0 * vol.sqrt()).abs() < 1e-12);
        assert_eq!(lp_norm(&u, f64::INFINITY, &g, &all).unwrap(), 2.0);
    }

    #[test]
    fn pairing_rejects_support_on_edge() {
        let g = flat();
        let d = *g.disc();
        let s = ScalarField::constant(d, 1.0);
        let phi = ScalarField::constant(d, 1.0);
        assert!(matches!(distributional_pairing(&s, &phi, &g), Err(Error::SupportNotCompact)));
        let bump = ScalarField::from_fn(d, |x| if crate::geometry::discretization::norm(x) < 0.5 { 1.0 } else { 0.0 });
        assert!(distributional_pairing(&s, &bump, &g).unwrap() > 0.0);
    }

    #[test]
    fn sobolev_distance_of_scaled_flat_metric() {
        // g2 = c g1 with constant c: only the zeroth-order term survives.
        let g = flat();
        let d = *g.disc();
        let data = vec![[2.0, 0.0, 0.0, 2.0, 0.0, 2.0]; d.len()];
        let g2 = g.with_data(MetricData::Cartesian(data)).unwrap();
        let all = Region::whole(d);
        let vol = riemannian_volume(&all, &g).unwrap();
        let want = (3f64.sqrt().powf(1.5) * vol).powf(1.0 / 1.5);
        assert!((sobolev_distance(&g, &g2, &all).unwrap() - want).abs() < 1e-10);
        assert!((sup_distance(&g, &g2).unwrap() - 3f64.sqrt()).abs() < 1e-14);
    }
}
