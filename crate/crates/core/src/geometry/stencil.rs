use serde::{Deserialize, Serialize};

use super::discretization::{CartesianGrid, InnerBoundary, RadialMesh};

/// Accuracy of the centered finite-difference stencils.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StencilOrder {
    #[default]
    Second,
    Fourth,
}

#[derive(Clone, Copy, Debug)]
struct Stencil {
    offs: [isize; 5],
    w: [f64; 5],
    len: usize,
    one_sided: bool,
}

impl Stencil {
    fn new(offs: &[isize], w: &[f64], scale: f64, one_sided: bool) -> Self {
        let mut s = Stencil { offs: [0; 5], w: [0.0; 5], len: offs.len(), one_sided };
        for (t, (&o, &c)) in offs.iter().zip(w).enumerate() {
            s.offs[t] = o;
            s.w[t] = c * scale;
        }
        s
    }
}

fn first_stencil(i: usize, n: usize, order: StencilOrder, h: f64) -> Stencil {
    let s = 1.0 / h;
    if order == StencilOrder::Fourth && i >= 2 && i + 2 < n {
        return Stencil::new(&[-2, -1, 1, 2], &[1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0], s, false);
    }
    let demoted = order == StencilOrder::Fourth;
    if i >= 1 && i + 1 < n {
        Stencil::new(&[-1, 1], &[-0.5, 0.5], s, demoted)
    } else if i == 0 {
        Stencil::new(&[0, 1, 2], &[-1.5, 2.0, -0.5], s, true)
    } else {
        Stencil::new(&[0, -1, -2], &[1.5, -2.0, 0.5], s, true)
    }
}

fn second_stencil(i: usize, n: usize, order: StencilOrder, h: f64) -> Stencil {
    let s = 1.0 / (h * h);
    if order == StencilOrder::Fourth && i >= 2 && i + 2 < n {
        return Stencil::new(
            &[-2, -1, 0, 1, 2],
            &[-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
            s,
            false,
        );
    }
    let demoted = order == StencilOrder::Fourth;
    if i >= 1 && i + 1 < n {
        Stencil::new(&[-1, 0, 1], &[1.0, -2.0, 1.0], s, demoted)
    } else if i == 0 {
        Stencil::new(&[0, 1, 2, 3], &[2.0, -5.0, 4.0, -1.0], s, true)
    } else {
        Stencil::new(&[0, -1, -2, -3], &[2.0, -5.0, 4.0, -1.0], s, true)
    }
}

/// Value, gradient and Hessian of a `C`-component field at a node.
#[derive(Clone, Copy, Debug)]
pub struct Jet<const C: usize> {
    pub value: [f64; C],
    pub first: [[f64; C]; 3],
    pub second: [[[f64; C]; 3]; 3],
    /// True when any stencil fell back to a lower order or a one-sided form.
    pub degraded: bool,
}

/// Finite differences on a Cartesian grid.
#[derive(Clone, Debug)]
pub struct FdEngine {
    grid: CartesianGrid,
    order: StencilOrder,
    first: Vec<Stencil>,
    second: Vec<Stencil>,
}

impl FdEngine {
    pub fn new(grid: CartesianGrid, order: StencilOrder) -> Self {
        let n = grid.nodes;
        let h = grid.spacing();
        Self {
            grid,
            order,
            first: (0..n).map(|i| first_stencil(i, n, order, h)).collect(),
            second: (0..n).map(|i| second_stencil(i, n, order, h)).collect(),
        }
    }

    pub fn order(&self) -> StencilOrder {
        self.order
    }

    pub fn grid(&self) -> &CartesianGrid {
        &self.grid
    }

    fn strides(&self) -> [isize; 3] {
        let n = self.grid.nodes as isize;
        [n * n, n, 1]
    }

    /// Full second-order jet of a field given by `get`.
    pub fn jet<const C: usize>(&self, idx: usize, get: impl Fn(usize) -> [f64; C]) -> Jet<C> {
        let c = self.grid.coords(idx);
        let st = self.strides();
        let base = idx as isize;
        let mut jet = Jet { value: get(idx), first: [[0.0; C]; 3], second: [[[0.0; C]; 3]; 3], degraded: false };
        let firsts = [self.first[c[0]], self.first[c[1]], self.first[c[2]]];
        for a in 0..3 {
            let s = &firsts[a];
            jet.degraded |= s.one_sided;
            let mut acc = [0.0; C];
            for t in 0..s.len {
                let v = get((base + s.offs[t] * st[a]) as usize);
                for q in 0..C {
                    acc[q] += s.w[t] * v[q];
                }
            }
            jet.first[a] = acc;

            let s = &self.second[c[a]];
            jet.degraded |= s.one_sided;
            let mut acc = [0.0; C];
            for t in 0..s.len {
                let v = get((base + s.offs[t] * st[a]) as usize);
                for q in 0..C {
                    acc[q] += s.w[t] * v[q];
                }
            }
            jet.second[a][a] = acc;
        }
        for a in 0..3 {
            for b in (a + 1)..3 {
                let (sa, sb) = (&firsts[a], &firsts[b]);
                let mut acc = [0.0; C];
                for t in 0..sa.len {
                    for u in 0..sb.len {
                        let v = get((base + sa.offs[t] * st[a] + sb.offs[u] * st[b]) as usize);
                        let w = sa.w[t] * sb.w[u];
                        for q in 0..C {
                            acc[q] += w * v[q];
                        }
                    }
                }
                jet.second[a][b] = acc;
                jet.second[b][a] = acc;
            }
        }
        jet
    }

    /// Gradient of a scalar, with the degraded flag.
    pub fn gradient(&self, idx: usize, values: &[f64]) -> ([f64; 3], bool) {
        let c = self.grid.coords(idx);
        let st = self.strides();
        let mut g = [0.0; 3];
        let mut degraded = false;
        for a in 0..3 {
            let s = &self.first[c[a]];
            degraded |= s.one_sided;
            for t in 0..s.len {
                g[a] += s.w[t] * values[(idx as isize + s.offs[t] * st[a]) as usize];
            }
        }
        (g, degraded)
    }
}

/// First and second radial derivatives of nodal values on a radial mesh.
///
/// Centered differences in the interior; at an origin-regular inner end the
/// field is continued evenly across r = 0, elsewhere one-sided forms are used.
pub fn radial_derivatives(mesh: &RadialMesh, f: &[f64], order: StencilOrder) -> (Vec<f64>, Vec<f64>) {
    let n = mesh.nodes as isize;
    let h = mesh.h;
    let at = |i: isize| -> Option<f64> {
        if i >= 0 && i < n {
            Some(f[i as usize])
        } else if i < 0 && mesh.inner == InnerBoundary::Origin && -i - 1 < n {
            Some(f[(-i - 1) as usize])
        } else {
            None
        }
    };
    let mut d1 = vec![0.0; f.len()];
    let mut d2 = vec![0.0; f.len()];
    for i in 0..n {
        let c = at(i).unwrap();
        let (m2, m1, p1, p2) = (at(i - 2), at(i - 1), at(i + 1), at(i + 2));
        let (a, b) = match (order, m2, m1, p1, p2) {
            (StencilOrder::Fourth, Some(m2), Some(m1), Some(p1), Some(p2)) => (
                (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
                (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h),
            ),
            (_, _, Some(m1), Some(p1), _) => ((p1 - m1) / (2.0 * h), (p1 - 2.0 * c + m1) / (h * h)),
            (_, _, None, Some(p1), Some(p2)) => {
                let p3 = at(i + 3).unwrap_or(p2);
                ((-1.5 * c + 2.0 * p1 - 0.5 * p2) / h, (2.0 * c - 5.0 * p1 + 4.0 * p2 - p3) / (h * h))
            }
            _ => {
                let m1 = at(i - 1).unwrap();
                let m2 = at(i - 2).unwrap();
                let m3 = at(i - 3).unwrap_or(m2);
                ((1.5 * c - 2.0 * m1 + 0.5 * m2) / h, (2.0 * c - 5.0 * m1 + 4.0 * m2 - m3) / (h * h))
            }
        };
        d1[i as usize] = a;
        d2[i as usize] = b;
    }
    (d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_derivatives_exact_in_interior() {
        let grid = CartesianGrid::new(1.0, 21).unwrap();
        let f = |p: [f64; 3]| p[0] * p[0] * p[1] + 2.0 * p[1] * p[2] - p[2] * p[2] + 3.0;
        let values: Vec<f64> = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        for order in [StencilOrder::Second, StencilOrder::Fourth] {
            let fd = FdEngine::new(grid, order);
            let idx = grid.index(7, 11, 4);
            let p = grid.point(idx);
            let j = fd.jet(idx, |i| [values[i]]);
            assert!(!j.degraded);
            assert!((j.first[0][0] - 2.0 * p[0] * p[1]).abs() < 1e-10);
            assert!((j.first[1][0] - (p[0] * p[0] + 2.0 * p[2])).abs() < 1e-10);
            assert!((j.second[0][0][0] - 2.0 * p[1]).abs() < 1e-9);
            assert!((j.second[0][1][0] - 2.0 * p[0]).abs() < 1e-9);
            assert!((j.second[1][2][0] - 2.0).abs() < 1e-9);
            assert!((j.second[2][2][0] + 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_nodes_are_flagged_and_quadratics_still_exact() {
        let grid = CartesianGrid::new(1.0, 16).unwrap();
        let values: Vec<f64> = (0..grid.len()).map(|i| grid.point(i)[0].powi(2)).collect();
        let fd = FdEngine::new(grid, StencilOrder::Second);
        let idx = grid.index(0, 5, 5);
        let j = fd.jet(idx, |i| [values[i]]);
        assert!(j.degraded);
        assert!((j.first[0][0] - 2.0 * grid.point(idx)[0]).abs() < 1e-10);
        assert!((j.second[0][0][0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn radial_even_reflection() {
        let mesh = RadialMesh::regular(3, 2.0, 0.1).unwrap();
        let f: Vec<f64> = (0..mesh.nodes).map(|i| mesh.radius(i).powi(2)).collect();
        let (d1, d2) = radial_derivatives(&mesh, &f, StencilOrder::Second);
        for i in 0..mesh.nodes {
            assert!((d1[i] - 2.0 * mesh.radius(i)).abs() < 1e-10, "{i}");
            assert!((d2[i] - 2.0).abs() < 1e-8, "{i}");
        }
    }
}
