use crate::error::Result;
use crate::geometry::{
    metric_jet_fd, radial_derivatives, sym_index, sym_inverse, Discretization, FdEngine, MetricData,
    MetricField, ScalarField, StencilOrder, Sym3,
};

/// The operator u -> sqrt(g) Laplace_g(u) in divergence form, discretized so
/// that its matrix is symmetric.
///
/// Cartesian grids use face-averaged diagonal coefficients and centered cross
/// differences for the off-diagonal ones (19-point stencil). Radial meshes use
/// the one-dimensional flux form with zero flux through the innermost face.
#[derive(Clone, Debug)]
pub struct DivergenceOperator {
    disc: Discretization,
    coef: Coefficients,
    density: Vec<f64>,
}

#[derive(Clone, Debug)]
enum Coefficients {
    /// sqrt(g) g^{ij} at every node.
    Cartesian(Vec<Sym3>),
    /// Flux coefficient at face i + 1/2, for i = -1 .. nodes - 1.
    Radial(Vec<f64>),
}

impl DivergenceOperator {
    pub fn new(g: &MetricField) -> Self {
        let disc = *g.disc();
        let density: Vec<f64> = (0..disc.len()).map(|i| g.density(i)).collect();
        let coef = match g.data() {
            MetricData::Cartesian(v) => Coefficients::Cartesian(
                v.iter().zip(&density).map(|(s, &w)| sym_inverse(s).map(|c| c * w)).collect(),
            ),
            MetricData::Radial(v) => {
                let mesh = disc.radial().expect("radial mesh");
                let n = mesh.dim as i32;
                let kappa: Vec<f64> = v.iter().zip(&density).map(|(ab, w)| w / ab[0]).collect();
                let mut faces = vec![0.0; mesh.nodes + 1];
                // faces[i + 1] is the face between nodes i and i + 1
                for i in 0..mesh.nodes - 1 {
                    let rf = mesh.radius(i) + 0.5 * mesh.h;
                    faces[i + 1] = 0.5 * (kappa[i] + kappa[i + 1]) * rf.powi(n - 1);
                }
                Coefficients::Radial(faces)
            }
        };
        Self { disc, coef, density }
    }

    pub fn disc(&self) -> &Discretization {
        &self.disc
    }

    /// sqrt(g) relative to the Euclidean density (times r^{n-1} on radial meshes).
    pub fn weight(&self, idx: usize) -> f64 {
        match &self.disc {
            Discretization::Cartesian(_) => self.density[idx],
            Discretization::Radial(m) => self.density[idx] * m.radius(idx).powi(m.dim as i32 - 1),
        }
    }

    /// Whether the full stencil of `idx` exists.
    pub fn has_stencil(&self, idx: usize) -> bool {
        match &self.disc {
            Discretization::Cartesian(g) => !g.on_boundary(idx),
            Discretization::Radial(m) => idx + 1 < m.nodes,
        }
    }

    /// Stencil neighbours of `idx` (excluding itself).
    pub fn neighbours(&self, idx: usize, out: &mut Vec<usize>) {
        out.clear();
        match &self.disc {
            Discretization::Cartesian(g) => {
                let n = g.nodes as isize;
                let st = [n * n, n, 1];
                let p = idx as isize;
                for a in 0..3 {
                    out.push((p + st[a]) as usize);
                    out.push((p - st[a]) as usize);
                    for b in (a + 1)..3 {
                        for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            out.push((p + sa * st[a] + sb * st[b]) as usize);
                        }
                    }
                }
            }
            Discretization::Radial(m) => {
                if idx > 0 {
                    out.push(idx - 1);
                }
                if idx + 1 < m.nodes {
                    out.push(idx + 1);
                }
            }
        }
    }

    /// (M v) at a node with a full stencil.
    #[inline]
    pub fn apply_at(&self, v: &[f64], idx: usize) -> f64 {
        match &self.coef {
            Coefficients::Cartesian(a) => {
                let g = self.disc.cartesian().unwrap();
                let n = g.nodes as isize;
                let h2 = g.spacing() * g.spacing();
                let st = [n * n, n, 1];
                let p = idx as isize;
                let vp = v[idx];
                let ap = &a[idx];
                let mut acc = 0.0;
                for i in 0..3 {
                    let d = sym_index(i, i);
                    let up = (p + st[i]) as usize;
                    let dn = (p - st[i]) as usize;
                    acc += 0.5 * (ap[d] + a[up][d]) * (v[up] - vp) - 0.5 * (ap[d] + a[dn][d]) * (vp - v[dn]);
                }
                acc /= h2;
                let mut cross = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        if i == j {
                            continue;
                        }
                        let q = sym_index(i, j);
                        let up = p + st[i];
                        let dn = p - st[i];
                        cross += a[up as usize][q] * (v[(up + st[j]) as usize] - v[(up - st[j]) as usize])
                            - a[dn as usize][q] * (v[(dn + st[j]) as usize] - v[(dn - st[j]) as usize]);
                    }
                }
                acc + cross / (4.0 * h2)
            }
            Coefficients::Radial(faces) => {
                let h2 = self.disc.spacing().powi(2);
                let lo = if idx > 0 { faces[idx] * (v[idx] - v[idx - 1]) } else { 0.0 };
                faces[idx + 1] * (v[idx + 1] - v[idx]) / h2 - lo / h2
            }
        }
    }

    /// Diagonal entry M_pp.
    #[inline]
    pub fn diagonal(&self, idx: usize) -> f64 {
        match &self.coef {
            Coefficients::Cartesian(a) => {
                let g = self.disc.cartesian().unwrap();
                let n = g.nodes;
                let h2 = g.spacing() * g.spacing();
                let st = [n * n, n, 1];
                let mut acc = 0.0;
                for i in 0..3 {
                    let d = sym_index(i, i);
                    acc -= 0.5 * (2.0 * a[idx][d] + a[idx + st[i]][d] + a[idx - st[i]][d]);
                }
                acc / h2
            }
            Coefficients::Radial(faces) => {
                let h2 = self.disc.spacing().powi(2);
                let lo = if idx > 0 { faces[idx] } else { 0.0 };
                -(faces[idx + 1] + lo) / h2
            }
        }
    }
}

/// Laplace-Beltrami of `u`. Divergence form where the full stencil exists,
/// non-divergence form with one-sided differences on the edge of the grid.
pub fn laplace_beltrami(g: &MetricField, u: &ScalarField) -> Result<ScalarField> {
    g.disc().ensure_same(u.disc())?;
    let op = DivergenceOperator::new(g);
    let vals = u.values();
    let disc = *g.disc();
    let mut out = vec![0.0; disc.len()];
    match &disc {
        Discretization::Cartesian(grid) => {
            let data = g.cartesian().unwrap();
            let fd = FdEngine::new(*grid, StencilOrder::Second);
            for (idx, slot) in out.iter_mut().enumerate() {
                if op.has_stencil(idx) {
                    *slot = op.apply_at(vals, idx) / op.weight(idx);
                } else {
                    let mj = metric_jet_fd(&fd, data, idx);
                    let uj = fd.jet(idx, |i| [vals[i]]);
                    *slot = nondivergence_laplacian(&mj.g, &mj.dg, &uj.first, &uj.second);
                }
            }
        }
        Discretization::Radial(mesh) => {
            for (idx, slot) in out.iter_mut().enumerate().take(mesh.nodes - 1) {
                *slot = op.apply_at(vals, idx) / op.weight(idx);
            }
            let data = g.radial().unwrap();
            let a: Vec<f64> = data.iter().map(|v| v[0]).collect();
            let b: Vec<f64> = data.iter().map(|v| v[1]).collect();
            let (da, _) = radial_derivatives(mesh, &a, StencilOrder::Second);
            let (db, _) = radial_derivatives(mesh, &b, StencilOrder::Second);
            let (du, ddu) = radial_derivatives(mesh, vals, StencilOrder::Second);
            let i = mesh.nodes - 1;
            let r = mesh.radius(i);
            let nf = mesh.dim as f64;
            out[i] = ddu[i] / a[i] + du[i] / a[i] * ((nf - 1.0) * (db[i] / (2.0 * b[i]) + 1.0 / r) - da[i] / (2.0 * a[i]));
        }
    }
    ScalarField::new(disc, out)
}

/// g^{ij} (d_ij u - Gamma^k_ij d_k u).
fn nondivergence_laplacian(g: &Sym3, dg: &[Sym3; 3], du: &[[f64; 1]; 3], ddu: &[[[f64; 1]; 3]; 3]) -> f64 {
    let gi = sym_inverse(g);
    let gij = |i: usize, j: usize| gi[sym_index(i, j)];
    let d = |k: usize, i: usize, j: usize| dg[k][sym_index(i, j)];
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += gij(i, j) * ddu[i][j][0];
        }
    }
    // g^{ij} Gamma^k_ij = g^{kl} g^{ij} (d_i g_lj - d_l g_ij / 2)
    for k in 0..3 {
        let mut c = 0.0;
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    c += gij(k, l) * gij(i, j) * (d(i, l, j) - 0.5 * d(l, i, j));
                }
            }
        }
        acc -= c * du[k][0];
    }
    acc
}
