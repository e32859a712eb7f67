use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Area of the unit (n-1)-sphere in R^n.
pub fn sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / libm::tgamma(half)
}

/// Uniform grid on the cube [-L, L]^3 with `nodes` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartesianGrid {
    pub half_width: f64,
    pub nodes: usize,
}

impl CartesianGrid {
    pub const MIN_NODES: usize = 16;

    pub fn new(half_width: f64, nodes: usize) -> Result<Self> {
        if nodes < Self::MIN_NODES {
            return Err(Error::InvalidInput(format!(
                "cartesian grid needs at least {} nodes per axis, got {nodes}",
                Self::MIN_NODES
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidInput(format!("bad half width {half_width}")));
        }
        Ok(Self { half_width, nodes })
    }

    /// Grid covering [-L, L]^3 whose spacing is as close to `h` as possible
    /// without exceeding it.
    pub fn with_spacing(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!("bad spacing {h}")));
        }
        let cells = (2.0 * half_width / h - 1e-9).ceil().max(1.0) as usize;
        Self::new(half_width, cells + 1)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nodes * self.nodes * self.nodes
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.nodes + j) * self.nodes + k
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.nodes;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    #[inline]
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.coords(idx);
        [self.coordinate(i), self.coordinate(j), self.coordinate(k)]
    }

    /// Index range of nodes whose coordinate lies in [lo, hi], clamped to the grid.
    pub fn axis_range(&self, lo: f64, hi: f64) -> std::ops::RangeInclusive<usize> {
        let h = self.spacing();
        let a = ((lo + self.half_width) / h).ceil().max(0.0) as usize;
        let b = ((hi + self.half_width) / h).floor().min((self.nodes - 1) as f64);
        if b < 0.0 || a as f64 > b {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        a..=b as usize
    }

    pub fn on_boundary(&self, idx: usize) -> bool {
        self.coords(idx).iter().any(|&c| c == 0 || c == self.nodes - 1)
    }
}

/// What sits at the inner end of a radial mesh.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerBoundary {
    /// Mesh starts at r0 = h/2 and fields are even across the origin.
    Origin,
    /// Mesh starts at r0 > h/2; zero flux is imposed at the inner face.
    Excised,
}

/// Radial nodes r_i = r0 + i h for rotationally symmetric fields in R^n.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialMesh {
    pub dim: usize,
    pub r0: f64,
    pub h: f64,
    pub nodes: usize,
    pub inner: InnerBoundary,
}

impl RadialMesh {
    /// Mesh on (0, outer] with r0 = h/2, so the origin is a cell face.
    pub fn regular(dim: usize, outer: f64, h: f64) -> Result<Self> {
        Self::check_dim(dim)?;
        if !(h > 0.0) || !(outer > h) {
            return Err(Error::InvalidInput(format!("bad radial mesh: outer {outer}, h {h}")));
        }
        let nodes = ((outer - h / 2.0) / h + 1e-9).floor() as usize + 1;
        Ok(Self { dim, r0: h / 2.0, h, nodes, inner: InnerBoundary::Origin })
    }

    pub fn excised(dim: usize, r0: f64, outer: f64, h: f64) -> Result<Self> {
        Self::check_dim(dim)?;
        if !(r0 >= h / 2.0) || !(outer > r0 + 2.0 * h) {
            return Err(Error::InvalidInput(format!("bad excised mesh: r0 {r0}, outer {outer}, h {h}")));
        }
        let nodes = ((outer - r0) / h + 1e-9).floor() as usize + 1;
        Ok(Self { dim, r0, h, nodes, inner: InnerBoundary::Excised })
    }

    fn check_dim(dim: usize) -> Result<()> {
        if !(2..=7).contains(&dim) {
            return Err(Error::InvalidInput(format!("radial dimension must be in 2..=7, got {dim}")));
        }
        Ok(())
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        self.r0 + i as f64 * self.h
    }

    pub fn outer(&self) -> f64 {
        self.radius(self.nodes - 1)
    }
}

/// Either a 3-D Cartesian grid or a radial mesh in dimension n.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Discretization {
    Cartesian(CartesianGrid),
    Radial(RadialMesh),
}

impl Discretization {
    pub fn dim(&self) -> usize {
        match self {
            Discretization::Cartesian(_) => 3,
            Discretization::Radial(m) => m.dim,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Discretization::Cartesian(g) => g.len(),
            Discretization::Radial(m) => m.nodes,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        match self {
            Discretization::Cartesian(g) => g.spacing(),
            Discretization::Radial(m) => m.h,
        }
    }

    /// Distance of node `idx` from the origin.
    #[inline]
    pub fn radius(&self, idx: usize) -> f64 {
        match self {
            Discretization::Cartesian(g) => norm(g.point(idx)),
            Discretization::Radial(m) => m.radius(idx),
        }
    }

    /// Euclidean quadrature weight of node `idx`.
    #[inline]
    pub fn weight(&self, idx: usize) -> f64 {
        match self {
            Discretization::Cartesian(g) => g.spacing().powi(3),
            Discretization::Radial(m) => sphere_area(m.dim) * m.radius(idx).powi(m.dim as i32 - 1) * m.h,
        }
    }

    /// Largest radius r such that the sphere S_r and a two-node stencil around it
    /// stay inside the discretization.
    pub fn max_sphere_radius(&self) -> f64 {
        match self {
            Discretization::Cartesian(g) => g.half_width - 2.0 * g.spacing(),
            Discretization::Radial(m) => m.outer() - 2.0 * m.h,
        }
    }

    pub fn cartesian(&self) -> Option<&CartesianGrid> {
        match self {
            Discretization::Cartesian(g) => Some(g),
            _ => None,
        }
    }

    pub fn radial(&self) -> Option<&RadialMesh> {
        match self {
            Discretization::Radial(m) => Some(m),
            _ => None,
        }
    }

    pub fn ensure_same(&self, other: &Discretization) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DiscretizationMismatch)
        }
    }
}

#[inline]
pub fn norm(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}
