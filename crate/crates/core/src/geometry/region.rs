use crate::error::{Error, Result};

use super::discretization::{norm, Discretization};
use super::field::ScalarField;

/// A set of nodes, stored as a mask over the discretization.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    disc: Discretization,
    mask: Vec<bool>,
}

impl Region {
    pub fn from_mask(disc: Discretization, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != disc.len() {
            return Err(Error::DiscretizationMismatch);
        }
        Ok(Self { disc, mask })
    }

    pub fn from_fn(disc: Discretization, f: impl Fn(usize) -> bool) -> Self {
        Self { disc, mask: (0..disc.len()).map(f).collect() }
    }

    pub fn whole(disc: Discretization) -> Self {
        Self { disc, mask: vec![true; disc.len()] }
    }

    pub fn empty(disc: Discretization) -> Self {
        Self { disc, mask: vec![false; disc.len()] }
    }

    /// Closed ball of radius `radius` about the origin.
    pub fn ball(disc: Discretization, radius: f64) -> Self {
        Self::from_fn(disc, |i| disc.radius(i) <= radius)
    }

    /// Closed ball about `center`; radial meshes only accept the origin.
    pub fn ball_at(disc: Discretization, center: [f64; 3], radius: f64) -> Result<Self> {
        match &disc {
            Discretization::Cartesian(g) => Ok(Self::from_fn(disc, |i| {
                let p = g.point(i);
                norm([p[0] - center[0], p[1] - center[1], p[2] - center[2]]) <= radius
            })),
            Discretization::Radial(_) => {
                if center != [0.0; 3] {
                    return Err(Error::Unsupported("off-center balls on a radial mesh".into()));
                }
                Ok(Self::ball(disc, radius))
            }
        }
    }

    /// Nodes with inner <= |x| <= outer.
    pub fn annulus(disc: Discretization, inner: f64, outer: f64) -> Self {
        Self::from_fn(disc, |i| {
            let r = disc.radius(i);
            r >= inner && r <= outer
        })
    }

    /// Nodes of a Cartesian grid with lo <= x <= hi componentwise.
    pub fn coordinate_box(disc: Discretization, lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        let g = *disc.cartesian().ok_or_else(|| Error::Unsupported("boxes on a radial mesh".into()))?;
        Ok(Self::from_fn(disc, |i| {
            let p = g.point(i);
            (0..3).all(|a| p[a] >= lo[a] && p[a] <= hi[a])
        }))
    }

    /// Nodes where the field is nonzero.
    pub fn support(field: &ScalarField) -> Self {
        Self { disc: *field.disc(), mask: field.values().iter().map(|&v| v != 0.0).collect() }
    }

    /// Nodes whose whole 3x3x3 (or 3-point radial) neighbourhood lies in the region
    /// and off the edge of the discretization.
    pub fn interior(&self) -> Self {
        match &self.disc {
            Discretization::Cartesian(g) => {
                let n = g.nodes;
                Self::from_fn(self.disc, |idx| {
                    if !self.mask[idx] {
                        return false;
                    }
                    let [i, j, k] = g.coords(idx);
                    if [i, j, k].iter().any(|&c| c == 0 || c == n - 1) {
                        return false;
                    }
                    for di in 0..3 {
                        for dj in 0..3 {
                            for dk in 0..3 {
                                if !self.mask[g.index(i + di - 1, j + dj - 1, k + dk - 1)] {
                                    return false;
                                }
                            }
                        }
                    }
                    true
                })
            }
            Discretization::Radial(m) => Self::from_fn(self.disc, |i| {
                if !self.mask[i] || i + 1 >= m.nodes {
                    return false;
                }
                let inner_ok = if i == 0 {
                    m.inner == super::discretization::InnerBoundary::Origin
                } else {
                    self.mask[i - 1]
                };
                inner_ok && self.mask[i + 1]
            }),
        }
    }

    /// Region grown by `layers` nodes in the sup norm.
    pub fn dilate(&self, layers: usize) -> Self {
        match &self.disc {
            Discretization::Cartesian(g) => {
                let n = g.nodes as isize;
                let l = layers as isize;
                let mut out = self.mask.clone();
                for idx in 0..self.mask.len() {
                    if !self.mask[idx] {
                        continue;
                    }
                    let [i, j, k] = g.coords(idx).map(|c| c as isize);
                    for a in (i - l).max(0)..=(i + l).min(n - 1) {
                        for b in (j - l).max(0)..=(j + l).min(n - 1) {
                            for c in (k - l).max(0)..=(k + l).min(n - 1) {
                                out[g.index(a as usize, b as usize, c as usize)] = true;
                            }
                        }
                    }
                }
                Self { disc: self.disc, mask: out }
            }
            Discretization::Radial(m) => {
                let mut out = self.mask.clone();
                for i in 0..m.nodes {
                    if self.mask[i] {
                        for o in i.saturating_sub(layers)..=(i + layers).min(m.nodes - 1) {
                            out[o] = true;
                        }
                    }
                }
                Self { disc: self.disc, mask: out }
            }
        }
    }

    pub fn union(&self, other: &Region) -> Result<Self> {
        self.disc.ensure_same(&other.disc)?;
        Ok(Self { disc: self.disc, mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect() })
    }

    pub fn intersect(&self, other: &Region) -> Result<Self> {
        self.disc.ensure_same(&other.disc)?;
        Ok(Self { disc: self.disc, mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect() })
    }

    pub fn complement(&self) -> Self {
        Self { disc: self.disc, mask: self.mask.iter().map(|m| !m).collect() }
    }

    pub fn disc(&self) -> &Discretization {
        &self.disc
    }

    #[inline]
    pub fn contains(&self, idx: usize) -> bool {
        self.mask[idx]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    /// Largest node radius in the region.
    pub fn max_radius(&self) -> f64 {
        self.nodes().map(|i| self.disc.radius(i)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::discretization::CartesianGrid;

    #[test]
    fn interior_drops_one_layer() {
        let d = Discretization::Cartesian(CartesianGrid::new(1.0, 16).unwrap());
        let w = Region::whole(d);
        assert_eq!(w.interior().count(), 14 * 14 * 14);
        assert_eq!(w.interior().dilate(1), w);
    }

    #[test]
    fn set_algebra() {
        let d = Discretization::Cartesian(CartesianGrid::new(1.0, 21).unwrap());
        let a = Region::ball(d, 0.5);
        let b = Region::annulus(d, 0.3, 0.9);
        let u = a.union(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(u.count() + i.count(), a.count() + b.count());
        assert_eq!(a.complement().intersect(&a).unwrap().count(), 0);
    }
}
