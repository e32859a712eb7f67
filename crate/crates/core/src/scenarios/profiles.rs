use std::sync::Arc;

use crate::geometry::RadialProfile;

/// Binomial coefficient as a float.
fn binom(k: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// Newtonian potential in R^n of rho(r) = r^beta (1 - r^2/a^2)^k on r < a,
/// scaled so that it equals r^{2-n} outside the ball.
///
/// With this scaling -Laplace(phi) = density(r).
#[derive(Clone, Debug)]
pub struct PolyPotential {
    pub n: usize,
    pub beta: f64,
    pub k: u32,
    pub a: f64,
    coeffs: Vec<f64>,
    total: f64,
}

impl PolyPotential {
    pub fn new(n: usize, beta: f64, k: u32, a: f64) -> Self {
        assert!(n >= 3 && beta > -2.0 && a > 0.0);
        let coeffs: Vec<f64> = (0..=k).map(|j| binom(k, j) * (-1f64).powi(j as i32) / a.powi(2 * j as i32)).collect();
        let nf = n as f64;
        let total = coeffs.iter().enumerate().map(|(j, c)| c * a.powf(beta + 2.0 * j as f64 + nf) / (beta + 2.0 * j as f64 + nf)).sum();
        Self { n, beta, k, a, coeffs, total }
    }

    /// Smooth compactly supported density, beta = 0.
    pub fn smooth(n: usize, k: u32, a: f64) -> Self {
        Self::new(n, 0.0, k, a)
    }

    fn norm(&self) -> f64 {
        (self.n as f64 - 2.0) / self.total
    }

    /// The normalized density.
    pub fn density(&self, r: f64) -> f64 {
        if r >= self.a {
            return 0.0;
        }
        self.norm() * r.powf(self.beta) * (1.0 - r * r / (self.a * self.a)).powi(self.k as i32)
    }

    /// Normalized enclosed mass, int_0^r density s^{n-1} ds.
    fn enclosed(&self, r: f64) -> f64 {
        if r >= self.a {
            return self.n as f64 - 2.0;
        }
        let nf = self.n as f64;
        self.norm()
            * self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let e = self.beta + 2.0 * j as f64 + nf;
                    c * r.powf(e) / e
                })
                .sum::<f64>()
    }

    pub fn at_origin(&self) -> f64 {
        self.value(0.0)
    }
}

impl RadialProfile for PolyPotential {
    fn jet(&self, r: f64) -> [f64; 3] {
        let nf = self.n as f64;
        if r >= self.a {
            let v = r.powf(2.0 - nf);
            return [v, (2.0 - nf) * v / r, (2.0 - nf) * (1.0 - nf) * v / (r * r)];
        }
        let mut inner = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = self.beta + 2.0 * j as f64;
            inner += c * (self.a.powf(e + 2.0) - r.powf(e + 2.0)) / ((e + nf) * (e + 2.0));
        }
        let value = self.a.powf(2.0 - nf) + self.norm() * inner;
        if r == 0.0 {
            return [value, 0.0, f64::NAN];
        }
        let m = self.enclosed(r);
        let d1 = -m / r.powf(nf - 1.0);
        let d2 = -self.density(r) + (nf - 1.0) * m / r.powf(nf);
        [value, d1, d2]
    }
}

/// 1 + sum_i c_i phi_i(r).
#[derive(Clone, Debug)]
pub struct LinearPotential {
    pub terms: Vec<(f64, Arc<PolyPotential>)>,
}

impl LinearPotential {
    /// -Laplace of the profile.
    pub fn source(&self, r: f64) -> f64 {
        self.terms.iter().map(|(c, p)| c * p.density(r)).sum()
    }

    /// Coefficient of r^{2-n} at infinity.
    pub fn decay_coefficient(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c).sum()
    }
}

impl RadialProfile for LinearPotential {
    fn jet(&self, r: f64) -> [f64; 3] {
        let mut out = [1.0, 0.0, 0.0];
        for (c, p) in &self.terms {
            let j = p.jet(r);
            for q in 0..3 {
                out[q] += c * j[q];
            }
        }
        out
    }
}

/// Radius regularized inside r1: equals r for r >= r1 and is an even C^2
/// polynomial below, bounded below by 3 r1 / 8.
#[derive(Clone, Copy, Debug)]
pub struct RegularizedRadius {
    pub r1: f64,
}

impl RegularizedRadius {
    pub fn jet(&self, r: f64) -> [f64; 3] {
        if r >= self.r1 {
            return [r, 1.0, 0.0];
        }
        let t = r / self.r1;
        [
            self.r1 * (0.375 + 0.75 * t * t - 0.125 * t.powi(4)),
            1.5 * t - 0.5 * t.powi(3),
            (1.5 - 1.5 * t * t) / self.r1,
        ]
    }
}

/// 1 + (m/2) rho(r)^{2-n}, the Schwarzschild conformal factor with the
/// singular core replaced by a smooth cap inside r1.
#[derive(Clone, Copy, Debug)]
pub struct SchwarzschildFactor {
    pub n: usize,
    pub mass: f64,
    pub radius: RegularizedRadius,
}

impl RadialProfile for SchwarzschildFactor {
    fn jet(&self, r: f64) -> [f64; 3] {
        let e = 2.0 - self.n as f64;
        let [rho, d, dd] = self.radius.jet(r);
        let q = rho.powf(e);
        let dq = e * q / rho * d;
        let ddq = e * (e - 1.0) * q / (rho * rho) * d * d + e * q / rho * dd;
        let h = 0.5 * self.mass;
        [1.0 + h * q, h * dq, h * ddq]
    }
}

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C^infinity in between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// 1 + c r^gamma eta(r) with eta = 1 on [0, R/2], 0 beyond R.
#[derive(Clone, Copy, Debug)]
pub struct RoughBumpProfile {
    pub amplitude: f64,
    pub gamma: f64,
    pub radius: f64,
}

impl RoughBumpProfile {
    pub fn value(&self, r: f64) -> f64 {
        let half = 0.5 * self.radius;
        let eta = 1.0 - smooth_step((r - half) / half);
        1.0 + self.amplitude * r.powf(self.gamma) * eta
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn check_jet(p: &dyn RadialProfile, r: f64) {
        let d = 1e-5 * r.max(1.0);
        let [f, df, ddf] = p.jet(r);
        let fp = p.value(r + d);
        let fm = p.value(r - d);
        assert!(((fp - fm) / (2.0 * d) - df).abs() < 1e-6 * (1.0 + df.abs()), "d1 at {r}");
        assert!(((fp - 2.0 * f + fm) / (d * d) - ddf).abs() < 1e-3 * (1.0 + ddf.abs()), "d2 at {r}");
    }

    #[test]
    fn potential_solves_poisson_and_matches_exterior() {
        for n in 3..=6 {
            for beta in [0.0, -1.25] {
                let p = PolyPotential::new(n, beta, 3, 0.8);
                let nf = n as f64;
                for r in [0.2, 0.5, 0.79, 1.3] {
                    check_jet(&p, r);
                    let [_, d1, d2] = p.jet(r);
                    let lap = d2 + (nf - 1.0) * d1 / r;
                    assert!((lap + p.density(r)).abs() < 1e-10 * (1.0 + p.density(r)), "n={n} r={r}");
                }
                let just_in = p.value(0.8 - 1e-9);
                assert!((just_in - 0.8f64.powf(2.0 - nf)).abs() < 1e-7);
                assert!((p.value(2.0) - 2f64.powf(2.0 - nf)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn schwarzschild_factor_is_exact_outside_cap() {
        let f = SchwarzschildFactor { n: 3, mass: 1.0, radius: RegularizedRadius { r1: 1.0 } };
        assert!((f.value(2.0) - 1.25).abs() < 1e-15);
        for r in [0.3, 0.9, 1.5] {
            check_jet(&f, r);
        }
        assert!(f.value(0.0).is_finite());
    }

    #[test]
    fn smooth_step_limits() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }
}
