use std::fmt::Debug;
use std::sync::Arc;

/// A smooth function of the radius with its first two derivatives.
///
/// Used as the closed form of a conformally flat exterior, g = psi(r) delta,
/// and as the closed form of radial scalar fields.
pub trait RadialProfile: Send + Sync + Debug {
    /// Returns (psi, psi', psi'') at radius `r > 0`.
    fn jet(&self, r: f64) -> [f64; 3];

    fn value(&self, r: f64) -> f64 {
        self.jet(r)[0]
    }
}

pub type SharedProfile = Arc<dyn RadialProfile>;

#[derive(Clone, Copy, Debug)]
pub struct ConstantProfile(pub f64);

impl RadialProfile for ConstantProfile {
    fn jet(&self, _r: f64) -> [f64; 3] {
        [self.0, 0.0, 0.0]
    }
}

/// `base(r)^k`.
#[derive(Clone, Debug)]
pub struct PowerProfile {
    pub base: SharedProfile,
    pub exponent: f64,
}

impl RadialProfile for PowerProfile {
    fn jet(&self, r: f64) -> [f64; 3] {
        let [u, du, ddu] = self.base.jet(r);
        let k = self.exponent;
        let p = u.powf(k - 2.0);
        [p * u * u, k * p * u * du, k * (k - 1.0) * p * du * du + k * p * u * ddu]
    }
}

/// Pointwise product of two profiles.
#[derive(Clone, Debug)]
pub struct ProductProfile(pub SharedProfile, pub SharedProfile);

impl RadialProfile for ProductProfile {
    fn jet(&self, r: f64) -> [f64; 3] {
        let [a, da, dda] = self.0.jet(r);
        let [b, db, ddb] = self.1.jet(r);
        [a * b, da * b + a * db, dda * b + 2.0 * da * db + a * ddb]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug)]
    struct Quadratic;
    impl RadialProfile for Quadratic {
        fn jet(&self, r: f64) -> [f64; 3] {
            [1.0 + r * r, 2.0 * r, 2.0]
        }
    }

    #[test]
    fn power_and_product_match_finite_differences() {
        let p = PowerProfile { base: Arc::new(Quadratic), exponent: 4.0 };
        let q = ProductProfile(Arc::new(p.clone()), Arc::new(Quadratic));
        for prof in [&p as &dyn RadialProfile, &q] {
            let r = 0.7;
            let d = 1e-4;
            let [f, df, ddf] = prof.jet(r);
            let fp = prof.value(r + d);
            let fm = prof.value(r - d);
            assert!(((fp - fm) / (2.0 * d) - df).abs() < 1e-6 * df.abs().max(1.0));
            assert!(((fp - 2.0 * f + fm) / (d * d) - ddf).abs() < 1e-4 * ddf.abs().max(1.0));
        }
    }
}
