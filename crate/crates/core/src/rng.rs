//! Seeded, platform-independent random sampling.
//!
//! All randomized material sampling and property tests draw from
//! [`SeededRng`], a ChaCha20 stream seeded through `seed_from_u64`. Uniform
//! reals take the top 53 bits of each `u64`, so the stream of reals is fixed
//! by the seed alone.

use nalgebra::{Matrix3, Vector3};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Identifier recorded in every report.
pub const PRNG_ALGORITHM: &str = "chacha20-seed_from_u64-u53";

#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha20Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn matrix(&mut self, bound: f64) -> Matrix3<f64> {
        Matrix3::from_fn(|_, _| self.range(-bound, bound))
    }

    pub fn symmetric(&mut self, bound: f64) -> Matrix3<f64> {
        let m = self.matrix(bound);
        (m + m.transpose()) * 0.5
    }

    pub fn vector(&mut self, bound: f64) -> Vector3<f64> {
        Vector3::from_fn(|_, _| self.range(-bound, bound))
    }

    pub fn unit_vector(&mut self) -> Vector3<f64> {
        loop {
            let v = self.vector(1.0);
            let n = v.norm();
            if n > 1e-3 && n <= 1.0 {
                return v / n;
            }
        }
    }

    /// A random orientation-preserving matrix with determinant uniform in
    /// `[det_lo, det_hi]`.
    pub fn deformation_gradient(&mut self, det_lo: f64, det_hi: f64) -> Matrix3<f64> {
        loop {
            let m = Matrix3::identity() + self.matrix(0.5);
            let d = m.determinant();
            if d < 0.2 {
                continue;
            }
            let target = self.range(det_lo, det_hi);
            return m * (target / d).cbrt();
        }
    }
}
