use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index placement of a second-order tensor's components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    /// `T^ab`
    Contravariant,
    /// `T_ab`
    Covariant,
    /// `T^a_b`
    Mixed,
}

/// A second-order tensor at a point, stored as coordinate components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor2 {
    pub components: Matrix3<f64>,
    pub variance: Variance,
}

impl Tensor2 {
    pub fn new(components: Matrix3<f64>, variance: Variance) -> Self {
        Self {
            components,
            variance,
        }
    }

    pub fn contravariant(components: Matrix3<f64>) -> Self {
        Self::new(components, Variance::Contravariant)
    }

    pub fn covariant(components: Matrix3<f64>) -> Self {
        Self::new(components, Variance::Covariant)
    }

    pub fn mixed(components: Matrix3<f64>) -> Self {
        Self::new(components, Variance::Mixed)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.abs().max()
    }

    /// Largest `|T[i][j] - T[j][i]|`.
    pub fn asymmetry(&self) -> f64 {
        (self.components - self.components.transpose()).abs().max()
    }

    /// Symmetry test for contravariant or covariant components, relative to
    /// the largest entry. Mixed components of a symmetric tensor are not
    /// symmetric matrices in general and are rejected here.
    pub fn is_symmetric(&self) -> bool {
        self.variance != Variance::Mixed && self.asymmetry() <= 1e-14 * self.max_abs()
    }

    /// Raise or lower indices with `metric` to reach `target` variance.
    pub fn to_variance(&self, target: Variance, metric: &Metric) -> Tensor2 {
        use Variance::*;
        let m = &self.components;
        let (g, gi) = (&metric.lower, &metric.raise);
        let out = match (self.variance, target) {
            (a, b) if a == b => *m,
            (Contravariant, Mixed) => m * g,
            (Contravariant, Covariant) => g * m * g,
            (Mixed, Contravariant) => m * gi,
            (Mixed, Covariant) => g * m,
            (Covariant, Mixed) => gi * m,
            (Covariant, Contravariant) => gi * m * gi,
            _ => unreachable!(),
        };
        Tensor2::new(out, target)
    }

    /// Trace of the mixed form.
    pub fn trace(&self, metric: &Metric) -> f64 {
        self.to_variance(Variance::Mixed, metric).components.trace()
    }

    /// Determinant of the mixed form; chart-independent.
    pub fn determinant(&self, metric: &Metric) -> f64 {
        self.to_variance(Variance::Mixed, metric)
            .components
            .determinant()
    }
}

/// A metric at a point, holding both `g_ab` and `g^ab`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub lower: Matrix3<f64>,
    pub raise: Matrix3<f64>,
}

impl Metric {
    /// Builds a metric from covariant components, which must be symmetric
    /// positive-definite.
    pub fn new(lower: Matrix3<f64>) -> Result<Self> {
        if (lower - lower.transpose()).abs().max() > 1e-12 * lower.abs().max().max(1.0) {
            return Err(Error::Input("metric is not symmetric".into()));
        }
        if lower.cholesky().is_none() {
            return Err(Error::Input("metric is not positive-definite".into()));
        }
        let raise = lower
            .try_inverse()
            .ok_or_else(|| Error::Input("metric is singular".into()))?;
        Ok(Self { lower, raise })
    }

    pub fn from_parts(lower: Matrix3<f64>, raise: Matrix3<f64>) -> Self {
        Self { lower, raise }
    }

    pub fn euclidean() -> Self {
        Self::from_parts(Matrix3::identity(), Matrix3::identity())
    }

    /// `sqrt(g_ab v^a v^b)` for contravariant `v`.
    pub fn vector_norm(&self, v: &Vector3<f64>) -> f64 {
        v.dot(&(self.lower * v)).max(0.0).sqrt()
    }

    /// `sqrt(T^ab T^cd g_ac g_bd)` for contravariant `t`.
    pub fn tensor_norm(&self, t: &Matrix3<f64>) -> f64 {
        (self.lower * t * self.lower)
            .component_mul(t)
            .sum()
            .max(0.0)
            .sqrt()
    }
}
