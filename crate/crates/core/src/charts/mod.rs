//! Curvilinear charts on Euclidean 3-space.
//!
//! Every tensor in this crate is stored in coordinate components of one of the
//! three built-in charts. Physical (orthonormal-frame) components only show up
//! when a field is converted to cartesian components for homogeneity checks.

mod divergence;
pub(crate) mod grid;
mod tensor;

pub use divergence::{
    covariant_divergence, divergence_from_partials, DivergenceBackend, FnField, InverseMetricField,
    Stencil, TensorField, DEFAULT_EXTRAPOLATED_FD_STEP, DEFAULT_FD_STEP,
};
pub use grid::{BoundaryPoint, GridSpacing, SampleGrid};
pub use tensor::{Metric, Tensor2, Variance};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{pt, Error, Result};

/// A point given by its three chart coordinates.
pub type Point = Vector3<f64>;

/// Smallest admissible radius for cylindrical and spherical charts.
pub const RADIUS_FLOOR: f64 = 1e-8;
/// Smallest admissible `|sin θ|` for the spherical chart.
pub const POLAR_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    /// `(x, y, z)`
    Cartesian,
    /// `(r, θ, z)`
    Cylindrical,
    /// `(r, θ, φ)` with `θ` the polar angle.
    Spherical,
}

impl ChartKind {
    pub fn name(self) -> &'static str {
        match self {
            ChartKind::Cartesian => "cartesian",
            ChartKind::Cylindrical => "cylindrical",
            ChartKind::Spherical => "spherical",
        }
    }
}

/// Christoffel symbols of the second kind, `gamma[a][b][c] = Γ^a_bc`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Christoffel(pub [[[f64; 3]; 3]; 3]);

impl Christoffel {
    pub fn zero() -> Self {
        Self::default()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.0[a][b][c]
    }

    fn set_sym(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.0[a][b][c] = v;
        self.0[a][c][b] = v;
    }

    /// `Γ^b_ab` summed over `b`.
    pub fn contracted(&self, a: usize) -> f64 {
        (0..3).map(|b| self.0[b][a][b]).sum()
    }

    /// Christoffel symbols of an arbitrary metric from its value and partial
    /// derivatives, `Γ^a_bc = ½ g^ad (∂_b g_dc + ∂_c g_db − ∂_d g_bc)`.
    pub fn from_metric_derivatives(inverse: &Matrix3<f64>, d_metric: &[Matrix3<f64>; 3]) -> Self {
        let mut out = Self::zero();
        for a in 0..3 {
            for b in 0..3 {
                for c in b..3 {
                    let mut s = 0.0;
                    for d in 0..3 {
                        s += inverse[(a, d)]
                            * (d_metric[b][(d, c)] + d_metric[c][(d, b)] - d_metric[d][(b, c)]);
                    }
                    out.set_sym(a, b, c, 0.5 * s);
                }
            }
        }
        out
    }
}

/// One of the built-in charts. Charts are plain values; every method is a pure
/// function of its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoordinateChart {
    pub kind: ChartKind,
}

impl CoordinateChart {
    pub const CARTESIAN: Self = Self::new(ChartKind::Cartesian);
    pub const CYLINDRICAL: Self = Self::new(ChartKind::Cylindrical);
    pub const SPHERICAL: Self = Self::new(ChartKind::Spherical);

    pub const fn new(kind: ChartKind) -> Self {
        Self { kind }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Whether `x` avoids the coordinate singularities of this chart.
    pub fn is_valid(&self, x: &Point) -> bool {
        if !(x[0].is_finite() && x[1].is_finite() && x[2].is_finite()) {
            return false;
        }
        match self.kind {
            ChartKind::Cartesian => true,
            ChartKind::Cylindrical => x[0] >= RADIUS_FLOOR,
            ChartKind::Spherical => x[0] >= RADIUS_FLOOR && x[1].sin().abs() >= POLAR_FLOOR,
        }
    }

    pub fn ensure_valid(&self, x: &Point) -> Result<()> {
        if self.is_valid(x) {
            Ok(())
        } else {
            Err(Error::SingularPoint {
                chart: self.name(),
                point: pt(x),
            })
        }
    }

    /// Covariant metric components `g_ab`.
    pub fn metric(&self, x: &Point) -> Result<Matrix3<f64>> {
        self.ensure_valid(x)?;
        Ok(self.metric_unchecked(x))
    }

    fn metric_unchecked(&self, x: &Point) -> Matrix3<f64> {
        match self.kind {
            ChartKind::Cartesian => Matrix3::identity(),
            ChartKind::Cylindrical => Matrix3::from_diagonal(&Vector3::new(1.0, x[0] * x[0], 1.0)),
            ChartKind::Spherical => {
                let r2 = x[0] * x[0];
                let s = x[1].sin();
                Matrix3::from_diagonal(&Vector3::new(1.0, r2, r2 * s * s))
            }
        }
    }

    /// Contravariant metric components `g^ab`.
    pub fn inverse_metric(&self, x: &Point) -> Result<Matrix3<f64>> {
        self.ensure_valid(x)?;
        Ok(self.inverse_metric_unchecked(x))
    }

    fn inverse_metric_unchecked(&self, x: &Point) -> Matrix3<f64> {
        match self.kind {
            ChartKind::Cartesian => Matrix3::identity(),
            ChartKind::Cylindrical => {
                Matrix3::from_diagonal(&Vector3::new(1.0, 1.0 / (x[0] * x[0]), 1.0))
            }
            ChartKind::Spherical => {
                let r2 = x[0] * x[0];
                let s = x[1].sin();
                Matrix3::from_diagonal(&Vector3::new(1.0, 1.0 / r2, 1.0 / (r2 * s * s)))
            }
        }
    }

    /// Both metric representations bundled.
    pub fn metric_pair(&self, x: &Point) -> Result<Metric> {
        self.ensure_valid(x)?;
        Ok(Metric::from_parts(
            self.metric_unchecked(x),
            self.inverse_metric_unchecked(x),
        ))
    }

    /// Partial derivatives `∂_c g^ab`, indexed by `c`.
    pub fn inverse_metric_partials(&self, x: &Point) -> Result<[Matrix3<f64>; 3]> {
        self.ensure_valid(x)?;
        let z = Matrix3::zeros();
        Ok(match self.kind {
            ChartKind::Cartesian => [z; 3],
            ChartKind::Cylindrical => {
                let r = x[0];
                let dr = Matrix3::from_diagonal(&Vector3::new(0.0, -2.0 / (r * r * r), 0.0));
                [dr, z, z]
            }
            ChartKind::Spherical => {
                let r = x[0];
                let (s, c) = x[1].sin_cos();
                let r3 = r * r * r;
                let dr = Matrix3::from_diagonal(&Vector3::new(0.0, -2.0 / r3, -2.0 / (r3 * s * s)));
                let dth =
                    Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, -2.0 * c / (r * r * s * s * s)));
                [dr, dth, z]
            }
        })
    }

    /// Analytic Christoffel symbols of the Euclidean metric in this chart.
    pub fn christoffel(&self, x: &Point) -> Result<Christoffel> {
        self.ensure_valid(x)?;
        let mut g = Christoffel::zero();
        match self.kind {
            ChartKind::Cartesian => {}
            ChartKind::Cylindrical => {
                let r = x[0];
                g.set_sym(0, 1, 1, -r);
                g.set_sym(1, 0, 1, 1.0 / r);
            }
            ChartKind::Spherical => {
                let r = x[0];
                let (s, c) = x[1].sin_cos();
                g.set_sym(0, 1, 1, -r);
                g.set_sym(0, 2, 2, -r * s * s);
                g.set_sym(1, 0, 1, 1.0 / r);
                g.set_sym(1, 2, 2, -s * c);
                g.set_sym(2, 0, 2, 1.0 / r);
                g.set_sym(2, 1, 2, c / s);
            }
        }
        Ok(g)
    }

    pub fn to_cartesian(&self, x: &Point) -> Point {
        match self.kind {
            ChartKind::Cartesian => *x,
            ChartKind::Cylindrical => {
                let (s, c) = x[1].sin_cos();
                Point::new(x[0] * c, x[0] * s, x[2])
            }
            ChartKind::Spherical => {
                let (st, ct) = x[1].sin_cos();
                let (sp, cp) = x[2].sin_cos();
                Point::new(x[0] * st * cp, x[0] * st * sp, x[0] * ct)
            }
        }
    }

    /// Inverse of [`to_cartesian`](Self::to_cartesian); angles land in
    /// `(-π, π]` (azimuth) and `[0, π]` (polar).
    pub fn from_cartesian(&self, p: &Point) -> Point {
        match self.kind {
            ChartKind::Cartesian => *p,
            ChartKind::Cylindrical => Point::new(p[0].hypot(p[1]), p[1].atan2(p[0]), p[2]),
            ChartKind::Spherical => {
                let rho = p[0].hypot(p[1]);
                Point::new(rho.hypot(p[2]), rho.atan2(p[2]), p[1].atan2(p[0]))
            }
        }
    }

    /// `∂p^i/∂x^a`: cartesian position differentiated by chart coordinates.
    pub fn jacobian(&self, x: &Point) -> Matrix3<f64> {
        match self.kind {
            ChartKind::Cartesian => Matrix3::identity(),
            ChartKind::Cylindrical => {
                let r = x[0];
                let (s, c) = x[1].sin_cos();
                Matrix3::new(c, -r * s, 0.0, s, r * c, 0.0, 0.0, 0.0, 1.0)
            }
            ChartKind::Spherical => {
                let r = x[0];
                let (st, ct) = x[1].sin_cos();
                let (sp, cp) = x[2].sin_cos();
                Matrix3::new(
                    st * cp,
                    r * ct * cp,
                    -r * st * sp,
                    st * sp,
                    r * ct * sp,
                    r * st * cp,
                    ct,
                    -r * st,
                    0.0,
                )
            }
        }
    }

    /// `∂x^a/∂p^i`, the inverse of [`jacobian`](Self::jacobian).
    pub fn inverse_jacobian(&self, x: &Point) -> Result<Matrix3<f64>> {
        self.ensure_valid(x)?;
        Ok(match self.kind {
            ChartKind::Cartesian => Matrix3::identity(),
            ChartKind::Cylindrical => {
                let r = x[0];
                let (s, c) = x[1].sin_cos();
                Matrix3::new(c, s, 0.0, -s / r, c / r, 0.0, 0.0, 0.0, 1.0)
            }
            ChartKind::Spherical => {
                let r = x[0];
                let (st, ct) = x[1].sin_cos();
                let (sp, cp) = x[2].sin_cos();
                Matrix3::new(
                    st * cp,
                    st * sp,
                    ct,
                    ct * cp / r,
                    ct * sp / r,
                    -st / r,
                    -sp / (r * st),
                    cp / (r * st),
                    0.0,
                )
            }
        })
    }

    /// Coordinates in `to` of the point with coordinates `x` in `self`.
    /// Identical charts return `x` untouched.
    pub fn convert_point(&self, to: &CoordinateChart, x: &Point) -> Point {
        if self.kind == to.kind {
            *x
        } else {
            to.from_cartesian(&self.to_cartesian(x))
        }
    }

    /// `∂x'^a/∂x^b` for the transition from `self` to `to`, evaluated at `x`
    /// given in `self` coordinates.
    pub fn transition_jacobian(&self, to: &CoordinateChart, x: &Point) -> Result<Matrix3<f64>> {
        self.ensure_valid(x)?;
        if self.kind == to.kind {
            return Ok(Matrix3::identity());
        }
        let y = self.convert_point(to, x);
        let inv = to
            .inverse_jacobian(&y)
            .map_err(|_| Error::Singularity { point: pt(x) })?;
        Ok(inv * self.jacobian(x))
    }

    /// Re-express `t`, given at `x` in `self` coordinates, in the `to` chart.
    pub fn transform_tensor(
        &self,
        t: &Tensor2,
        to: &CoordinateChart,
        x: &Point,
    ) -> Result<Tensor2> {
        let lam = self.transition_jacobian(to, x)?;
        let inv = lam
            .try_inverse()
            .ok_or(Error::Singularity { point: pt(x) })?;
        let m = &t.components;
        let out = match t.variance {
            Variance::Contravariant => lam * m * lam.transpose(),
            Variance::Covariant => inv.transpose() * m * inv,
            Variance::Mixed => lam * m * inv,
        };
        Ok(Tensor2::new(out, t.variance))
    }

    /// Contravariant vector components re-expressed in `to`.
    pub fn transform_vector(
        &self,
        v: &Vector3<f64>,
        to: &CoordinateChart,
        x: &Point,
    ) -> Result<Vector3<f64>> {
        Ok(self.transition_jacobian(to, x)? * v)
    }
}

/// Free-function form of [`CoordinateChart::christoffel`].
pub fn christoffel(chart: &CoordinateChart, x: &Point) -> Result<Christoffel> {
    chart.christoffel(x)
}

/// Free-function form of [`CoordinateChart::transform_tensor`].
pub fn transform_tensor(
    t: &Tensor2,
    from: &CoordinateChart,
    to: &CoordinateChart,
    x: &Point,
) -> Result<Tensor2> {
    from.transform_tensor(t, to, x)
}
