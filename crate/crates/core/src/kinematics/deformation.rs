use std::collections::BTreeMap;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::charts::{ChartKind, CoordinateChart, Point};
use crate::error::{pt, Error, Result};
use crate::poly::{Poly1, Polynomial};

/// Jacobian floor below which a deformation is rejected.
pub const JACOBIAN_FLOOR: f64 = 1e-10;

/// Built-in deformation families, each defined in its own native chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DeformationFamily {
    /// `x = A X + t` in cartesian components.
    Affine {
        matrix: [[f64; 3]; 3],
        #[serde(default)]
        translation: [f64; 3],
    },
    /// `r = sqrt(R² + a)`, `θ = Θ`, `z = λ Z`.
    CylindricalInflation { a: f64, lambda: f64 },
    /// `r = f(R)` with angles fixed.
    RadialSphere { profile: Poly1 },
    /// Cartesian components as polynomials in `(X, Y, Z)`, tables keyed by
    /// `"i.j.k"` exponent strings.
    UserPolynomial {
        components: [BTreeMap<String, f64>; 3],
    },
}

impl DeformationFamily {
    pub fn identity() -> Self {
        Self::affine(Matrix3::identity())
    }

    pub fn affine(a: Matrix3<f64>) -> Self {
        DeformationFamily::Affine {
            matrix: [
                [a[(0, 0)], a[(0, 1)], a[(0, 2)]],
                [a[(1, 0)], a[(1, 1)], a[(1, 2)]],
                [a[(2, 0)], a[(2, 1)], a[(2, 2)]],
            ],
            translation: [0.0; 3],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DeformationFamily::Affine { .. } => "affine",
            DeformationFamily::CylindricalInflation { .. } => "cylindrical_inflation",
            DeformationFamily::RadialSphere { .. } => "radial_sphere",
            DeformationFamily::UserPolynomial { .. } => "user_polynomial",
        }
    }

    pub fn native_chart(&self) -> CoordinateChart {
        match self {
            DeformationFamily::Affine { .. } | DeformationFamily::UserPolynomial { .. } => {
                CoordinateChart::CARTESIAN
            }
            DeformationFamily::CylindricalInflation { .. } => CoordinateChart::CYLINDRICAL,
            DeformationFamily::RadialSphere { .. } => CoordinateChart::SPHERICAL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Compiled {
    Affine {
        a: Matrix3<f64>,
        t: Point,
    },
    Inflation {
        a: f64,
        lambda: f64,
    },
    Sphere {
        f: Poly1,
        df: Poly1,
    },
    Poly {
        p: [Polynomial; 3],
        dp: [[Polynomial; 3]; 3],
    },
}

/// A smooth map from the reference chart to the current chart.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationField {
    pub family: DeformationFamily,
    pub reference_chart: CoordinateChart,
    pub current_chart: CoordinateChart,
    compiled: Compiled,
}

impl DeformationField {
    pub fn new(
        family: DeformationFamily,
        reference_chart: CoordinateChart,
        current_chart: CoordinateChart,
    ) -> Result<Self> {
        let compiled = match &family {
            DeformationFamily::Affine {
                matrix,
                translation,
            } => {
                let a = Matrix3::from_fn(|i, j| matrix[i][j]);
                let t = Point::from(*translation);
                if !(a.iter().all(|v| v.is_finite()) && t.iter().all(|v| v.is_finite())) {
                    return Err(Error::Input("affine parameters must be finite".into()));
                }
                Compiled::Affine { a, t }
            }
            DeformationFamily::CylindricalInflation { a, lambda } => {
                if !a.is_finite() || !lambda.is_finite() || *lambda <= 0.0 {
                    return Err(Error::Input(
                        "cylindrical_inflation needs finite a and lambda > 0".into(),
                    ));
                }
                Compiled::Inflation {
                    a: *a,
                    lambda: *lambda,
                }
            }
            DeformationFamily::RadialSphere { profile } => {
                if profile.coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Input("radial_sphere profile must be finite".into()));
                }
                Compiled::Sphere {
                    f: profile.clone(),
                    df: profile.derivative(),
                }
            }
            DeformationFamily::UserPolynomial { components } => {
                let p = [
                    Polynomial::from_table(3, &components[0])?,
                    Polynomial::from_table(3, &components[1])?,
                    Polynomial::from_table(3, &components[2])?,
                ];
                let dp = std::array::from_fn(|i| std::array::from_fn(|j| p[i].derivative(j)));
                Compiled::Poly { p, dp }
            }
        };
        Ok(Self {
            family,
            reference_chart,
            current_chart,
            compiled,
        })
    }

    /// Identity map between two copies of `chart`.
    pub fn identity(chart: CoordinateChart) -> Self {
        Self::new(DeformationFamily::identity(), chart, chart).expect("identity is well-formed")
    }

    /// All built-in families carry closed-form gradients.
    pub fn has_analytic_jacobian(&self) -> bool {
        true
    }

    fn native_map(&self, y: &Point) -> Result<Point> {
        Ok(match &self.compiled {
            Compiled::Affine { a, t } => a * y + t,
            Compiled::Inflation { a, lambda } => {
                let r2 = y[0] * y[0] + a;
                if r2 <= 0.0 {
                    return Err(Error::DegenerateDeformation {
                        point: pt(y),
                        jacobian: 0.0,
                    });
                }
                Point::new(r2.sqrt(), y[1], lambda * y[2])
            }
            Compiled::Sphere { f, .. } => Point::new(f.eval(y[0]), y[1], y[2]),
            Compiled::Poly { p, .. } => {
                let v = [y[0], y[1], y[2]];
                Point::new(p[0].evaluate(&v), p[1].evaluate(&v), p[2].evaluate(&v))
            }
        })
    }

    fn native_gradient(&self, y: &Point) -> Matrix3<f64> {
        match &self.compiled {
            Compiled::Affine { a, .. } => *a,
            Compiled::Inflation { a, lambda } => {
                Matrix3::from_diagonal(&Point::new(y[0] / (y[0] * y[0] + a).sqrt(), 1.0, *lambda))
            }
            Compiled::Sphere { df, .. } => {
                Matrix3::from_diagonal(&Point::new(df.eval(y[0]), 1.0, 1.0))
            }
            Compiled::Poly { dp, .. } => {
                let v = [y[0], y[1], y[2]];
                Matrix3::from_fn(|i, j| dp[i][j].evaluate(&v))
            }
        }
    }

    /// Identity between copies of one chart; evaluated without the round
    /// trip through the native chart so `F = I` exactly.
    fn is_identity(&self) -> bool {
        self.reference_chart.kind == self.current_chart.kind
            && matches!(&self.compiled, Compiled::Affine { a, t } if *a == Matrix3::identity() && *t == Point::zeros())
    }

    fn native(&self) -> CoordinateChart {
        self.family.native_chart()
    }

    /// `x = φ(X)` in current-chart coordinates.
    pub fn map_point(&self, x_ref: &Point) -> Result<Point> {
        self.reference_chart.ensure_valid(x_ref)?;
        if self.is_identity() {
            return Ok(*x_ref);
        }
        let native = self.native();
        let y = self.reference_chart.convert_point(&native, x_ref);
        let y_def = self.native_map(&y)?;
        native.ensure_valid(&y_def)?;
        let x = native.convert_point(&self.current_chart, &y_def);
        self.current_chart.ensure_valid(&x)?;
        Ok(x)
    }

    /// `F^a_A = ∂φ^a/∂X^A`, rows indexed by the current chart, columns by the
    /// reference chart. Rejects points where the volume ratio
    /// `det F · sqrt(det g / det G)` falls to the floor.
    pub fn deformation_gradient(&self, x_ref: &Point) -> Result<Matrix3<f64>> {
        Ok(self.gradient_and_point(x_ref)?.0)
    }

    /// Both `F` and `x = φ(X)` from one evaluation.
    pub fn gradient_and_point(&self, x_ref: &Point) -> Result<(Matrix3<f64>, Point)> {
        self.reference_chart.ensure_valid(x_ref)?;
        if self.is_identity() {
            return Ok((Matrix3::identity(), *x_ref));
        }
        let native = self.native();
        let y = self.reference_chart.convert_point(&native, x_ref);
        let y_def = self.native_map(&y)?;
        native.ensure_valid(&y_def)?;
        let x = native.convert_point(&self.current_chart, &y_def);
        self.current_chart.ensure_valid(&x)?;
        let t_in = self.reference_chart.transition_jacobian(&native, x_ref)?;
        let t_out = native.transition_jacobian(&self.current_chart, &y_def)?;
        let f = t_out * self.native_gradient(&y) * t_in;
        let j = self.volume_ratio(&f, x_ref, &x);
        if j.is_nan() || j <= JACOBIAN_FLOOR {
            return Err(Error::DegenerateDeformation {
                point: pt(x_ref),
                jacobian: j,
            });
        }
        Ok((f, x))
    }

    fn volume_ratio(&self, f: &Matrix3<f64>, x_ref: &Point, x: &Point) -> f64 {
        let scale = |c: &CoordinateChart, p: &Point| match c.kind {
            ChartKind::Cartesian => 1.0,
            ChartKind::Cylindrical => p[0],
            ChartKind::Spherical => p[0] * p[0] * p[1].sin().abs(),
        };
        f.determinant() * scale(&self.current_chart, x) / scale(&self.reference_chart, x_ref)
    }

    /// Central finite differences of [`map_point`](Self::map_point); an
    /// independent route to `F` for cross-checks away from angular branch cuts.
    pub fn deformation_gradient_fd(&self, x_ref: &Point, h: f64) -> Result<Matrix3<f64>> {
        let mut f = Matrix3::zeros();
        for c in 0..3 {
            let mut p = *x_ref;
            let mut m = *x_ref;
            p[c] += h;
            m[c] -= h;
            let d = (self.map_point(&p)? - self.map_point(&m)?) / (2.0 * h);
            f.set_column(c, &d);
        }
        Ok(f)
    }

    /// Enforces `det F > 0` (above the floor) on every given point.
    pub fn check_orientation<'a>(&self, points: impl IntoIterator<Item = &'a Point>) -> Result<()> {
        for p in points {
            self.deformation_gradient(p)?;
        }
        Ok(())
    }
}
