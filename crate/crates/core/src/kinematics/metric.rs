use std::collections::BTreeMap;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::charts::{Christoffel, CoordinateChart, Metric, Point};
use crate::error::Result;
use crate::poly::Polynomial;

/// Anelastic distortion `åF` in cartesian components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnelasticDistortion {
    Constant {
        matrix: [[f64; 3]; 3],
    },
    /// Each component a polynomial in cartesian `(X, Y, Z)`.
    Polynomial {
        components: [[BTreeMap<String, f64>; 3]; 3],
    },
}

impl AnelasticDistortion {
    pub fn constant(m: Matrix3<f64>) -> Self {
        AnelasticDistortion::Constant {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])),
        }
    }

    pub fn scalar(c: f64) -> Self {
        Self::constant(Matrix3::identity() * c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialMetricMode {
    /// `G` is the Euclidean metric of the reference chart.
    InducedEuclidean,
    /// `G = åF⋆ G̊ åF`.
    FromAnelasticDistortion { distortion: AnelasticDistortion },
}

#[derive(Debug, Clone, PartialEq)]
enum Compiled {
    Induced,
    Constant(Matrix3<f64>),
    Poly(Box<[[Polynomial; 3]; 3]>),
}

/// The material metric `G(X)` on the reference configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialMetricField {
    pub chart: CoordinateChart,
    pub mode: MaterialMetricMode,
    compiled: Compiled,
}

const METRIC_FD_STEP: f64 = 1e-5;

impl MaterialMetricField {
    pub fn new(chart: CoordinateChart, mode: MaterialMetricMode) -> Result<Self> {
        let compiled = match &mode {
            MaterialMetricMode::InducedEuclidean => Compiled::Induced,
            MaterialMetricMode::FromAnelasticDistortion { distortion } => match distortion {
                AnelasticDistortion::Constant { matrix } => {
                    let a = Matrix3::from_fn(|i, j| matrix[i][j]);
                    Compiled::Constant(a.transpose() * a)
                }
                AnelasticDistortion::Polynomial { components } => {
                    let mut polys: [[Polynomial; 3]; 3] =
                        std::array::from_fn(|_| std::array::from_fn(|_| Polynomial::zero(3)));
                    for i in 0..3 {
                        for j in 0..3 {
                            polys[i][j] = Polynomial::from_table(3, &components[i][j])?;
                        }
                    }
                    Compiled::Poly(Box::new(polys))
                }
            },
        };
        Ok(Self {
            chart,
            mode,
            compiled,
        })
    }

    pub fn induced(chart: CoordinateChart) -> Self {
        Self::new(chart, MaterialMetricMode::InducedEuclidean).expect("induced metric")
    }

    pub fn is_induced(&self) -> bool {
        matches!(self.compiled, Compiled::Induced)
    }

    /// Whether the Christoffel symbols of `G` coincide with those of the chart,
    /// which holds whenever `G` has constant cartesian components.
    pub fn has_chart_christoffel(&self) -> bool {
        !matches!(self.compiled, Compiled::Poly(_))
    }

    /// `åFᵀ åF` in cartesian components at cartesian position `p`.
    fn cartesian_metric(&self, p: &Point) -> Matrix3<f64> {
        match &self.compiled {
            Compiled::Induced => Matrix3::identity(),
            Compiled::Constant(m) => *m,
            Compiled::Poly(polys) => {
                let v = [p[0], p[1], p[2]];
                let a = Matrix3::from_fn(|i, j| polys[i][j].evaluate(&v));
                a.transpose() * a
            }
        }
    }

    /// `G_AB` and `G^AB` at `x` in chart coordinates; errors unless `G` is
    /// symmetric positive-definite.
    pub fn metric(&self, x: &Point) -> Result<Metric> {
        if let Compiled::Induced = self.compiled {
            return self.chart.metric_pair(x);
        }
        self.chart.ensure_valid(x)?;
        let j = self.chart.jacobian(x);
        let g = j.transpose() * self.cartesian_metric(&self.chart.to_cartesian(x)) * j;
        Metric::new((g + g.transpose()) * 0.5)
    }

    /// Christoffel symbols of `G`. A constant `åF` leaves them equal to the
    /// chart's Euclidean symbols; a varying one is differentiated numerically.
    pub fn christoffel(&self, x: &Point) -> Result<Christoffel> {
        match self.compiled {
            Compiled::Induced | Compiled::Constant(_) => self.chart.christoffel(x),
            Compiled::Poly(_) => {
                let mut dg = [Matrix3::zeros(); 3];
                for (c, d) in dg.iter_mut().enumerate() {
                    let step = METRIC_FD_STEP * x[c].abs().max(1.0);
                    let mut p = *x;
                    let mut m = *x;
                    p[c] += step;
                    m[c] -= step;
                    *d = (self.metric(&p)?.lower - self.metric(&m)?.lower) / (2.0 * step);
                }
                Ok(Christoffel::from_metric_derivatives(
                    &self.metric(x)?.raise,
                    &dg,
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_reproduces_chart_metric() {
        let x = Point::new(1.4, 0.2, 0.1);
        let m = MaterialMetricField::induced(CoordinateChart::SPHERICAL);
        assert_eq!(
            m.metric(&x).unwrap().lower,
            CoordinateChart::SPHERICAL.metric(&x).unwrap()
        );
    }

    #[test]
    fn scalar_distortion_scales_metric() {
        let x = Point::new(1.4, 0.2, 0.1);
        let m = MaterialMetricField::new(
            CoordinateChart::CYLINDRICAL,
            MaterialMetricMode::FromAnelasticDistortion {
                distortion: AnelasticDistortion::scalar(1.2),
            },
        )
        .unwrap();
        let expected = CoordinateChart::CYLINDRICAL.metric(&x).unwrap() * 1.44;
        assert!((m.metric(&x).unwrap().lower - expected).abs().max() < 1e-14);
    }

    #[test]
    fn singular_distortion_is_rejected() {
        let m = MaterialMetricField::new(
            CoordinateChart::CARTESIAN,
            MaterialMetricMode::FromAnelasticDistortion {
                distortion: AnelasticDistortion::constant(Matrix3::from_diagonal(&Point::new(
                    1.0, 0.0, 1.0,
                ))),
            },
        )
        .unwrap();
        assert!(m.metric(&Point::zeros()).is_err());
    }

    #[test]
    fn polynomial_distortion_christoffel_matches_flat_when_constant() {
        let mut one = BTreeMap::new();
        one.insert("0.0.0".to_string(), 1.0);
        let zero = BTreeMap::new();
        let comps = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { one.clone() } else { zero.clone() })
        });
        let m = MaterialMetricField::new(
            CoordinateChart::CYLINDRICAL,
            MaterialMetricMode::FromAnelasticDistortion {
                distortion: AnelasticDistortion::Polynomial { components: comps },
            },
        )
        .unwrap();
        let x = Point::new(1.5, 0.3, 0.2);
        let a = m.christoffel(&x).unwrap();
        let b = CoordinateChart::CYLINDRICAL.christoffel(&x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!((a.get(i, j, k) - b.get(i, j, k)).abs() < 1e-8);
                }
            }
        }
    }
}
