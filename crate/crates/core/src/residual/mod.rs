//! Residual-stress fields on the reference configuration, sample domains and
//! the admissibility and homogeneity checks.

mod checks;
mod domain;

use std::collections::BTreeMap;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::charts::{divergence_from_partials, CoordinateChart, Point, Tensor2};
use crate::error::{Error, Result};
use crate::poly::{Poly1, Polynomial};

pub use checks::{check_admissibility, check_homogeneity, homogeneity_entry, TRACTION_BACKEND};
pub use domain::{DomainShape, DomainSpec, DOMAIN_SLACK};

/// Allowed `|f|` at the ends of a radial profile.
pub const PROFILE_ENDPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ResidualStressFamily {
    Zero,
    /// Constant cartesian components.
    Constant {
        components: [[f64; 3]; 3],
    },
    /// `S^RR = f(R)` with the hoop stress closing radial equilibrium.
    RadialAnnulus {
        profile: Poly1,
        ri: f64,
        ro: f64,
    },
    /// `S^RR = f(R)` with equal polar and azimuthal physical stresses closing
    /// radial equilibrium.
    RadialSphere {
        profile: Poly1,
        ri: f64,
        ro: f64,
    },
    /// Each cartesian component a polynomial in `(X, Y, Z)`.
    UserPolynomial {
        components: [[BTreeMap<String, f64>; 3]; 3],
    },
}

impl ResidualStressFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ResidualStressFamily::Zero => "zero",
            ResidualStressFamily::Constant { .. } => "constant",
            ResidualStressFamily::RadialAnnulus { .. } => "radial_annulus",
            ResidualStressFamily::RadialSphere { .. } => "radial_sphere",
            ResidualStressFamily::UserPolynomial { .. } => "user_polynomial",
        }
    }

    /// The same family with every stress component multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        match self {
            ResidualStressFamily::Zero => ResidualStressFamily::Zero,
            ResidualStressFamily::Constant { components } => ResidualStressFamily::Constant {
                components: components.map(|row| row.map(|v| v * t)),
            },
            ResidualStressFamily::RadialAnnulus { profile, ri, ro } => {
                ResidualStressFamily::RadialAnnulus {
                    profile: profile.scaled(t),
                    ri: *ri,
                    ro: *ro,
                }
            }
            ResidualStressFamily::RadialSphere { profile, ri, ro } => {
                ResidualStressFamily::RadialSphere {
                    profile: profile.scaled(t),
                    ri: *ri,
                    ro: *ro,
                }
            }
            ResidualStressFamily::UserPolynomial { components } => {
                ResidualStressFamily::UserPolynomial {
                    components: components.clone().map(|row| {
                        row.map(|table| table.into_iter().map(|(k, v)| (k, v * t)).collect())
                    }),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Compiled {
    Zero,
    Constant(Matrix3<f64>),
    Annulus { f: Poly1, df: Poly1, ddf: Poly1 },
    Sphere { f: Poly1, df: Poly1, ddf: Poly1 },
    Poly(Box<[[Polynomial; 3]; 3]>),
}

/// A symmetric contravariant residual stress `S̊(X)` on the reference
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStressField {
    pub family: ResidualStressFamily,
    compiled: Compiled,
}

fn check_profile(profile: &Poly1, ri: f64, ro: f64) -> Result<(Poly1, Poly1)> {
    if !(ri.is_finite() && ro.is_finite() && 0.0 < ri && ri < ro) {
        return Err(Error::InadmissibleProfile(format!(
            "radii must satisfy 0 < ri < ro, got ri = {ri}, ro = {ro}"
        )));
    }
    if profile.coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::InadmissibleProfile("non-finite coefficient".into()));
    }
    for r in [ri, ro] {
        let v = profile.eval(r);
        if v.abs() > PROFILE_ENDPOINT_TOL {
            return Err(Error::InadmissibleProfile(format!(
                "f({r}) = {v:e} is not zero; the boundary would carry traction"
            )));
        }
    }
    let df = profile.derivative();
    let ddf = df.derivative();
    Ok((df, ddf))
}

impl ResidualStressField {
    pub fn new(family: ResidualStressFamily) -> Result<Self> {
        let compiled = match &family {
            ResidualStressFamily::Zero => Compiled::Zero,
            ResidualStressFamily::Constant { components } => {
                let m = Matrix3::from_fn(|i, j| components[i][j]);
                if m.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Input(
                        "residual stress components must be finite".into(),
                    ));
                }
                if !Tensor2::contravariant(m).is_symmetric() {
                    return Err(Error::Input(
                        "constant residual stress must be symmetric".into(),
                    ));
                }
                Compiled::Constant((m + m.transpose()) * 0.5)
            }
            ResidualStressFamily::RadialAnnulus { profile, ri, ro } => {
                let (df, ddf) = check_profile(profile, *ri, *ro)?;
                Compiled::Annulus {
                    f: profile.clone(),
                    df,
                    ddf,
                }
            }
            ResidualStressFamily::RadialSphere { profile, ri, ro } => {
                let (df, ddf) = check_profile(profile, *ri, *ro)?;
                Compiled::Sphere {
                    f: profile.clone(),
                    df,
                    ddf,
                }
            }
            ResidualStressFamily::UserPolynomial { components } => {
                let mut polys: [[Polynomial; 3]; 3] =
                    std::array::from_fn(|_| std::array::from_fn(|_| Polynomial::zero(3)));
                for (row, tables) in polys.iter_mut().zip(components) {
                    for (p, table) in row.iter_mut().zip(tables) {
                        *p = Polynomial::from_table(3, table)?;
                    }
                }
                for i in 0..3 {
                    for j in 0..i {
                        if polys[i][j] != polys[j][i] {
                            return Err(Error::Input(format!(
                                "user_polynomial residual stress must be symmetric ({i},{j})"
                            )));
                        }
                    }
                }
                Compiled::Poly(Box::new(polys))
            }
        };
        Ok(Self { family, compiled })
    }

    pub fn zero() -> Self {
        Self::new(ResidualStressFamily::Zero).expect("zero field")
    }

    pub fn constant(m: Matrix3<f64>) -> Result<Self> {
        Self::new(ResidualStressFamily::Constant {
            components: std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])),
        })
    }

    /// Same field scaled by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.family.scaled(t))
    }

    /// Whether the field vanishes identically.
    pub fn is_zero(&self) -> bool {
        match &self.compiled {
            Compiled::Zero => true,
            Compiled::Constant(m) => m.iter().all(|v| *v == 0.0),
            Compiled::Annulus { f, .. } | Compiled::Sphere { f, .. } => f.is_zero(),
            Compiled::Poly(p) => p
                .iter()
                .flatten()
                .all(|q| q.terms().values().all(|c| *c == 0.0)),
        }
    }

    /// Whether closed-form partial derivatives exist. True for every family.
    pub fn has_analytic_divergence(&self) -> bool {
        true
    }

    /// Chart in which the family is written.
    pub fn native_chart(&self) -> CoordinateChart {
        match self.compiled {
            Compiled::Annulus { .. } => CoordinateChart::CYLINDRICAL,
            Compiled::Sphere { .. } => CoordinateChart::SPHERICAL,
            _ => CoordinateChart::CARTESIAN,
        }
    }

    fn native_value(&self, y: &Point) -> Matrix3<f64> {
        match &self.compiled {
            Compiled::Zero => Matrix3::zeros(),
            Compiled::Constant(m) => *m,
            Compiled::Annulus { f, df, .. } => {
                let r = y[0];
                let fr = f.eval(r);
                Matrix3::from_diagonal(&Vector3::new(fr, (fr + r * df.eval(r)) / (r * r), 0.0))
            }
            Compiled::Sphere { f, df, .. } => {
                let r = y[0];
                let fr = f.eval(r);
                let h = (r * df.eval(r) + 2.0 * fr) / (2.0 * r * r);
                let s2 = y[1].sin().powi(2);
                Matrix3::from_diagonal(&Vector3::new(fr, h, h / s2))
            }
            Compiled::Poly(p) => {
                let v = [y[0], y[1], y[2]];
                Matrix3::from_fn(|i, j| p[i][j].evaluate(&v))
            }
        }
    }

    fn native_partials(&self, y: &Point) -> [Matrix3<f64>; 3] {
        let mut d = [Matrix3::zeros(); 3];
        match &self.compiled {
            Compiled::Zero | Compiled::Constant(_) => {}
            Compiled::Annulus { f, df, ddf } => {
                let r = y[0];
                let q = f.eval(r) + r * df.eval(r);
                let dq = 2.0 * df.eval(r) + r * ddf.eval(r);
                d[0][(0, 0)] = df.eval(r);
                d[0][(1, 1)] = dq / (r * r) - 2.0 * q / (r * r * r);
            }
            Compiled::Sphere { f, df, ddf } => {
                let r = y[0];
                let q = r * df.eval(r) + 2.0 * f.eval(r);
                let dq = 3.0 * df.eval(r) + r * ddf.eval(r);
                let h = q / (2.0 * r * r);
                let dh = dq / (2.0 * r * r) - q / (r * r * r);
                let (s, c) = y[1].sin_cos();
                d[0][(0, 0)] = df.eval(r);
                d[0][(1, 1)] = dh;
                d[0][(2, 2)] = dh / (s * s);
                d[1][(2, 2)] = -2.0 * h * c / (s * s * s);
            }
            Compiled::Poly(p) => {
                let v = [y[0], y[1], y[2]];
                for (k, dk) in d.iter_mut().enumerate() {
                    *dk = Matrix3::from_fn(|i, j| p[i][j].partial(k, &v));
                }
            }
        }
        d
    }

    /// Contravariant components `S̊^AB` at `x`, given and returned in `chart`.
    pub fn value_in(&self, chart: &CoordinateChart, x: &Point) -> Result<Matrix3<f64>> {
        chart.ensure_valid(x)?;
        let native = self.native_chart();
        if native.kind == chart.kind {
            return Ok(self.native_value(x));
        }
        let y = chart.convert_point(&native, x);
        native.ensure_valid(&y)?;
        let t = Tensor2::contravariant(self.native_value(&y));
        Ok(native.transform_tensor(&t, chart, &y)?.components)
    }

    /// Closed-form `Div S̊` under the Euclidean metric, evaluated in the
    /// native chart and returned as a contravariant vector in `chart`.
    pub fn analytic_divergence_in(
        &self,
        chart: &CoordinateChart,
        x: &Point,
    ) -> Result<Vector3<f64>> {
        chart.ensure_valid(x)?;
        let native = self.native_chart();
        let y = chart.convert_point(&native, x);
        native.ensure_valid(&y)?;
        let gamma = native.christoffel(&y)?;
        let v = divergence_from_partials(
            &gamma,
            &self.native_value(&y),
            &self.native_partials(&y),
            &Matrix3::identity(),
        );
        native.transform_vector(&v, chart, &y)
    }
}

/// Radial residual stress on an annulus `[ri, ro]` with `S̊^RR = f(R)`.
///
/// Fails unless `f` vanishes at both radii, so the curved boundaries are
/// traction-free; the flat ends carry no axial stress.
pub fn build_radial_annulus(profile: Poly1, ri: f64, ro: f64) -> Result<ResidualStressField> {
    check_profile(&profile, ri, ro)?;
    if profile.is_zero() {
        return Ok(ResidualStressField::zero());
    }
    ResidualStressField::new(ResidualStressFamily::RadialAnnulus { profile, ri, ro })
}

/// Radial residual stress on a spherical shell `[ri, ro]` with `S̊^RR = f(R)`.
pub fn build_radial_sphere(profile: Poly1, ri: f64, ro: f64) -> Result<ResidualStressField> {
    check_profile(&profile, ri, ro)?;
    if profile.is_zero() {
        return Ok(ResidualStressField::zero());
    }
    ResidualStressField::new(ResidualStressFamily::RadialSphere { profile, ri, ro })
}
