use nalgebra::{Matrix3, Vector3};

use super::{Christoffel, CoordinateChart, Point};
use crate::error::{pt, Error, Result};

/// Default finite-difference step, scaled by `max(1, |x^c|)` per coordinate.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Default base step of the extrapolated rules, which tolerate a wider step.
pub const DEFAULT_EXTRAPOLATED_FD_STEP: f64 = 5e-5;

/// How partial derivatives of a tensor field are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceBackend {
    /// Field-supplied partial derivatives.
    Analytic,
    /// Second-order finite differences with base step `h`.
    FiniteDifference { h: f64 },
    /// One Richardson step over the second-order stencils at `h` and `2h`:
    /// fourth order in the interior, third order one-sided.
    ExtrapolatedFiniteDifference { h: f64 },
}

impl Default for DivergenceBackend {
    fn default() -> Self {
        DivergenceBackend::FiniteDifference { h: DEFAULT_FD_STEP }
    }
}

impl DivergenceBackend {
    pub fn label(&self) -> &'static str {
        match self {
            DivergenceBackend::Analytic => "analytic",
            DivergenceBackend::FiniteDifference { .. } => "finite_difference",
            DivergenceBackend::ExtrapolatedFiniteDifference { .. } => {
                "finite_difference_extrapolated"
            }
        }
    }

    /// Base step of the finite-difference variants.
    pub fn step(&self) -> Option<f64> {
        match *self {
            DivergenceBackend::Analytic => None,
            DivergenceBackend::FiniteDifference { h }
            | DivergenceBackend::ExtrapolatedFiniteDifference { h } => Some(h),
        }
    }

    pub fn stencil(
        &self,
        x: &Point,
        admissible: impl Fn(&Point) -> bool,
    ) -> Option<Result<Stencil>> {
        match *self {
            DivergenceBackend::Analytic => None,
            DivergenceBackend::FiniteDifference { h } => Some(Stencil::build(x, h, admissible)),
            DivergenceBackend::ExtrapolatedFiniteDifference { h } => {
                Some(Stencil::build_extrapolated(x, h, admissible))
            }
        }
    }
}

/// Derivative rules as `(offset in steps, weight × step)` pairs.
const CENTRAL: &[(i32, f64)] = &[(1, 0.5), (-1, -0.5)];
const FORWARD: &[(i32, f64)] = &[(0, -1.5), (1, 2.0), (2, -0.5)];
const BACKWARD: &[(i32, f64)] = &[(0, 1.5), (-1, -2.0), (-2, 0.5)];
const CENTRAL_EXTRAPOLATED: &[(i32, f64)] = &[
    (1, 32.0 / 45.0),
    (-1, -32.0 / 45.0),
    (2, -1.0 / 9.0),
    (-2, 1.0 / 9.0),
    (4, 1.0 / 360.0),
    (-4, -1.0 / 360.0),
];
const FORWARD_EXTRAPOLATED: &[(i32, f64)] = &[
    (0, -15.0 / 8.0),
    (1, 64.0 / 21.0),
    (2, -4.0 / 3.0),
    (4, 1.0 / 6.0),
    (8, -1.0 / 168.0),
];
const BACKWARD_EXTRAPOLATED: &[(i32, f64)] = &[
    (0, 15.0 / 8.0),
    (-1, -64.0 / 21.0),
    (-2, 4.0 / 3.0),
    (-4, -1.0 / 6.0),
    (-8, 1.0 / 168.0),
];

const SECOND_ORDER: &[&[(i32, f64)]] = &[CENTRAL, FORWARD, BACKWARD];
const EXTRAPOLATED: &[&[(i32, f64)]] = &[
    CENTRAL_EXTRAPOLATED,
    FORWARD_EXTRAPOLATED,
    BACKWARD_EXTRAPOLATED,
    CENTRAL,
    FORWARD,
    BACKWARD,
];

/// A symmetric contravariant 2-tensor field given in the coordinates of one
/// chart.
pub trait TensorField: Sync {
    fn chart(&self) -> CoordinateChart;

    /// Contravariant components `T^ab(x)`.
    fn value(&self, x: &Point) -> Result<Matrix3<f64>>;

    /// Partial derivatives `∂_c T^ab`, indexed by `c`, when available in
    /// closed form.
    fn partials(&self, _x: &Point) -> Option<Result<[Matrix3<f64>; 3]>> {
        None
    }

    fn name(&self) -> &'static str {
        "tensor field"
    }
}

type ValueFn<'a> = Box<dyn Fn(&Point) -> Matrix3<f64> + Sync + 'a>;
type PartialsFn<'a> = Box<dyn Fn(&Point) -> [Matrix3<f64>; 3] + Sync + 'a>;

/// Closure-backed [`TensorField`].
pub struct FnField<'a> {
    chart: CoordinateChart,
    value: ValueFn<'a>,
    partials: Option<PartialsFn<'a>>,
}

impl<'a> FnField<'a> {
    pub fn new(chart: CoordinateChart, value: impl Fn(&Point) -> Matrix3<f64> + Sync + 'a) -> Self {
        Self {
            chart,
            value: Box::new(value),
            partials: None,
        }
    }

    pub fn with_partials(mut self, d: impl Fn(&Point) -> [Matrix3<f64>; 3] + Sync + 'a) -> Self {
        self.partials = Some(Box::new(d));
        self
    }
}

impl TensorField for FnField<'_> {
    fn chart(&self) -> CoordinateChart {
        self.chart
    }

    fn value(&self, x: &Point) -> Result<Matrix3<f64>> {
        Ok((self.value)(x))
    }

    fn partials(&self, x: &Point) -> Option<Result<[Matrix3<f64>; 3]>> {
        self.partials.as_ref().map(|d| Ok(d(x)))
    }

    fn name(&self) -> &'static str {
        "closure field"
    }
}

/// The field `x ↦ g^ab(x)` of a chart, with exact partials.
#[derive(Debug, Clone, Copy)]
pub struct InverseMetricField(pub CoordinateChart);

impl TensorField for InverseMetricField {
    fn chart(&self) -> CoordinateChart {
        self.0
    }

    fn value(&self, x: &Point) -> Result<Matrix3<f64>> {
        self.0.inverse_metric(x)
    }

    fn partials(&self, x: &Point) -> Option<Result<[Matrix3<f64>; 3]>> {
        Some(self.0.inverse_metric_partials(x))
    }

    fn name(&self) -> &'static str {
        "inverse metric"
    }
}

/// Finite-difference stencil for first partials at one point.
///
/// Each direction uses the central 3-point formula when both neighbours are
/// admissible, otherwise a one-sided second-order formula. `points[0]` is the
/// centre; `weights[c]` lists `(point index, weight)` pairs for `∂_c`.
#[derive(Debug, Clone)]
pub struct Stencil {
    pub points: Vec<Point>,
    weights: [Vec<(usize, f64)>; 3],
}

impl Stencil {
    pub fn build(x: &Point, h: f64, admissible: impl Fn(&Point) -> bool) -> Result<Self> {
        Self::from_rules(x, h, SECOND_ORDER, admissible)
    }

    /// Like [`Stencil::build`], preferring Richardson-extrapolated rules and
    /// falling back to second order where the wider rules leave the domain.
    pub fn build_extrapolated(
        x: &Point,
        h: f64,
        admissible: impl Fn(&Point) -> bool,
    ) -> Result<Self> {
        Self::from_rules(x, h, EXTRAPOLATED, admissible)
    }

    fn from_rules(
        x: &Point,
        h: f64,
        rules: &[&[(i32, f64)]],
        admissible: impl Fn(&Point) -> bool,
    ) -> Result<Self> {
        if !admissible(x) {
            return Err(Error::Stencil { point: pt(x) });
        }
        let mut points = vec![*x];
        let mut weights: [Vec<(usize, f64)>; 3] = Default::default();
        for c in 0..3 {
            let step = h * x[c].abs().max(1.0);
            let shifted = |k: i32| {
                let mut p = *x;
                p[c] += k as f64 * step;
                p
            };
            let rule = rules
                .iter()
                .find(|r| r.iter().all(|&(k, _)| k == 0 || admissible(&shifted(k))))
                .ok_or_else(|| Error::Stencil { point: pt(x) })?;
            weights[c] = rule
                .iter()
                .map(|&(k, w)| {
                    let i = if k == 0 {
                        0
                    } else {
                        points.push(shifted(k));
                        points.len() - 1
                    };
                    (i, w / step)
                })
                .collect();
        }
        Ok(Self { points, weights })
    }

    pub fn apply(&self, values: &[Matrix3<f64>]) -> [Matrix3<f64>; 3] {
        debug_assert_eq!(values.len(), self.points.len());
        let mut out = [Matrix3::zeros(); 3];
        for (c, o) in out.iter_mut().enumerate() {
            for &(i, w) in &self.weights[c] {
                *o += values[i] * w;
            }
        }
        out
    }

    pub fn apply_scalar(&self, values: &[f64]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (c, o) in out.iter_mut().enumerate() {
            for &(i, w) in &self.weights[c] {
                *o += values[i] * w;
            }
        }
        out
    }
}

/// `v^a = T^ab_{|b}` assembled from the field value and its partials.
///
/// `partials[C]` holds `∂T^ab/∂X^C` with respect to whatever coordinates the
/// field is parameterized by; `dparam_dx[(C, b)] = ∂X^C/∂x^b` converts them to
/// chart derivatives (identity when the field is parameterized by `x`).
pub fn divergence_from_partials(
    gamma: &Christoffel,
    t: &Matrix3<f64>,
    partials: &[Matrix3<f64>; 3],
    dparam_dx: &Matrix3<f64>,
) -> Vector3<f64> {
    let mut v = Vector3::zeros();
    for a in 0..3 {
        let mut s = 0.0;
        for b in 0..3 {
            for (c, d) in partials.iter().enumerate() {
                s += d[(a, b)] * dparam_dx[(c, b)];
            }
        }
        for c in 0..3 {
            for b in 0..3 {
                s += gamma.get(a, c, b) * t[(c, b)];
            }
            s += gamma.contracted(c) * t[(a, c)];
        }
        v[a] = s;
    }
    v
}

/// Covariant divergence `T^ab_{|b}` of a field at `x` in the field's chart.
pub fn covariant_divergence(
    field: &dyn TensorField,
    x: &Point,
    backend: DivergenceBackend,
) -> Result<Vector3<f64>> {
    let chart = field.chart();
    chart.ensure_valid(x)?;
    let t = field.value(x)?;
    let partials = match backend {
        DivergenceBackend::Analytic => {
            field.partials(x).ok_or(Error::Capability(field.name()))??
        }
        fd => {
            let stencil = fd
                .stencil(x, |p| chart.is_valid(p))
                .expect("finite-difference backend")?;
            let values = stencil
                .points
                .iter()
                .map(|p| field.value(p))
                .collect::<Result<Vec<_>>>()?;
            stencil.apply(&values)
        }
    };
    let gamma = chart.christoffel(x)?;
    Ok(divergence_from_partials(
        &gamma,
        &t,
        &partials,
        &Matrix3::identity(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::ChartKind;

    #[test]
    fn constant_cartesian_field_is_divergence_free() {
        let m = Matrix3::new(1.0, 2.0, 3.0, 2.0, 5.0, 6.0, 3.0, 6.0, 9.0);
        let f = FnField::new(CoordinateChart::CARTESIAN, move |_| m)
            .with_partials(|_| [Matrix3::zeros(); 3]);
        let x = Point::new(0.1, 0.2, 0.3);
        for backend in [DivergenceBackend::Analytic, DivergenceBackend::default()] {
            assert_eq!(
                covariant_divergence(&f, &x, backend).unwrap(),
                Vector3::zeros()
            );
        }
    }

    #[test]
    fn radial_unit_field_in_cylinder() {
        // T^rr = 1: v^r = Γ^b_rb = 1/r.
        let f = FnField::new(CoordinateChart::CYLINDRICAL, |_| {
            Matrix3::from_diagonal(&Vector3::new(1.0, 0.0, 0.0))
        })
        .with_partials(|_| [Matrix3::zeros(); 3]);
        let x = Point::new(2.0, 0.7, 0.1);
        let an = covariant_divergence(&f, &x, DivergenceBackend::Analytic).unwrap();
        assert_eq!(an, Vector3::new(0.5, 0.0, 0.0));
        let fd = covariant_divergence(&f, &x, DivergenceBackend::default()).unwrap();
        assert!((fd - an).norm() < 1e-12);
    }

    #[test]
    fn metric_is_covariantly_constant() {
        for kind in [
            ChartKind::Cartesian,
            ChartKind::Cylindrical,
            ChartKind::Spherical,
        ] {
            let field = InverseMetricField(CoordinateChart::new(kind));
            let x = Point::new(1.3, 0.9, 0.4);
            let an = covariant_divergence(&field, &x, DivergenceBackend::Analytic).unwrap();
            assert!(an.norm() < 1e-14, "{kind:?}: {an}");
            let fd = covariant_divergence(&field, &x, DivergenceBackend::default()).unwrap();
            assert!(fd.norm() < 1e-9, "{kind:?}: {fd}");
        }
    }

    #[test]
    fn analytic_backend_needs_partials() {
        let f = FnField::new(CoordinateChart::CARTESIAN, |_| Matrix3::identity());
        let err = covariant_divergence(&f, &Point::zeros(), DivergenceBackend::Analytic);
        assert!(matches!(err, Err(Error::Capability(_))));
    }

    #[test]
    fn stencil_falls_back_to_one_sided() {
        let x = Point::new(1.0, 0.0, 0.0);
        let inside = |p: &Point| p[0] >= 1.0 - 1e-15;
        let s = Stencil::build(&x, 1e-3, inside).unwrap();
        // quadratic in x is differentiated exactly by the one-sided rule
        let vals: Vec<f64> = s.points.iter().map(|p| p[0] * p[0] + 3.0 * p[1]).collect();
        let d = s.apply_scalar(&vals);
        assert!((d[0] - 2.0).abs() < 1e-9);
        assert!((d[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn extrapolated_rules_are_exact_for_cubics() {
        let cubic = |p: &Point| p[0].powi(3) - 2.0 * p[1].powi(3) + p[2] * p[2] * p[2];
        let exact = |p: &Point| [3.0 * p[0] * p[0], -6.0 * p[1] * p[1], 3.0 * p[2] * p[2]];
        let x = Point::new(1.0, 0.5, -0.25);
        let inside = |p: &Point| p[0] >= 1.0 - 1e-15 && p[2] <= -0.25 + 1e-15;
        let s = Stencil::build_extrapolated(&x, 1e-2, inside).unwrap();
        let vals: Vec<f64> = s.points.iter().map(cubic).collect();
        let d = s.apply_scalar(&vals);
        for (got, want) in d.iter().zip(exact(&x)) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn extrapolated_stencil_falls_back_when_cramped() {
        let x = Point::new(0.0, 0.0, 0.0);
        // room for one step either way, not two
        let inside = |p: &Point| p.amax() <= 1.5e-3;
        let s = Stencil::build_extrapolated(&x, 1e-3, inside).unwrap();
        assert_eq!(s.points.len(), 7);
        let vals: Vec<f64> = s.points.iter().map(|p| p[0] * p[0] + p[1]).collect();
        let d = s.apply_scalar(&vals);
        assert!((d[0]).abs() < 1e-12 && (d[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stencil_error_when_boxed_in() {
        let x = Point::new(0.0, 0.0, 0.0);
        let only_origin = |p: &Point| p.norm() == 0.0;
        assert!(matches!(
            Stencil::build(&x, 1e-3, only_origin),
            Err(Error::Stencil { .. })
        ));
    }

    #[test]
    fn fd_near_axis_uses_forward_stencil() {
        let f = FnField::new(CoordinateChart::CYLINDRICAL, |_| Matrix3::identity());
        let x = Point::new(1.5e-8, 0.0, 0.0);
        let r = covariant_divergence(&f, &x, DivergenceBackend::FiniteDifference { h: 1e-5 });
        // forward one-sided stencil is still admissible
        assert!(r.is_ok());
    }
}
