use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use super::{DomainSpec, ResidualStressField};
use crate::charts::{divergence_from_partials, CoordinateChart, DivergenceBackend, Point, Tensor2};
use crate::error::{Error, Result};
use crate::kinematics::MaterialMetricField;
use crate::universality::{ConstraintEntry, Tolerances};

/// Backend label for checks that need values only.
pub const TRACTION_BACKEND: &str = "pointwise";

/// `‖Div S̊‖` over interior nodes and `‖S̊N‖` over boundary nodes, both under
/// the material metric `G`.
///
/// The analytic backend is used when requested and `G` shares the chart's
/// Christoffel symbols; otherwise `S̊` is differentiated numerically and
/// contracted with the Christoffel symbols of `G`. Interior points whose
/// stencil cannot be built are skipped and counted.
pub fn check_admissibility(
    field: &ResidualStressField,
    metric: &MaterialMetricField,
    domain: &DomainSpec,
    tolerances: &Tolerances,
    backend: DivergenceBackend,
) -> Result<[ConstraintEntry; 2]> {
    let chart = domain.chart;
    if metric.chart.kind != chart.kind {
        return Err(Error::Config(format!(
            "material metric is given in the {} chart but the domain uses {}",
            metric.chart.name(),
            chart.name()
        )));
    }
    let grid = domain.grid()?;
    let analytic = matches!(backend, DivergenceBackend::Analytic)
        && field.has_analytic_divergence()
        && metric.has_chart_christoffel();
    let fd = match backend {
        DivergenceBackend::Analytic => DivergenceBackend::default(),
        other => other,
    };

    let interior: Vec<Option<(f64, f64)>> = grid
        .interior_points
        .par_iter()
        .map(|x| -> Result<Option<(f64, f64)>> {
            let g = metric.metric(x)?;
            let s = field.value_in(&chart, x)?;
            let v = if analytic {
                field.analytic_divergence_in(&chart, x)?
            } else {
                let stencil = match fd
                    .stencil(x, |p| domain.admits(x, p))
                    .expect("finite-difference backend")
                {
                    Ok(s) => s,
                    Err(Error::Stencil { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let values = stencil
                    .points
                    .iter()
                    .map(|p| field.value_in(&chart, p))
                    .collect::<Result<Vec<_>>>()?;
                let gamma = metric.christoffel(x)?;
                divergence_from_partials(&gamma, &s, &stencil.apply(&values), &Matrix3::identity())
            };
            Ok(Some((g.vector_norm(&v), g.tensor_norm(&s))))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut div_max = 0.0_f64;
    let mut scale = 1.0_f64;
    let mut skipped = 0;
    for r in &interior {
        match r {
            Some((d, s)) => {
                div_max = div_max.max(*d);
                scale = scale.max(*s);
            }
            None => skipped += 1,
        }
    }
    let (tol, label) = if analytic {
        (tolerances.analytic, DivergenceBackend::Analytic.label())
    } else {
        (tolerances.finite_difference, fd.label())
    };
    let divergence = ConstraintEntry::new(
        "admissibility.divergence",
        div_max,
        tol,
        scale,
        label,
        interior.len() - skipped,
    )
    .with_skipped(skipped);

    let boundary: Vec<(f64, f64)> = grid
        .boundary_points
        .par_iter()
        .map(|b| -> Result<(f64, f64)> {
            let x = &b.point;
            let g_chart = chart.metric(x)?;
            let g = metric.metric(x)?;
            let s = field.value_in(&chart, x)?;
            let covector: Vector3<f64> = g_chart * b.normal;
            let len = (covector.transpose() * g.raise * covector)[(0, 0)].sqrt();
            let t = s * covector / len;
            Ok((g.vector_norm(&t), g.tensor_norm(&s)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t_max = 0.0_f64;
    let mut t_scale = 1.0_f64;
    for (t, s) in &boundary {
        t_max = t_max.max(*t);
        t_scale = t_scale.max(*s);
    }
    let traction = ConstraintEntry::new(
        "admissibility.traction",
        t_max,
        tolerances.analytic,
        t_scale,
        TRACTION_BACKEND,
        boundary.len(),
    );
    Ok([divergence, traction])
}

/// Homogeneity of a sampled field from its cartesian components.
///
/// The residual is the largest component-wise spread over the samples, the
/// scale is `max(1, largest |component|)`.
pub fn homogeneity_entry(
    name: &str,
    cartesian: &[Matrix3<f64>],
    tolerance: f64,
) -> ConstraintEntry {
    let mut lo = Matrix3::repeat(f64::INFINITY);
    let mut hi = Matrix3::repeat(f64::NEG_INFINITY);
    let mut magnitude = 0.0_f64;
    for m in cartesian {
        lo = lo.zip_map(m, f64::min);
        hi = hi.zip_map(m, f64::max);
        magnitude = magnitude.max(m.amax());
    }
    let deviation = if cartesian.is_empty() {
        0.0
    } else {
        (hi - lo).max()
    };
    ConstraintEntry::new(
        name,
        deviation,
        tolerance,
        magnitude.max(1.0),
        TRACTION_BACKEND,
        cartesian.len(),
    )
}

/// Whether the contravariant field `x ↦ T(x)`, given in `chart` at `points`,
/// has constant cartesian components.
pub fn check_homogeneity(
    name: &str,
    chart: &CoordinateChart,
    points: &[Point],
    field: impl Fn(&Point) -> Result<Matrix3<f64>> + Sync,
    tolerance: f64,
) -> Result<ConstraintEntry> {
    let cartesian = points
        .par_iter()
        .map(|x| {
            let t = Tensor2::contravariant(field(x)?);
            Ok(chart
                .transform_tensor(&t, &CoordinateChart::CARTESIAN, x)?
                .components)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(homogeneity_entry(name, &cartesian, tolerance))
}
