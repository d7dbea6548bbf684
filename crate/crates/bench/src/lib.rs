//! Fixtures shared by the benchmarks in `benches/`.

use nalgebra::Matrix3;
use unidef_core::charts::FnField;
use unidef_core::kinematics::{DeformationFamily, DeformationField};
use unidef_core::poly::Poly1;
use unidef_core::residual::{build_radial_annulus, DomainShape};
use unidef_core::{CoordinateChart, DomainSpec, MaterialMetricField, ResidualStressField};

/// A smooth cylindrical field with closed-form partials.
pub fn cylindrical_field() -> FnField<'static> {
    FnField::new(CoordinateChart::CYLINDRICAL, |p| {
        let (r, t, z) = (p[0], p[1], p[2]);
        Matrix3::new(r * r, 0.0, z, 0.0, t.cos() / r, 0.0, z, 0.0, r * z)
    })
    .with_partials(|p| {
        let (r, t, z) = (p[0], p[1], p[2]);
        let m = |rr: f64, tt: f64, rz: f64, zz: f64| {
            Matrix3::new(rr, 0.0, rz, 0.0, tt, 0.0, rz, 0.0, zz)
        };
        [
            m(2.0 * r, -t.cos() / (r * r), 0.0, z),
            m(0.0, -t.sin() / r, 0.0, 0.0),
            m(0.0, 0.0, 1.0, r),
        ]
    })
}

/// Inputs of one universality check.
pub struct Case {
    pub deformation: DeformationField,
    pub metric: MaterialMetricField,
    pub residual: ResidualStressField,
    pub domain: DomainSpec,
}

/// Cylindrical inflation of an annulus carrying a radial residual stress,
/// sampled on an `n × n × n/2` grid.
pub fn inflated_annulus(n: usize) -> Case {
    let chart = CoordinateChart::CYLINDRICAL;
    Case {
        deformation: DeformationField::new(
            DeformationFamily::CylindricalInflation {
                a: 1.0,
                lambda: 1.0,
            },
            chart,
            chart,
        )
        .expect("valid deformation"),
        metric: MaterialMetricField::induced(chart),
        residual: build_radial_annulus(Poly1::bump(1.0, 2.0), 1.0, 2.0).expect("admissible"),
        domain: DomainSpec::new(
            DomainShape::Annulus {
                ri: 1.0,
                ro: 2.0,
                height: 1.0,
            },
            chart,
            [n, n, (n / 2).max(2)],
        )
        .expect("valid domain"),
    }
}
