use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use unidef_core::charts::DivergenceBackend;
use unidef_core::poly::Poly1;
use unidef_core::residual::{
    build_radial_annulus, build_radial_sphere, check_admissibility, check_homogeneity, DomainShape,
};
use unidef_core::universality::Tolerances;
use unidef_core::{CoordinateChart, DomainSpec, MaterialMetricField, ResidualStressField};

/// `(R - ri)(ro - R)(c0 + c1 R + c2 R²)`, which vanishes at both radii.
fn profile(ri: f64, ro: f64, c: [f64; 3]) -> Poly1 {
    let bump = [-ri * ro, ri + ro, -1.0];
    let mut out = vec![0.0; 5];
    for (i, b) in bump.iter().enumerate() {
        for (j, k) in c.iter().enumerate() {
            out[i + j] += b * k;
        }
    }
    Poly1::new(out)
}

fn annulus(ri: f64, ro: f64, chart: CoordinateChart) -> DomainSpec {
    DomainSpec::new(
        DomainShape::Annulus {
            ri,
            ro,
            height: 1.0,
        },
        chart,
        [12, 12, 4],
    )
    .unwrap()
}

fn shell(ri: f64, ro: f64, chart: CoordinateChart) -> DomainSpec {
    DomainSpec::new(DomainShape::SphericalShell { ri, ro }, chart, [10, 10, 6]).unwrap()
}

fn admissibility(
    field: &ResidualStressField,
    domain: &DomainSpec,
    backend: DivergenceBackend,
) -> [f64; 2] {
    let metric = MaterialMetricField::induced(domain.chart);
    let [div, traction] =
        check_admissibility(field, &metric, domain, &Tolerances::default(), backend).unwrap();
    [div.residual / div.scale, traction.residual / traction.scale]
}

fn radii() -> impl Strategy<Value = (f64, f64)> {
    (0.5..2.0f64, 0.3..2.0f64).prop_map(|(ri, w)| (ri, ri + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radial_annulus_fields_are_admissible(
        (ri, ro) in radii(),
        c in prop::array::uniform3(-2.0..2.0f64),
        cartesian in any::<bool>(),
    ) {
        let field = build_radial_annulus(profile(ri, ro, c), ri, ro).unwrap();
        let chart = if cartesian { CoordinateChart::CARTESIAN } else { CoordinateChart::CYLINDRICAL };
        let domain = annulus(ri, ro, chart);
        let [div, traction] = admissibility(&field, &domain, DivergenceBackend::Analytic);
        prop_assert!(div < 1e-10, "analytic divergence {div:e}");
        prop_assert!(traction < 1e-12, "traction {traction:e}");
        let [fd, _] = admissibility(&field, &domain, DivergenceBackend::default());
        prop_assert!(fd < 1e-6, "finite-difference divergence {fd:e}");
    }

    #[test]
    fn radial_sphere_fields_are_admissible(
        (ri, ro) in radii(),
        c in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let field = build_radial_sphere(profile(ri, ro, c), ri, ro).unwrap();
        let domain = shell(ri, ro, CoordinateChart::SPHERICAL);
        let [div, traction] = admissibility(&field, &domain, DivergenceBackend::Analytic);
        prop_assert!(div < 1e-10 && traction < 1e-12, "{div:e} {traction:e}");
    }

    #[test]
    fn homogeneity_verdict_is_chart_independent(
        (ri, ro) in radii(),
        c in prop::array::uniform3(-2.0..2.0f64),
        amplitude in prop_oneof![Just(0.0), 1e-9..1e-7f64, 0.1..2.0f64],
        background in prop::array::uniform6(-1.0..1.0f64),
    ) {
        let m = Matrix3::new(
            background[0], background[1], background[2],
            background[1], background[3], background[4],
            background[2], background[4], background[5],
        );
        let radial = build_radial_annulus(profile(ri, ro, c).scaled(amplitude), ri, ro).unwrap();
        let constant = ResidualStressField::constant(m).unwrap();
        let mut verdicts = Vec::new();
        for chart in [CoordinateChart::CYLINDRICAL, CoordinateChart::CARTESIAN] {
            let grid = annulus(ri, ro, chart).grid().unwrap();
            let entry = check_homogeneity("sum", &chart, &grid.interior_points, |x| {
                Ok(radial.value_in(&chart, x)? + constant.value_in(&chart, x)?)
            }, 1e-6).unwrap();
            verdicts.push((entry.passed, entry.residual));
        }
        prop_assert_eq!(verdicts[0].0, verdicts[1].0);
        prop_assert!((verdicts[0].1 - verdicts[1].1).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Unit-norm constant fields in random directions are never traction free.
    #[test]
    fn nonzero_constant_fields_are_not_admissible(
        direction in prop::array::uniform6(-1.0..1.0f64)
            .prop_filter("nonzero", |d| d.iter().any(|v| v.abs() > 1e-3)),
        shape in 0..3usize,
    ) {
        let v = Vector3::new(direction[0], direction[1], direction[2]);
        let w = Vector3::new(direction[3], direction[4], direction[5]);
        let mut m = Matrix3::from_diagonal(&v);
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            m[(i, j)] = w[k];
            m[(j, i)] = w[k];
        }
        let m = m / m.norm();
        let field = ResidualStressField::constant(m).unwrap();
        let domain = match shape {
            0 => DomainSpec::new(
                DomainShape::Box { min: [-1.0; 3], max: [1.0; 3] },
                CoordinateChart::CARTESIAN,
                [4, 4, 4],
            )
            .unwrap(),
            1 => annulus(1.0, 2.0, CoordinateChart::CYLINDRICAL),
            _ => shell(1.0, 2.0, CoordinateChart::SPHERICAL),
        };
        let metric = MaterialMetricField::induced(domain.chart);
        let [_, traction] = check_admissibility(
            &field,
            &metric,
            &domain,
            &Tolerances::default(),
            DivergenceBackend::Analytic,
        )
        .unwrap();
        prop_assert!(!traction.passed, "traction residual {:e}", traction.residual);
    }
}
