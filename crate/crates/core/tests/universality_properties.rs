use std::collections::BTreeMap;

use nalgebra::Matrix3;
use proptest::prelude::*;
use unidef_core::kinematics::{DeformationFamily, DeformationField};
use unidef_core::poly::Poly1;
use unidef_core::residual::DomainShape;
use unidef_core::rng::SeededRng;
use unidef_core::scenario::{demo, run_scenario, Overrides, DEMOS};
use unidef_core::universality::{
    check, seed_list, CheckConfig, CheckGroup, CheckPath, ConstraintEntry, Problem, Verdict,
};
use unidef_core::{
    ConstraintReport, CoordinateChart, DomainSpec, MaterialMetricField, ResidualStressField,
};

const TERM_WISE: [&str; 3] = ["invariant_constancy", "divergence_free", "homogeneity"];

fn term_wise_passed(report: &ConstraintReport) -> bool {
    TERM_WISE.iter().all(|g| report.group_passed(g))
}

fn sampled(report: &ConstraintReport) -> &ConstraintEntry {
    report
        .entry("sampled_equilibrium")
        .expect("sampled equilibrium ran")
}

fn flags(entries: &[ConstraintEntry]) -> Vec<(String, bool)> {
    entries.iter().map(|e| (e.name.clone(), e.passed)).collect()
}

fn run(
    deformation: &DeformationField,
    residual: &ResidualStressField,
    domain: &DomainSpec,
    seeds: Vec<u64>,
) -> ConstraintReport {
    let metric = MaterialMetricField::induced(domain.chart);
    let problem = Problem::new(deformation, &metric, residual, domain);
    check(
        &problem,
        &CheckConfig::new(CheckPath::ResidualStress).with_seeds(seeds),
    )
    .unwrap()
}

fn small_box() -> DomainSpec {
    DomainSpec::new(
        DomainShape::Box {
            min: [-1.0; 3],
            max: [1.0; 3],
        },
        CoordinateChart::CARTESIAN,
        [5, 5, 5],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Whenever the term-wise checks pass, every sampled material is in
    /// equilibrium.
    #[test]
    fn term_wise_pass_implies_sampled_pass(seed in any::<u64>(), with_residual in any::<bool>()) {
        let mut rng = SeededRng::new(seed);
        let a = rng.deformation_gradient(0.5, 2.0);
        let deformation = DeformationField::new(
            DeformationFamily::affine(a),
            CoordinateChart::CARTESIAN,
            CoordinateChart::CARTESIAN,
        )
        .unwrap();
        let residual = if with_residual {
            ResidualStressField::constant(rng.symmetric(1.0)).unwrap()
        } else {
            ResidualStressField::zero()
        };
        let report = run(&deformation, &residual, &small_box(), seed_list(seed, 4));
        prop_assert!(term_wise_passed(&report));
        let eq = sampled(&report);
        prop_assert!(eq.passed && eq.per_seed.iter().all(|s| s.passed), "{eq:?}");
    }

    /// Shrinking an admissible residual stress never flips the triviality
    /// check before its peak value drops below tolerance.
    #[test]
    fn triviality_is_monotone_in_amplitude(t in 1e-9..1.0f64) {
        let config = demo("annulus_residual").unwrap();
        let scenario = config.build().unwrap();
        let problem = |field: &ResidualStressField| {
            let p = Problem::new(&scenario.deformation, &scenario.material_metric, field, &scenario.domain);
            let cfg = CheckConfig::new(CheckPath::ResidualStress).with_groups(vec![CheckGroup::Triviality]);
            check(&p, &cfg).unwrap().entry("triviality.residual_stress").unwrap().clone()
        };
        let full = problem(&scenario.residual_stress);
        let scaled = problem(&scenario.residual_stress.scaled(t).unwrap());
        let peak = t * full.residual;
        prop_assert!((scaled.residual - peak).abs() <= 1e-12 * full.residual);
        if (peak - full.tolerance).abs() > 1e-9 * full.tolerance {
            prop_assert_eq!(scaled.passed, peak < full.tolerance);
        }
    }
}

/// Every built-in inhomogeneous deformation fails a term-wise check and
/// leaves at least one sampled material out of equilibrium.
#[test]
fn inhomogeneous_deformations_fail_both_ways() {
    let annulus = DomainSpec::new(
        DomainShape::Annulus {
            ri: 1.0,
            ro: 2.0,
            height: 1.0,
        },
        CoordinateChart::CYLINDRICAL,
        [8, 8, 4],
    )
    .unwrap();
    let shell = DomainSpec::new(
        DomainShape::SphericalShell { ri: 1.0, ro: 2.0 },
        CoordinateChart::SPHERICAL,
        [8, 8, 4],
    )
    .unwrap();
    let mut shear = BTreeMap::new();
    shear.insert("1.0.0".to_string(), 1.0);
    shear.insert("0.2.0".to_string(), 0.3);
    let components = [
        shear,
        BTreeMap::from([("0.1.0".to_string(), 1.0)]),
        BTreeMap::from([("0.0.1".to_string(), 1.0)]),
    ];
    let cases = [
        (
            DeformationFamily::CylindricalInflation {
                a: 1.0,
                lambda: 1.0,
            },
            annulus,
        ),
        (
            DeformationFamily::RadialSphere {
                profile: Poly1::new(vec![0.0, 1.0, 0.2]),
            },
            shell,
        ),
        (
            DeformationFamily::UserPolynomial { components },
            small_box(),
        ),
    ];
    for (family, domain) in cases {
        let name = family.name();
        let deformation = DeformationField::new(family, domain.chart, domain.chart).unwrap();
        let report = run(
            &deformation,
            &ResidualStressField::zero(),
            &domain,
            seed_list(0, 10),
        );
        assert!(
            !term_wise_passed(&report),
            "{name}: term-wise checks all passed"
        );
        assert!(
            sampled(&report).per_seed.iter().any(|s| !s.passed),
            "{name}: every sampled material balanced"
        );
        assert_eq!(report.verdict, Verdict::NotUniversal, "{name}");
    }
}

#[test]
fn verdicts_survive_grid_refinement() {
    for (name, _) in DEMOS {
        let config = demo(name).unwrap();
        let coarse = run_scenario(&config, &Overrides::default()).unwrap();
        let fine = run_scenario(
            &config,
            &Overrides {
                grid_scale: Some(2),
                ..Overrides::default()
            },
        )
        .unwrap();
        assert_eq!(
            flags(&coarse.constraints),
            flags(&fine.constraints),
            "{name}"
        );
        assert_eq!(coarse.verdict, fine.verdict, "{name}");
    }
}

#[test]
fn verdicts_are_seed_stable() {
    for (name, _) in DEMOS {
        let mut config = demo(name).unwrap();
        let verdicts: Vec<Verdict> = (0..5)
            .map(|batch| {
                config.seeds.base = 1_000 + 10 * batch;
                config.seeds.count = 10;
                run_scenario(&config, &Overrides::default())
                    .unwrap()
                    .verdict
            })
            .collect();
        assert!(
            verdicts.windows(2).all(|w| w[0] == w[1]),
            "{name}: {verdicts:?}"
        );
    }
}

#[test]
fn residual_stress_only_moves_the_residual_checks() {
    let deformation = DeformationField::identity(CoordinateChart::CARTESIAN);
    let m = Matrix3::new(1.0, 0.5, 0.0, 0.5, -1.0, 0.0, 0.0, 0.0, 0.25);
    let report = run(
        &deformation,
        &ResidualStressField::constant(m).unwrap(),
        &small_box(),
        seed_list(0, 3),
    );
    assert_eq!(report.verdict, Verdict::NotUniversal);
    let failing = report.failing();
    assert!(failing.contains(&"triviality.residual_stress"));
    assert!(failing.contains(&"admissibility.traction"));
    assert!(failing
        .iter()
        .all(|n| n.starts_with("triviality") || n.starts_with("admissibility")));
}
