use nalgebra::Matrix3;
use proptest::prelude::*;
use unidef_core::constitutive::{
    cauchy_stress, joint_invariants_material, joint_invariants_spatial, sample_response_set,
    simple_cauchy_stress, spatial_generators,
};
use unidef_core::kinematics::{polar_rotation, push_forward_stress};
use unidef_core::poly::Polynomial;
use unidef_core::rng::SeededRng;
use unidef_core::{CoordinateChart, Metric, Point, ResponseFunctionSet, ResponseMode, StrainState};

fn state(f: Matrix3<f64>) -> StrainState {
    let x = Point::new(0.2, 0.1, -0.4);
    StrainState::from_gradient(f, Metric::euclidean(), Metric::euclidean(), x, f * x).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Under `σ̊ = F S̊ Fᵀ` the strain-only invariants agree and the first
    /// spatial stress trace equals the mixed material trace `tr(C S̊)`.
    #[test]
    fn joint_invariants_under_push_forward(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let f = rng.deformation_gradient(0.5, 2.0);
        let s = rng.symmetric(2.0);
        let st = state(f);
        let sigma = push_forward_stress(&f, &s).unwrap();
        let mat = joint_invariants_material(&st.right_cg_mixed.components, &s, &Metric::euclidean()).unwrap();
        let spa = joint_invariants_spatial(&st.b_sharp.components, &sigma, &Metric::euclidean()).unwrap();
        for k in 1..=3 {
            prop_assert!(rel(mat.get(k), spa.get(k)) < 1e-10, "I{k}");
        }
        prop_assert!(rel(spa.get(4), mat.get(7)) < 1e-10);
    }

    /// Transporting the residual stress by the polar rotation makes all ten
    /// invariants coincide.
    #[test]
    fn joint_invariants_under_rotation(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let f = rng.deformation_gradient(0.5, 2.0);
        let s = rng.symmetric(2.0);
        let st = state(f);
        let r = polar_rotation(&f).unwrap();
        let sigma = r * s * r.transpose();
        let mat = joint_invariants_material(&st.right_cg_mixed.components, &s, &Metric::euclidean()).unwrap();
        let spa = joint_invariants_spatial(&st.b_sharp.components, &sigma, &Metric::euclidean()).unwrap();
        for k in 1..=10 {
            prop_assert!(rel(mat.get(k), spa.get(k)) < 1e-10, "I{k}: {} vs {}", mat.get(k), spa.get(k));
        }
    }

    #[test]
    fn cauchy_stress_is_symmetric(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let st = state(rng.deformation_gradient(0.5, 2.0));
        let sigma = rng.symmetric(1.0);
        let set = sample_response_set(seed, ResponseMode::Full, 2, 1.0).unwrap();
        let out = cauchy_stress(&st, &sigma, &set).unwrap();
        prop_assert!(out.asymmetry() < 1e-12 * out.max_abs().max(1.0));
    }

    #[test]
    fn generators_are_symmetric(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let st = state(rng.deformation_gradient(0.5, 2.0));
        let sigma = rng.symmetric(2.0);
        for g in spatial_generators(&st, &sigma) {
            prop_assert!((g - g.transpose()).amax() < 1e-13 * g.amax().max(1.0));
        }
    }

    /// Without residual stress, a full response set whose first three
    /// functions depend on `I₁..I₃` only reproduces the simple representation.
    #[test]
    fn zero_residual_reduces_to_simple_stress(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let simple = sample_response_set(seed, ResponseMode::Simple, 2, 1.0).unwrap();
        let extra = sample_response_set(seed ^ 0x5eed, ResponseMode::Full, 2, 1.0).unwrap();
        let mut polys: Vec<Polynomial> = simple.responses().to_vec();
        polys.extend(extra.responses()[3..].iter().cloned());
        let full = ResponseFunctionSet::new(ResponseMode::Full, 2, polys).unwrap();
        let chart = CoordinateChart::CYLINDRICAL;
        let x = Point::new(rng.range(0.5, 2.0), rng.range(-3.0, 3.0), rng.range(-1.0, 1.0));
        let g = chart.metric_pair(&x).unwrap();
        let st = StrainState::from_gradient(rng.deformation_gradient(0.5, 2.0), g, g, x, x).unwrap();
        let a = cauchy_stress(&st, &Matrix3::zeros(), &full).unwrap();
        let b = simple_cauchy_stress(&st, &simple).unwrap();
        prop_assert_eq!(a.components, b.components);
    }

    /// Constant responses under a homogeneous deformation with a constant
    /// residual stress give the same stress everywhere.
    #[test]
    fn constant_responses_give_constant_stress(
        seed in any::<u64>(),
        values in prop::array::uniform8(-1.0..1.0f64),
    ) {
        let mut rng = SeededRng::new(seed);
        let f = rng.deformation_gradient(0.5, 2.0);
        let sigma = rng.symmetric(1.0);
        let set = ResponseFunctionSet::constant(ResponseMode::Full, &values).unwrap();
        let at = |x: Point| {
            let st = StrainState::from_gradient(f, Metric::euclidean(), Metric::euclidean(), x, f * x).unwrap();
            cauchy_stress(&st, &sigma, &set).unwrap().components
        };
        let here = at(Point::new(0.0, 0.0, 0.0));
        for _ in 0..5 {
            let p = Point::from(rng.vector(3.0));
            prop_assert!((at(p) - here).amax() < 1e-13 * here.amax().max(1.0));
        }
    }
}
