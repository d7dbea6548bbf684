//! Joint invariants of a strain tensor and a residual stress, and the
//! isotropic stress representations assembled from them.
//!
//! All products of tensors are formed through mixed components: e.g.
//! `(b σ̊)^ab = b^a_c σ̊^cb = b^ad g_dc σ̊^cb`. Symmetric pairs such as
//! `b σ̊ + σ̊ b` are assembled as `P + Pᵀ`, which is exactly symmetric.

mod response;

pub use response::{
    sample_response_set, ResponseFunctionSet, ResponseMode, ResponseSetDocument, INVARIANT_COUNT,
};

use nalgebra::Matrix3;

use crate::charts::{Metric, Tensor2};
use crate::error::{Error, Result};
use crate::kinematics::{principal_invariants_of_mixed, StrainState};

/// `I₁..I₁₀`, stored zero-based (`self.0[0]` is `I₁`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InvariantVector(pub [f64; 10]);

impl InvariantVector {
    /// Invariant `I_k` with one-based `k`.
    pub fn get(&self, k: usize) -> f64 {
        self.0[k - 1]
    }

    /// Vector carrying only `I₁..I₃`.
    pub fn from_principal(p: [f64; 3]) -> Self {
        let mut v = [0.0; 10];
        v[..3].copy_from_slice(&p);
        Self(v)
    }
}

fn check_symmetric(s: &Matrix3<f64>, what: &str) -> Result<()> {
    let asym = (s - s.transpose()).abs().max();
    if asym > 1e-10 * s.abs().max().max(1.0) || s.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input(format!(
            "{what} is not symmetric (asymmetry {asym:e})"
        )));
    }
    Ok(())
}

/// Ten invariants from mixed strain `a` and mixed residual stress `s`.
fn joint_invariants_mixed(a: &Matrix3<f64>, s: &Matrix3<f64>) -> InvariantVector {
    let [i1, i2, i3] = principal_invariants_of_mixed(a);
    let a2 = a * a;
    let s2 = s * s;
    InvariantVector([
        i1,
        i2,
        i3,
        s.trace(),
        s2.trace(),
        (s2 * s).trace(),
        (a * s).trace(),
        (a2 * s).trace(),
        (a * s2).trace(),
        (a2 * s2).trace(),
    ])
}

/// Invariants of `(C, S̊)` against the material metric `G`.
///
/// `c_mixed` is `C^A_B`; `s` is contravariant `S̊^AB`.
pub fn joint_invariants_material(
    c_mixed: &Matrix3<f64>,
    s: &Matrix3<f64>,
    material_metric: &Metric,
) -> Result<InvariantVector> {
    check_symmetric(s, "residual stress")?;
    Ok(joint_invariants_mixed(
        c_mixed,
        &(s * material_metric.lower),
    ))
}

/// Invariants of `(b, σ̊)` against the spatial metric `g`.
///
/// `b` and `sigma` are contravariant.
pub fn joint_invariants_spatial(
    b: &Matrix3<f64>,
    sigma: &Matrix3<f64>,
    spatial_metric: &Metric,
) -> Result<InvariantVector> {
    check_symmetric(sigma, "residual stress")?;
    let g = &spatial_metric.lower;
    Ok(joint_invariants_mixed(&(b * g), &(sigma * g)))
}

/// The eight spatial generators
/// `{g♯, b♯, c♯, σ̊, σ̊², bσ̊+σ̊b, cσ̊+σ̊c, bσ̊²+σ̊²b}`, contravariant.
pub fn spatial_generators(state: &StrainState, sigma: &Matrix3<f64>) -> [Matrix3<f64>; 8] {
    let g = &state.spatial_metric;
    let b = state.b_sharp.components;
    let c = state.c_sharp.components;
    generators(&g.raise, &b, &c, sigma, &g.lower)
}

/// The eight material generators
/// `{G♯, C♯, B♯, S̊, S̊², CS̊+S̊C, BS̊+S̊B, CS̊²+S̊²C}`, contravariant.
pub fn material_generators(state: &StrainState, s: &Matrix3<f64>) -> [Matrix3<f64>; 8] {
    let gm = &state.material_metric;
    generators(
        &gm.raise,
        &state.right_cg_sharp(),
        &state.b_pullback_sharp(),
        s,
        &gm.lower,
    )
}

fn generators(
    metric_sharp: &Matrix3<f64>,
    a: &Matrix3<f64>,
    a_inv: &Matrix3<f64>,
    s: &Matrix3<f64>,
    lower: &Matrix3<f64>,
) -> [Matrix3<f64>; 8] {
    let sym_pair = |p: Matrix3<f64>| p + p.transpose();
    let s_sq = s * lower * s;
    let s_sq = (s_sq + s_sq.transpose()) * 0.5;
    [
        *metric_sharp,
        *a,
        *a_inv,
        *s,
        s_sq,
        sym_pair(a * lower * s),
        sym_pair(a_inv * lower * s),
        sym_pair(a * lower * s_sq),
    ]
}

/// `Σ coeffs[i] · gens[i]`, accumulated left to right.
pub fn assemble(coeffs: &[f64], gens: &[Matrix3<f64>]) -> Matrix3<f64> {
    let mut acc = gens[0] * coeffs[0];
    for (c, g) in coeffs.iter().zip(gens).skip(1) {
        acc += g * *c;
    }
    acc
}

/// Cauchy stress
/// `σ = α₀g♯ + α₁b♯ + α₂c♯ + α₃σ̊ + α₄σ̊² + α₅(bσ̊+σ̊b) + α₆(cσ̊+σ̊c) + α₇(bσ̊²+σ̊²b)`
/// with `α_i` evaluated at the spatial joint invariants.
pub fn cauchy_stress(
    state: &StrainState,
    sigma: &Matrix3<f64>,
    responses: &ResponseFunctionSet,
) -> Result<Tensor2> {
    responses.require(ResponseMode::Full)?;
    let inv = joint_invariants_spatial(&state.b_sharp.components, sigma, &state.spatial_metric)?;
    let alpha = responses.evaluate(&inv);
    Ok(Tensor2::contravariant(assemble(
        &alpha,
        &spatial_generators(state, sigma),
    )))
}

/// Second Piola-Kirchhoff stress from the material generator set, with `β_i`
/// evaluated at the material joint invariants.
pub fn second_pk_stress(
    state: &StrainState,
    s: &Matrix3<f64>,
    responses: &ResponseFunctionSet,
) -> Result<Tensor2> {
    responses.require(ResponseMode::Full)?;
    let inv =
        joint_invariants_material(&state.right_cg_mixed.components, s, &state.material_metric)?;
    let beta = responses.evaluate(&inv);
    Ok(Tensor2::contravariant(assemble(
        &beta,
        &material_generators(state, s),
    )))
}

/// `σ = α g♯ + β b♯ + γ c♯` with `(α, β, γ)` at `(I₁, I₂, I₃)`.
pub fn simple_cauchy_stress(
    state: &StrainState,
    responses: &ResponseFunctionSet,
) -> Result<Tensor2> {
    responses.require(ResponseMode::Simple)?;
    let inv = InvariantVector::from_principal(state.principal_invariants());
    let coeffs = responses.evaluate(&inv);
    let gens = [
        state.spatial_metric.raise,
        state.b_sharp.components,
        state.c_sharp.components,
    ];
    Ok(Tensor2::contravariant(assemble(&coeffs, &gens)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::Point;
    use nalgebra::Vector3;

    fn diag(a: f64, b: f64, c: f64) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(a, b, c))
    }

    fn cart_state(f: Matrix3<f64>) -> StrainState {
        StrainState::from_gradient(
            f,
            Metric::euclidean(),
            Metric::euclidean(),
            Point::zeros(),
            Point::zeros(),
        )
        .unwrap()
    }

    fn unit(k: usize) -> Vec<f64> {
        (0..8).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
    }

    #[test]
    fn identity_strain_no_residual() {
        let inv = joint_invariants_material(
            &Matrix3::identity(),
            &Matrix3::zeros(),
            &Metric::euclidean(),
        )
        .unwrap();
        assert_eq!(inv.0, [3.0, 3.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let sp = joint_invariants_spatial(
            &Matrix3::identity(),
            &Matrix3::zeros(),
            &Metric::euclidean(),
        )
        .unwrap();
        assert_eq!(sp, inv);
    }

    #[test]
    fn deviatoric_residual_invariants() {
        let inv = joint_invariants_material(
            &Matrix3::identity(),
            &diag(1.0, -1.0, 0.0),
            &Metric::euclidean(),
        )
        .unwrap();
        assert_eq!(&inv.0[3..], &[0.0, 2.0, 0.0, 0.0, 0.0, 2.0, 2.0]);
    }

    #[test]
    fn stretched_invariants() {
        let m = joint_invariants_material(
            &diag(4.0, 1.0, 1.0),
            &diag(1.0, 0.0, 0.0),
            &Metric::euclidean(),
        )
        .unwrap();
        assert_eq!(
            [m.get(7), m.get(8), m.get(9), m.get(10)],
            [4.0, 16.0, 4.0, 16.0]
        );
        let s = joint_invariants_spatial(
            &diag(4.0, 1.0, 1.0),
            &diag(1.0, 0.0, 0.0),
            &Metric::euclidean(),
        )
        .unwrap();
        assert_eq!([s.get(7), s.get(8)], [4.0, 16.0]);
    }

    #[test]
    fn asymmetric_residual_rejected() {
        let mut s = Matrix3::zeros();
        s[(0, 1)] = 1.0;
        assert!(joint_invariants_material(&Matrix3::identity(), &s, &Metric::euclidean()).is_err());
    }

    #[test]
    fn cauchy_stress_examples() {
        let id = cart_state(Matrix3::identity());
        let mut coeffs = vec![0.0; 8];
        coeffs[0] = -1.0;
        coeffs[1] = 1.0;
        let set = ResponseFunctionSet::constant(ResponseMode::Full, &coeffs).unwrap();
        assert_eq!(
            cauchy_stress(&id, &Matrix3::zeros(), &set)
                .unwrap()
                .components,
            Matrix3::zeros()
        );

        let sig = Matrix3::new(1.0, 0.5, 0.0, 0.5, -2.0, 0.1, 0.0, 0.1, 0.3);
        let set = ResponseFunctionSet::constant(ResponseMode::Full, &unit(3)).unwrap();
        let st = cart_state(Matrix3::new(1.0, 0.2, 0.0, 0.0, 1.1, 0.0, 0.3, 0.0, 0.9));
        assert_eq!(cauchy_stress(&st, &sig, &set).unwrap().components, sig);

        let set = ResponseFunctionSet::constant(ResponseMode::Full, &unit(1)).unwrap();
        let st = cart_state(diag(2.0, 1.0, 1.0));
        assert_eq!(
            cauchy_stress(&st, &Matrix3::zeros(), &set)
                .unwrap()
                .components,
            diag(4.0, 1.0, 1.0)
        );
    }

    #[test]
    fn second_pk_examples() {
        let id = cart_state(Matrix3::identity());
        let set = ResponseFunctionSet::constant(ResponseMode::Full, &unit(0)).unwrap();
        assert_eq!(
            second_pk_stress(&id, &Matrix3::zeros(), &set)
                .unwrap()
                .components,
            Matrix3::identity()
        );
        let s = Matrix3::new(0.2, 0.1, 0.0, 0.1, 0.4, 0.0, 0.0, 0.0, -0.3);
        let set = ResponseFunctionSet::constant(ResponseMode::Full, &unit(3)).unwrap();
        let st = cart_state(diag(1.3, 0.9, 1.0));
        assert_eq!(second_pk_stress(&st, &s, &set).unwrap().components, s);
    }

    #[test]
    fn simple_stress_examples() {
        let id = cart_state(Matrix3::identity());
        let set = ResponseFunctionSet::constant(ResponseMode::Simple, &[-1.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            simple_cauchy_stress(&id, &set).unwrap().components,
            Matrix3::zeros()
        );
        let st = cart_state(diag(2.0, 1.0, 1.0));
        let set = ResponseFunctionSet::constant(ResponseMode::Simple, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            simple_cauchy_stress(&st, &set).unwrap().components,
            diag(4.0, 1.0, 1.0)
        );
        let set = ResponseFunctionSet::constant(ResponseMode::Simple, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            simple_cauchy_stress(&st, &set).unwrap().components,
            diag(0.25, 1.0, 1.0)
        );
    }

    #[test]
    fn mode_mismatch_is_error() {
        let st = cart_state(Matrix3::identity());
        let simple = ResponseFunctionSet::constant(ResponseMode::Simple, &[0.0; 3]).unwrap();
        let full = ResponseFunctionSet::constant(ResponseMode::Full, &[0.0; 8]).unwrap();
        assert!(matches!(
            cauchy_stress(&st, &Matrix3::zeros(), &simple),
            Err(Error::Mode { .. })
        ));
        assert!(matches!(
            second_pk_stress(&st, &Matrix3::zeros(), &simple),
            Err(Error::Mode { .. })
        ));
        assert!(matches!(
            simple_cauchy_stress(&st, &full),
            Err(Error::Mode { .. })
        ));
    }
}
