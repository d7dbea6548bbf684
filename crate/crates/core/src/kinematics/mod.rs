//! Deformations, strain measures and stress transport.

mod deformation;
mod metric;

pub use deformation::{DeformationFamily, DeformationField, JACOBIAN_FLOOR};
pub use metric::{AnelasticDistortion, MaterialMetricField, MaterialMetricMode};

use nalgebra::Matrix3;

use crate::charts::{Metric, Point, Tensor2};
use crate::error::{Error, Result};

/// Strain measures at one material point.
///
/// `f` carries `F^a_A` with rows in the current chart and columns in the
/// reference chart; `f_inv` is its inverse `F^{-A}_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainState {
    pub reference_point: Point,
    pub current_point: Point,
    pub f: Matrix3<f64>,
    pub f_inv: Matrix3<f64>,
    /// `G` at the reference point.
    pub material_metric: Metric,
    /// `g` at the current point.
    pub spatial_metric: Metric,
    /// `C_AB = g_ab F^a_A F^b_B`
    pub right_cg_flat: Tensor2,
    /// `C^A_B = G^AC C_CB`
    pub right_cg_mixed: Tensor2,
    /// `b^ab = F^a_A F^b_B G^AB`
    pub b_sharp: Tensor2,
    /// `c_ab = F^{-A}_a F^{-B}_b G_AB`
    pub c_flat: Tensor2,
    /// `c^ab = g^ac c_cd g^db`
    pub c_sharp: Tensor2,
}

impl StrainState {
    /// Builds every strain measure from `F` and the two metrics.
    pub fn from_gradient(
        f: Matrix3<f64>,
        material_metric: Metric,
        spatial_metric: Metric,
        reference_point: Point,
        current_point: Point,
    ) -> Result<Self> {
        let f_inv = invert_gradient(&f)?;
        let g = &spatial_metric;
        let gm = &material_metric;
        let c_flat_mat = f.transpose() * g.lower * f;
        let spatial_c = f_inv.transpose() * gm.lower * f_inv;
        Ok(Self {
            reference_point,
            current_point,
            f,
            f_inv,
            material_metric,
            spatial_metric,
            right_cg_flat: Tensor2::covariant(c_flat_mat),
            right_cg_mixed: Tensor2::mixed(gm.raise * c_flat_mat),
            b_sharp: Tensor2::contravariant(f * gm.raise * f.transpose()),
            c_flat: Tensor2::covariant(spatial_c),
            c_sharp: Tensor2::contravariant(g.raise * spatial_c * g.raise),
        })
    }

    /// `b^a_b`
    pub fn b_mixed(&self) -> Matrix3<f64> {
        self.b_sharp.components * self.spatial_metric.lower
    }

    /// `c^a_b`
    pub fn c_mixed(&self) -> Matrix3<f64> {
        self.c_sharp.components * self.spatial_metric.lower
    }

    /// `B^AB = F^{-A}_a F^{-B}_b g^ab`, the pull-back of `g♯`.
    pub fn b_pullback_sharp(&self) -> Matrix3<f64> {
        self.f_inv * self.spatial_metric.raise * self.f_inv.transpose()
    }

    /// `C^AB`
    pub fn right_cg_sharp(&self) -> Matrix3<f64> {
        self.material_metric.raise * self.right_cg_flat.components * self.material_metric.raise
    }

    /// `(I₁, I₂, I₃)` of `b` against `g`.
    pub fn principal_invariants(&self) -> [f64; 3] {
        principal_invariants_of_mixed(&self.b_mixed())
    }

    /// `(I₁, I₂, I₃)` of `C` against `G`.
    pub fn material_principal_invariants(&self) -> [f64; 3] {
        principal_invariants_of_mixed(&self.right_cg_mixed.components)
    }
}

fn invert_gradient(f: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let det = f.determinant();
    if det.is_nan() || det <= JACOBIAN_FLOOR {
        return Err(Error::DegenerateDeformation {
            point: [f64::NAN; 3],
            jacobian: det,
        });
    }
    f.try_inverse().ok_or(Error::DegenerateDeformation {
        point: [f64::NAN; 3],
        jacobian: det,
    })
}

/// `I₁ = tr m`, `I₂ = ½(I₁² − tr m²)`, `I₃ = det m` for mixed components `m`.
pub fn principal_invariants_of_mixed(m: &Matrix3<f64>) -> [f64; 3] {
    let i1 = m.trace();
    let i2 = 0.5 * (i1 * i1 - (m * m).trace());
    [i1, i2, m.determinant()]
}

/// `F` at `X` from a deformation field.
pub fn deformation_gradient(field: &DeformationField, x_ref: &Point) -> Result<Matrix3<f64>> {
    field.deformation_gradient(x_ref)
}

/// Full strain state of `field` at reference point `x_ref`, using the material
/// metric `metric` (so eigenstrain metrics flow into `b` and the invariants).
pub fn strain_state(
    field: &DeformationField,
    metric: &MaterialMetricField,
    x_ref: &Point,
) -> Result<StrainState> {
    let (f, x) = field.gradient_and_point(x_ref)?;
    let gm = metric.metric(x_ref)?;
    let g = field.current_chart.metric_pair(&x)?;
    StrainState::from_gradient(f, gm, g, *x_ref, x)
}

/// `(I₁, I₂, I₃)` of the left Cauchy-Green tensor.
pub fn principal_invariants(state: &StrainState) -> [f64; 3] {
    state.principal_invariants()
}

/// `σ̊^ab = F^a_A F^b_B S̊^AB`.
pub fn push_forward_stress(f: &Matrix3<f64>, s: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    invert_gradient(f)?;
    Ok(f * s * f.transpose())
}

/// `S̊ = F⁻¹ σ̊ F⁻⋆`, the inverse of [`push_forward_stress`].
pub fn pull_back_stress(f: &Matrix3<f64>, sigma: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let fi = invert_gradient(f)?;
    Ok(fi * sigma * fi.transpose())
}

/// `P^aA = F^a_B S^BA`.
pub fn first_pk_stress(f: &Matrix3<f64>, s: &Matrix3<f64>) -> Matrix3<f64> {
    f * s
}

/// Rotation factor `R` of the polar decomposition `F = R U`, for cartesian
/// components with `G = g = I`.
pub fn polar_rotation(f: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    invert_gradient(f)?;
    let eig = (f.transpose() * f).symmetric_eigen();
    let inv_sqrt = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    let u_inv = eig.eigenvectors * Matrix3::from_diagonal(&inv_sqrt) * eig.eigenvectors.transpose();
    Ok(f * u_inv)
}
