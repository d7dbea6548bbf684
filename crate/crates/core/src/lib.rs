//! Verification toolkit for universal deformations of compressible isotropic
//! Cauchy elastic solids carrying residual stress.
//!
//! The crate is organised bottom-up:
//!
//! - [`charts`]: curvilinear charts on Euclidean 3-space, coordinate tensors,
//!   Christoffel symbols and covariant divergence.
//! - [`kinematics`]: deformation families, material metrics, Cauchy-Green
//!   tensors, principal invariants and stress transport.
//! - [`constitutive`]: joint invariants of (strain, residual stress), polynomial
//!   response functions and the stress representations built on them.
//! - [`residual`]: residual-stress fields, sample domains and the
//!   admissibility / homogeneity checks.
//! - [`universality`]: the term-wise universality constraints plus the
//!   randomized-material equilibrium cross-check, aggregated into a
//!   [`universality::ConstraintReport`].
//! - [`scenario`]: declarative JSON scenario configs, report documents and the
//!   bundled demo suite.

pub mod charts;
pub mod constitutive;
mod error;
pub mod kinematics;
pub mod poly;
pub mod residual;
pub mod rng;
pub mod scenario;
pub mod universality;

pub use charts::{ChartKind, CoordinateChart, Metric, Point, SampleGrid, Tensor2, Variance};
pub use constitutive::{InvariantVector, ResponseFunctionSet, ResponseMode};
pub use error::{Error, Result};
pub use kinematics::{DeformationField, MaterialMetricField, StrainState};
pub use residual::{DomainSpec, ResidualStressField};
pub use universality::{ConstraintReport, Verdict};
