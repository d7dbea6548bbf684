use serde::{Deserialize, Serialize};

use crate::charts::GridSpacing;

/// One verified constraint: the worst residual over the grid and its verdict.
///
/// An entry passes iff `residual <= tolerance * scale`, where `scale` is
/// `max(1, magnitude of the field involved)` for relative checks and `1` for
/// absolute ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintEntry {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub scale: f64,
    pub passed: bool,
    pub backend: String,
    pub evaluated_points: usize,
    pub skipped_points: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_seed: Vec<SeedResidual>,
}

impl ConstraintEntry {
    pub fn new(
        name: impl Into<String>,
        residual: f64,
        tolerance: f64,
        scale: f64,
        backend: &str,
        evaluated_points: usize,
    ) -> Self {
        // Non-finite residuals cannot round-trip through JSON and always fail.
        let (residual, finite) = if residual.is_finite() {
            (residual, true)
        } else {
            (f64::MAX, false)
        };
        let scale = if scale.is_finite() { scale } else { f64::MAX };
        Self {
            name: name.into(),
            residual,
            tolerance,
            scale,
            passed: finite && residual <= tolerance * scale,
            backend: backend.to_string(),
            evaluated_points,
            skipped_points: 0,
            per_seed: Vec::new(),
        }
    }

    pub fn with_skipped(mut self, skipped: usize) -> Self {
        self.skipped_points = skipped;
        self
    }
}

/// Equilibrium residual of one sampled material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedResidual {
    pub seed: u64,
    /// Largest `|div σ|` over the grid.
    pub residual: f64,
    /// `max(1, largest |σ|)` over the grid.
    pub scale: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Universal,
    NotUniversal,
    /// A sub-check lost too many stencil points; no verdict is given.
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub config_hash: String,
    pub prng: String,
    pub seeds: Vec<u64>,
    pub grid: GridSpacing,
}

/// Aggregated outcome of a universality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintReport {
    pub path: String,
    pub constraints: Vec<ConstraintEntry>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coverage_errors: Vec<String>,
    pub provenance: Provenance,
    pub evaluations: Evaluations,
}

/// Work counters of a run. They depend only on the inputs, never on
/// scheduling, so reports stay byte-identical across runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Evaluations {
    pub interior_points: usize,
    pub boundary_points: usize,
    /// Reference points at which the strain state was evaluated.
    pub stencil_evaluations: usize,
    pub material_samples: usize,
}

impl ConstraintReport {
    pub fn entry(&self, name: &str) -> Option<&ConstraintEntry> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Whether every entry whose name starts with `prefix` passed.
    pub fn group_passed(&self, prefix: &str) -> bool {
        self.constraints
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .all(|c| c.passed)
    }

    pub fn worst_relative_residual(&self) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.residual / (c.tolerance * c.scale))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn aggregate(constraints: &[ConstraintEntry], coverage_errors: &[String]) -> Verdict {
    if !coverage_errors.is_empty() {
        Verdict::Incomplete
    } else if constraints.iter().all(|c| c.passed) {
        Verdict::Universal
    } else {
        Verdict::NotUniversal
    }
}
