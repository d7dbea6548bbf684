use serde::{Deserialize, Serialize};

use crate::charts::CoordinateChart;
use crate::error::{Error, Result};
use crate::kinematics::{
    DeformationFamily, DeformationField, MaterialMetricField, MaterialMetricMode,
};
use crate::residual::{DomainShape, DomainSpec, ResidualStressFamily, ResidualStressField};
use crate::universality::{
    seed_list, CheckConfig, CheckGroup, CheckPath, FdScheme, ResponseSampling, Tolerances, Verdict,
};

/// Sample domain together with its grid resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainConfig {
    Box {
        min: [f64; 3],
        max: [f64; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<[usize; 3]>,
    },
    Annulus {
        ri: f64,
        ro: f64,
        height: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<[usize; 3]>,
    },
    SphericalShell {
        ri: f64,
        ro: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<[usize; 3]>,
    },
}

impl DomainConfig {
    fn split(&self) -> (DomainShape, Option<[usize; 3]>) {
        match *self {
            DomainConfig::Box {
                min,
                max,
                resolution,
            } => (DomainShape::Box { min, max }, resolution),
            DomainConfig::Annulus {
                ri,
                ro,
                height,
                resolution,
            } => (DomainShape::Annulus { ri, ro, height }, resolution),
            DomainConfig::SphericalShell { ri, ro, resolution } => {
                (DomainShape::SphericalShell { ri, ro }, resolution)
            }
        }
    }

    fn resolution_mut(&mut self) -> &mut Option<[usize; 3]> {
        match self {
            DomainConfig::Box { resolution, .. }
            | DomainConfig::Annulus { resolution, .. }
            | DomainConfig::SphericalShell { resolution, .. } => resolution,
        }
    }

    pub fn spec(&self, chart: CoordinateChart) -> Result<DomainSpec> {
        let (shape, resolution) = self.split();
        let resolution = resolution.unwrap_or_else(|| shape.default_resolution());
        DomainSpec::new(shape, chart, resolution)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    #[serde(default)]
    pub path: CheckPath,
    /// Check groups to run; empty or absent means all groups of the path.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subset: Vec<CheckGroup>,
    /// 1-based invariant indices for the constancy check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invariants: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_scheme: Option<FdScheme>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsConfig {
    pub count: usize,
    #[serde(default)]
    pub base: u64,
}

impl Default for SeedsConfig {
    fn default() -> Self {
        Self { count: 10, base: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_metric() -> MaterialMetricMode {
    MaterialMetricMode::InducedEuclidean
}

fn default_residual() -> ResidualStressFamily {
    ResidualStressFamily::Zero
}

/// A declarative universality scenario.
///
/// `chart` is the chart of the reference configuration, the domain grid and
/// the material metric; `current_chart` defaults to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    pub chart: CoordinateChart,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub current_chart: Option<CoordinateChart>,
    pub domain: DomainConfig,
    pub deformation: DeformationFamily,
    #[serde(default = "default_metric")]
    pub material_metric: MaterialMetricMode,
    #[serde(default = "default_residual")]
    pub residual_stress: ResidualStressFamily,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seeds: SeedsConfig,
    #[serde(default)]
    pub response: ResponseSampling,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Command-line adjustments applied on top of a config.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overrides {
    /// Multiplies every tolerance.
    pub tolerance_scale: Option<f64>,
    /// Multiplies the grid resolution along every axis.
    pub grid_scale: Option<usize>,
    /// Replaces the seed count.
    pub seeds: Option<usize>,
}

/// Concrete fields and settings built from a [`ScenarioConfig`].
#[derive(Debug, Clone)]
pub struct Scenario {
    pub deformation: DeformationField,
    pub material_metric: MaterialMetricField,
    pub residual_stress: ResidualStressField,
    pub domain: DomainSpec,
    pub check: CheckConfig,
}

fn ensure_finite(value: &serde_json::Value, at: &str) -> Result<()> {
    match value {
        serde_json::Value::Number(n) => match n.as_f64() {
            Some(v) if v.is_finite() => Ok(()),
            _ => Err(Error::Config(format!("non-finite number at {at}"))),
        },
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .try_for_each(|(i, v)| ensure_finite(v, &format!("{at}[{i}]"))),
        serde_json::Value::Object(map) => map
            .iter()
            .try_for_each(|(k, v)| ensure_finite(v, &format!("{at}.{k}"))),
        _ => Ok(()),
    }
}

impl ScenarioConfig {
    /// Parses and validates a config document. Unknown keys and non-finite
    /// numbers are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        ensure_finite(&value, "$")?;
        let config: ScenarioConfig =
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        config.build()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// A copy with `overrides` folded in, so the echo in a report describes
    /// exactly what was run.
    pub fn with_overrides(&self, overrides: &Overrides) -> Result<Self> {
        let mut out = self.clone();
        if let Some(t) = overrides.tolerance_scale {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config("tolerance scale must be positive".into()));
            }
            out.tolerances = out.tolerances.scaled(t);
        }
        if let Some(g) = overrides.grid_scale {
            if g == 0 {
                return Err(Error::Config("grid scale must be at least 1".into()));
            }
            let base = self.domain.spec(self.chart)?.resolution;
            *out.domain.resolution_mut() = Some(base.map(|n| n * g));
        }
        if let Some(k) = overrides.seeds {
            out.seeds.count = k;
        }
        Ok(out)
    }

    pub fn build(&self) -> Result<Scenario> {
        if self.name.is_empty() {
            return Err(Error::Config("scenario name must not be empty".into()));
        }
        let current = self.current_chart.unwrap_or(self.chart);
        let deformation = DeformationField::new(self.deformation.clone(), self.chart, current)?;
        let material_metric = MaterialMetricField::new(self.chart, self.material_metric.clone())?;
        let residual_stress = ResidualStressField::new(self.residual_stress.clone())?;
        let domain = self.domain.spec(self.chart)?;
        if self.checks.path == CheckPath::Eigenstrain && !residual_stress.is_zero() {
            return Err(Error::Config(
                "the eigenstrain path takes no residual stress".into(),
            ));
        }
        let check = CheckConfig {
            path: self.checks.path,
            groups: self.checks.subset.clone(),
            invariants: self.checks.invariants.clone(),
            tolerances: self.tolerances,
            seeds: seed_list(self.seeds.base, self.seeds.count),
            response: self.response,
            fd_step: self.checks.fd_step,
            fd_scheme: self.checks.fd_scheme.unwrap_or_default(),
        };
        Ok(Scenario {
            deformation,
            material_metric,
            residual_stress,
            domain,
            check,
        })
    }
}
