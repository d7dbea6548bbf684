use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Overrides, ScenarioConfig};
use crate::error::{Error, Result};
use crate::universality::{
    check, ConstraintEntry, ConstraintReport, Evaluations, Problem, Provenance, Verdict,
};

/// Schema identifier written into every report.
pub const REPORT_SCHEMA_VERSION: &str = "unidef-report/1";

/// Directory used when neither the config nor the caller names an output.
pub const DEFAULT_OUTPUT_DIR: &str = "reports";

pub const EXIT_UNIVERSAL: i32 = 0;
pub const EXIT_NOT_UNIVERSAL: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

/// Serialized form of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: String,
    pub config_echo: ScenarioConfig,
    pub prng: String,
    pub path: String,
    pub constraints: Vec<ConstraintEntry>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coverage_errors: Vec<String>,
    pub provenance: Provenance,
    /// Work counters; wall-clock time is deliberately left out so identical
    /// inputs give identical bytes.
    pub timings: Evaluations,
}

impl ReportDocument {
    pub fn new(config: ScenarioConfig, report: ConstraintReport) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            config_echo: config,
            prng: report.provenance.prng.clone(),
            path: report.path,
            constraints: report.constraints,
            verdict: report.verdict,
            coverage_errors: report.coverage_errors,
            provenance: report.provenance,
            timings: report.evaluations,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ReportDocument =
            serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        if doc.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Input(format!(
                "unsupported report schema {}",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Largest `residual / (tolerance * scale)` over all entries.
    pub fn worst_ratio(&self) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.residual / (c.tolerance * c.scale))
            .fold(0.0, f64::max)
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.verdict)
    }
}

pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Universal => EXIT_UNIVERSAL,
        Verdict::NotUniversal => EXIT_NOT_UNIVERSAL,
        Verdict::Incomplete => EXIT_INCOMPLETE,
    }
}

/// Runs a parsed config after applying `overrides`.
pub fn run_scenario(config: &ScenarioConfig, overrides: &Overrides) -> Result<ReportDocument> {
    let effective = config.with_overrides(overrides)?;
    let scenario = effective.build()?;
    let problem = Problem::new(
        &scenario.deformation,
        &scenario.material_metric,
        &scenario.residual_stress,
        &scenario.domain,
    );
    let report = check(&problem, &scenario.check)?;
    Ok(ReportDocument::new(effective, report))
}

/// Where a run writes its report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputTarget {
    /// Explicit report path; wins over everything else.
    pub path: Option<PathBuf>,
    /// Directory for `<name>.report.json` when no path is given by the
    /// caller or the config.
    pub dir: Option<PathBuf>,
}

impl OutputTarget {
    pub fn resolve(&self, config: &ScenarioConfig) -> PathBuf {
        if let Some(p) = &self.path {
            return p.clone();
        }
        if let Some(p) = &config.output.path {
            return PathBuf::from(p);
        }
        let dir = self
            .dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        dir.join(format!("{}.report.json", config.name))
    }
}

/// Result of one `check` invocation.
#[derive(Debug)]
pub struct CheckOutcome {
    pub exit_code: i32,
    pub report: Option<ReportDocument>,
    pub report_path: Option<PathBuf>,
    pub error: Option<Error>,
}

impl CheckOutcome {
    fn failed(error: Error) -> Self {
        Self {
            exit_code: EXIT_INPUT_ERROR,
            report: None,
            report_path: None,
            error: Some(error),
        }
    }
}

fn write_report(path: &Path, report: &ReportDocument) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| Error::Input(format!("cannot create {}: {e}", parent.display())))?;
    }
    fs::write(path, report.to_json())
        .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    ScenarioConfig::from_json(&text)
}

/// Runs a parsed config and writes its report.
pub fn run_config(
    config: &ScenarioConfig,
    overrides: &Overrides,
    output: &OutputTarget,
) -> CheckOutcome {
    let report = match run_scenario(config, overrides) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::failed(e),
    };
    let path = output.resolve(config);
    if let Err(e) = write_report(&path, &report) {
        return CheckOutcome::failed(e);
    }
    CheckOutcome {
        exit_code: report.exit_code(),
        report: Some(report),
        report_path: Some(path),
        error: None,
    }
}

/// Loads, runs and reports one config file. Exit codes: 0 universal,
/// 1 not universal, 2 input or configuration error, 3 incomplete coverage.
pub fn run_check(config_path: &Path, overrides: &Overrides, output: &OutputTarget) -> CheckOutcome {
    match load_config(config_path) {
        Ok(config) => run_config(&config, overrides, output),
        Err(e) => CheckOutcome::failed(e),
    }
}

/// One row of a suite summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub file: String,
    pub name: String,
    pub verdict: Option<Verdict>,
    pub expected: Option<Verdict>,
    pub worst_ratio: Option<f64>,
    pub wall_time_ms: f64,
    pub matched: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub rows: Vec<SuiteRow>,
    pub exit_code: i32,
}

fn verdict_label(v: Option<Verdict>) -> &'static str {
    match v {
        Some(Verdict::Universal) => "universal",
        Some(Verdict::NotUniversal) => "not_universal",
        Some(Verdict::Incomplete) => "incomplete",
        None => "-",
    }
}

impl SuiteOutcome {
    /// Fixed-width summary table, one row per scenario.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<28} {:<14} {:<14} {:>12} {:>10}  {}\n",
            "scenario", "verdict", "expected", "worst r/tol", "time ms", "status"
        );
        for r in &self.rows {
            let status = match (&r.error, r.matched) {
                (Some(e), _) => format!("ERROR: {e}"),
                (None, true) => "ok".to_string(),
                (None, false) => "MISMATCH".to_string(),
            };
            out.push_str(&format!(
                "{:<28} {:<14} {:<14} {:>12} {:>10.1}  {}\n",
                r.name,
                verdict_label(r.verdict),
                verdict_label(r.expected),
                r.worst_ratio
                    .map_or("-".to_string(), |w| format!("{w:.3e}")),
                r.wall_time_ms,
                status
            ));
        }
        out
    }
}

/// Runs every `*.json` config in `dir` (sorted by file name). Exit 0 iff
/// every scenario ran and matched its `expected` verdict, 2 for an empty or
/// unreadable directory, 1 otherwise.
pub fn run_suite(dir: &Path, overrides: &Overrides, output: &OutputTarget) -> SuiteOutcome {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(_) => Vec::new(),
    };
    files.sort();
    if files.is_empty() {
        return SuiteOutcome {
            rows: Vec::new(),
            exit_code: EXIT_INPUT_ERROR,
        };
    }
    let rows: Vec<SuiteRow> = files
        .par_iter()
        .map(|file| {
            let start = Instant::now();
            let label = file
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default();
            let (name, expected, outcome) = match load_config(file) {
                Ok(cfg) => {
                    let target = OutputTarget {
                        path: None,
                        dir: output.dir.clone(),
                    };
                    (
                        cfg.name.clone(),
                        cfg.expected,
                        run_config(&cfg, overrides, &target),
                    )
                }
                Err(e) => (label.clone(), None, CheckOutcome::failed(e)),
            };
            let verdict = outcome.report.as_ref().map(|r| r.verdict);
            let matched = outcome.error.is_none() && expected.is_none_or(|e| Some(e) == verdict);
            SuiteRow {
                file: label,
                name,
                verdict,
                expected,
                worst_ratio: outcome.report.as_ref().map(|r| r.worst_ratio()),
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                matched,
                error: outcome.error.map(|e| e.to_string()),
            }
        })
        .collect();
    let exit_code = if rows.iter().all(|r| r.matched) {
        EXIT_UNIVERSAL
    } else {
        EXIT_NOT_UNIVERSAL
    };
    SuiteOutcome { rows, exit_code }
}
