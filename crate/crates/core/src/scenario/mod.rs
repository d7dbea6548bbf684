//! Declarative scenario configs, report documents and batch execution.

mod config;
mod run;

pub use config::{
    ChecksConfig, DomainConfig, OutputConfig, OutputFormat, Overrides, Scenario, ScenarioConfig,
    SeedsConfig,
};
pub use run::{
    exit_code, load_config, run_check, run_config, run_scenario, run_suite, CheckOutcome,
    OutputTarget, ReportDocument, SuiteOutcome, SuiteRow, DEFAULT_OUTPUT_DIR, EXIT_INCOMPLETE,
    EXIT_INPUT_ERROR, EXIT_NOT_UNIVERSAL, EXIT_UNIVERSAL, REPORT_SCHEMA_VERSION,
};

use crate::error::{Error, Result};

/// Bundled demo configs as `(name, json)`.
pub const DEMOS: [(&str, &str); 6] = [
    (
        "affine_no_residual",
        include_str!("../../scenarios/affine_no_residual.json"),
    ),
    (
        "annulus_residual",
        include_str!("../../scenarios/annulus_residual.json"),
    ),
    (
        "inflation_no_residual",
        include_str!("../../scenarios/inflation_no_residual.json"),
    ),
    (
        "affine_constant_residual",
        include_str!("../../scenarios/affine_constant_residual.json"),
    ),
    (
        "eigenstrain_uniform",
        include_str!("../../scenarios/eigenstrain_uniform.json"),
    ),
    (
        "sphere_radial",
        include_str!("../../scenarios/sphere_radial.json"),
    ),
];

/// Source text of a bundled demo.
pub fn demo_source(name: &str) -> Result<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    DEMOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| {
            let known: Vec<&str> = DEMOS.iter().map(|(n, _)| *n).collect();
            Error::Input(format!(
                "unknown demo {name:?}; available: {}",
                known.join(", ")
            ))
        })
}

/// Parsed bundled demo config.
pub fn demo(name: &str) -> Result<ScenarioConfig> {
    ScenarioConfig::from_json(demo_source(name)?)
}
