//! `unidef`: run universality scenarios and write JSON reports.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use unidef_core::scenario::{
    demo, demo_source, run_check, run_config, run_suite, CheckOutcome, OutputTarget, Overrides,
    EXIT_INPUT_ERROR,
};

#[derive(Parser)]
#[command(
    name = "unidef",
    version,
    about = "Universality checks for residually stressed Cauchy elastic solids"
)]
struct Cli {
    /// Directory for reports when no explicit output path is given.
    #[arg(long, global = true, env = "UNIDEF_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct OverrideArgs {
    /// Multiply every tolerance by this factor.
    #[arg(long)]
    tolerance_scale: Option<f64>,
    /// Multiply the grid resolution along each axis.
    #[arg(long)]
    grid_scale: Option<usize>,
    /// Number of sampled materials.
    #[arg(long)]
    seeds: Option<usize>,
}

impl OverrideArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            tolerance_scale: self.tolerance_scale,
            grid_scale: self.grid_scale,
            seeds: self.seeds,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check one scenario config.
    Check {
        config: PathBuf,
        /// Report path.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run every config in a directory and print a summary table.
    Suite {
        dir: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Write a bundled demo config next to its report and run it.
    Demo {
        name: String,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// List bundled demos.
    Demos,
}

fn summarize(outcome: &CheckOutcome) {
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
        return;
    }
    let (Some(report), Some(path)) = (&outcome.report, &outcome.report_path) else {
        return;
    };
    println!("scenario: {}", report.config_echo.name);
    println!("verdict:  {:?}", report.verdict);
    let failing = report.failing();
    if !failing.is_empty() {
        println!("failing:  {}", failing.join(", "));
    }
    for c in &report.coverage_errors {
        eprintln!("coverage: {c}");
    }
    println!("report:   {}", path.display());
}

fn run(cli: Cli) -> i32 {
    let dir = cli.output_dir;
    match cli.command {
        Command::Check {
            config,
            output,
            overrides,
        } => {
            let target = OutputTarget { path: output, dir };
            let outcome = run_check(&config, &overrides.overrides(), &target);
            summarize(&outcome);
            outcome.exit_code
        }
        Command::Suite {
            dir: suite,
            overrides,
        } => {
            let target = OutputTarget { path: None, dir };
            let outcome = run_suite(&suite, &overrides.overrides(), &target);
            if outcome.rows.is_empty() {
                eprintln!("error: no scenario configs found in {}", suite.display());
            } else {
                print!("{}", outcome.table());
            }
            outcome.exit_code
        }
        Command::Demo { name, overrides } => {
            let (source, config) = match demo_source(&name).and_then(|s| Ok((s, demo(&name)?))) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT_ERROR;
                }
            };
            let out_dir =
                dir.unwrap_or_else(|| PathBuf::from(unidef_core::scenario::DEFAULT_OUTPUT_DIR));
            let config_path = out_dir.join(format!("{}.json", config.name));
            if let Err(e) =
                fs::create_dir_all(&out_dir).and_then(|_| fs::write(&config_path, source))
            {
                eprintln!("error: cannot write {}: {e}", config_path.display());
                return EXIT_INPUT_ERROR;
            }
            println!("config:   {}", config_path.display());
            let target = OutputTarget {
                path: None,
                dir: Some(out_dir),
            };
            let outcome = run_config(&config, &overrides.overrides(), &target);
            summarize(&outcome);
            outcome.exit_code
        }
        Command::Demos => {
            for (name, _) in unidef_core::scenario::DEMOS {
                println!("{name}");
            }
            0
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_INPUT_ERROR as u8
            } else {
                0
            });
        }
    };
    ExitCode::from(run(cli) as u8)
}
