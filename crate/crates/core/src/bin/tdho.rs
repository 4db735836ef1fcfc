//! Command-line front end: run or check a scenario configuration,
//! list the built-in scenario library.
//!
//! Exit codes: 0 all selected checks pass, 1 any check fails,
//! 2 configuration or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tdho::config::{load_config, RunConfig};
use tdho::runner::{run, OutputFormat, RunReport};
use tdho::scenario::{builtin_scenario, builtin_scenarios};

#[derive(Parser)]
#[command(name = "tdho", version, about = "Invariants of the driven time-dependent harmonic oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the configured checks and write time series plus report.
    Run {
        /// Path to a JSON configuration, or the name of a built-in scenario.
        config: String,
        /// Output directory for series and report files.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Series output format.
        #[arg(long, value_parser = parse_format, default_value = "json")]
        format: OutputFormat,
    },
    /// Execute the checks without emitting series; report only.
    Check {
        /// Path to a JSON configuration, or the name of a built-in scenario.
        config: String,
    },
    /// List the built-in scenario library.
    ListScenarios,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("unknown format '{other}', expected csv or json")),
    }
}

fn resolve_config(arg: &str) -> Result<RunConfig, tdho::Error> {
    if let Some(builtin) = builtin_scenario(arg) {
        return Ok(RunConfig::from_builtin(&builtin));
    }
    load_config(std::path::Path::new(arg))
}

fn print_report(report: &RunReport) {
    for entry in &report.checks {
        let status = if entry.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {name}: drift {drift:.3e} (threshold {th:.1e})",
            name = entry.name,
            drift = entry.relative_drift,
            th = entry.threshold,
        );
    }
    if let Some(stage) = &report.failed_at {
        println!("FAILED AT: {stage}");
    }
    println!(
        "overall: {} ({} checks, {:.2} s)",
        if report.overall_pass { "pass" } else { "FAIL" },
        report.checks.len(),
        report.duration_seconds,
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, format } => {
            let cfg = match resolve_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match run(&cfg, Some(&out), format) {
                Ok(report) => {
                    print_report(&report);
                    if report.overall_pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Check { config } => {
            let cfg = match resolve_config(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match run(&cfg, None, OutputFormat::Json) {
                Ok(report) => {
                    print_report(&report);
                    if report.overall_pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::ListScenarios => {
            for s in builtin_scenarios() {
                println!("{}: {}", s.name, s.description);
                println!(
                    "    seeds: q0={}, p0={}, beta0=({}, {}), beta_dot0=({}, {}){}",
                    s.q0,
                    s.p0,
                    s.beta0.0,
                    s.beta0.1,
                    s.beta_dot0.0,
                    s.beta_dot0.1,
                    match s.w_sq {
                        Some(w) => format!(", W^2={w}, rho0={}, rho_dot0={}", s.rho0, s.rho_dot0),
                        None => String::new(),
                    }
                );
                println!("    checks: {}", s.checks.join(", "));
            }
            ExitCode::SUCCESS
        }
    }
}
