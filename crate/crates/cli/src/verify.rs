//! Runs the verification suites and reports them as machine-readable
//! JSON. A nonzero failure count exits with code 3 after the report is
//! written, so CI logs always carry the full picture.

use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use hardy_chsh::checks::{run_all, run_matching, suite_names, CheckConfig};
use hardy_chsh::Tolerances;

use crate::render::{write_output, CliError};
use crate::Format;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run only suites whose name contains this substring.
    #[arg(long)]
    pub suite: Option<String>,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; the report is JSON only.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    if args.format == Format::Csv {
        return Err(CliError::Config(
            "the verification report is JSON only; drop --format csv".into(),
        ));
    }
    let config = CheckConfig {
        seed: args.seed,
        tolerances: Tolerances::from_env(),
        ..CheckConfig::default()
    };
    let reports = match &args.suite {
        Some(pattern) => {
            let matched = run_matching(&config, pattern);
            if matched.is_empty() {
                return Err(CliError::Config(format!(
                    "no suite matches `{pattern}`; available: {}",
                    suite_names().join(", ")
                )));
            }
            matched
        }
        None => run_all(&config),
    };

    let total_cases: usize = reports.iter().map(|r| r.cases).sum();
    let total_failures: usize = reports.iter().map(|r| r.failures).sum();
    let suites: Vec<_> = reports
        .iter()
        .map(|r| {
            // A deviation can be non-finite when a check hits an error
            // path; JSON has no inf, so stringify those.
            let deviation = if r.max_deviation.is_finite() {
                json!(r.max_deviation)
            } else {
                json!(r.max_deviation.to_string())
            };
            json!({
                "suite": r.name,
                "cases": r.cases,
                "failures": r.failures,
                "max_deviation": deviation,
                "notes": r.notes,
            })
        })
        .collect();
    let report = json!({
        "suites": suites,
        "total_cases": total_cases,
        "total_failures": total_failures,
    });
    write_output(args.out.as_deref(), &format!("{report:#}\n"))?;

    if total_failures > 0 {
        return Err(CliError::Verification(total_failures));
    }
    Ok(())
}
