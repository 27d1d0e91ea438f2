//! Violation probability over a (concurrence, theta) grid, row-major with
//! concurrence outermost, plus the per-concurrence ridge of maxima.
//!
//! Grid points where the construction degenerates (boundary concurrences,
//! q parallel to the z axis) become flagged zero rows instead of aborting
//! the scan.

use clap::Args;
use serde_json::json;

use hardy_chsh::frame::{build_frame, lengths, violation_probability};
use hardy_chsh::geometry::lambda_length;
use hardy_chsh::{Concurrence, Error, MeasurementVector};

use crate::grid::ValueOrGrid;
use crate::render::{g17, write_output, CliError, Csv};
use crate::{Format, OutputArgs};

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Concurrence value or grid.
    #[arg(short, long, default_value = "0:1:51")]
    pub concurrence: ValueOrGrid,
    /// Polar angle value or grid.
    #[arg(long, default_value = "0:3.141592653589793:181")]
    pub theta: ValueOrGrid,
    /// Azimuth of q, fixed across the scan.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

struct Row {
    concurrence: f64,
    theta: f64,
    phi: f64,
    w: f64,
    chsh: f64,
    xi: f64,
    tau: f64,
    lambda: f64,
    degenerate: bool,
}

fn is_degenerate(err: &Error) -> bool {
    matches!(
        err,
        Error::DegenerateGeometry(_)
            | Error::DegenerateDirection { .. }
            | Error::ConditioningOnNullEvent { .. }
    )
}

fn evaluate(c: Concurrence, theta: f64, phi: f64) -> Result<Row, CliError> {
    let q = MeasurementVector::from_angles(theta, phi);
    let full = || -> hardy_chsh::Result<(f64, f64, f64, f64, f64)> {
        let frame = build_frame(q, c)?;
        let ls = lengths(q, c)?;
        let triangle = lambda_length(&frame, &ls)?;
        let w = violation_probability(q, c)?;
        Ok((w, frame.chsh(), ls.xi, ls.tau, triangle.lambda))
    };
    match full() {
        Ok((w, chsh, xi, tau, lambda)) => Ok(Row {
            concurrence: c.value(),
            theta,
            phi,
            w,
            chsh,
            xi,
            tau,
            lambda,
            degenerate: false,
        }),
        // The violation vanishes in the degenerate limits, so the flagged
        // row reports the limiting w and S with zeroed geometry.
        Err(err) if is_degenerate(&err) => Ok(Row {
            concurrence: c.value(),
            theta,
            phi,
            w: 0.0,
            chsh: 2.0,
            xi: 0.0,
            tau: 0.0,
            lambda: 0.0,
            degenerate: true,
        }),
        Err(err) => Err(err.into()),
    }
}

pub fn run(args: &ScanArgs) -> Result<(), CliError> {
    let concurrences = args.concurrence.values();
    let thetas = args.theta.values();

    let mut rows = Vec::with_capacity(concurrences.len() * thetas.len());
    for &concurrence in &concurrences {
        let c = Concurrence::new(concurrence)?;
        for &theta in &thetas {
            rows.push(evaluate(c, theta, args.phi)?);
        }
    }

    // Ridge: the grid argmax of w for each concurrence.
    let per_c = thetas.len();
    let ridge: Vec<(f64, f64, f64)> = concurrences
        .iter()
        .enumerate()
        .map(|(i, &concurrence)| {
            let block = &rows[i * per_c..(i + 1) * per_c];
            let best = block
                .iter()
                .fold(&block[0], |acc, row| if row.w > acc.w { row } else { acc });
            (concurrence, best.theta, best.w)
        })
        .collect();

    let content = match args.output.format {
        Format::Csv => {
            let mut csv = Csv::new();
            csv.row(&[
                "concurrence",
                "theta",
                "phi",
                "w",
                "S",
                "xi",
                "tau",
                "lambda",
                "degenerate",
            ]);
            for row in &rows {
                csv.row(&[
                    g17(row.concurrence),
                    g17(row.theta),
                    g17(row.phi),
                    g17(row.w),
                    g17(row.chsh),
                    g17(row.xi),
                    g17(row.tau),
                    g17(row.lambda),
                    row.degenerate.to_string(),
                ]);
            }
            csv.blank();
            csv.row(&["concurrence", "theta_opt", "w_opt"]);
            for &(concurrence, theta, w) in &ridge {
                csv.row(&[g17(concurrence), g17(theta), g17(w)]);
            }
            csv.finish()
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "concurrence": row.concurrence,
                        "theta": row.theta,
                        "phi": row.phi,
                        "w": row.w,
                        "S": row.chsh,
                        "xi": row.xi,
                        "tau": row.tau,
                        "lambda": row.lambda,
                        "degenerate": row.degenerate,
                    })
                })
                .collect();
            let ridge: Vec<_> = ridge
                .iter()
                .map(|&(concurrence, theta, w)| {
                    json!({"concurrence": concurrence, "theta_opt": theta, "w_opt": w})
                })
                .collect();
            format!("{:#}\n", json!({"rows": rows, "ridge": ridge}))
        }
    };
    write_output(args.output.out.as_deref(), &content)
}
