//! Optimal violation per concurrence: closed form next to the numeric
//! search, the optimal direction and its partner r, and the length-ratio
//! report. A grid request appends the global optimum over the range.

use clap::Args;
use serde_json::json;

use hardy_chsh::optimize::{
    golden_ratio_report, optimal_frame, optimize_hardy_numeric, theta_opt, w_opt_closed,
};
use hardy_chsh::solvers::golden_section_max;
use hardy_chsh::{Concurrence, Vec3};

use crate::grid::ValueOrGrid;
use crate::render::{g17, write_output, CliError, Csv};
use crate::{Format, OutputArgs};

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Concurrence value or grid.
    #[arg(short, long, default_value = "0.01:0.99:99")]
    pub concurrence: ValueOrGrid,
    #[command(flatten)]
    pub output: OutputArgs,
}

struct OptRow {
    concurrence: f64,
    w_closed: f64,
    w_numeric: f64,
    theta: f64,
    q: Vec3,
    r: Vec3,
    tau_over_xi: f64,
    two_minus_tau_over_tau: f64,
    xi: f64,
    tau: f64,
}

fn evaluate(concurrence: f64) -> Result<OptRow, CliError> {
    let c = Concurrence::new(concurrence)?;
    let numeric = optimize_hardy_numeric(c)?;
    let frame = optimal_frame(c, 0.0)?;
    let ratios = golden_ratio_report(c)?;
    Ok(OptRow {
        concurrence,
        w_closed: w_opt_closed(c),
        w_numeric: numeric.best_value,
        theta: theta_opt(c),
        q: frame.q.vec(),
        r: frame.r.vec(),
        tau_over_xi: ratios.tau_over_xi,
        two_minus_tau_over_tau: ratios.twominus_tau_over_tau,
        xi: ratios.xi,
        tau: ratios.tau,
    })
}

pub fn run(args: &OptimizeArgs) -> Result<(), CliError> {
    let concurrences = args.concurrence.values();
    let rows: Vec<OptRow> = concurrences
        .iter()
        .map(|&v| evaluate(v))
        .collect::<Result<_, _>>()?;

    // Global optimum over the requested range, from the closed form.
    let global = (concurrences.len() > 1).then(|| {
        let lo = concurrences[0];
        let hi = concurrences[concurrences.len() - 1];
        let w_of = |x: f64| w_opt_closed(Concurrence::new(x).expect("range checked above"));
        golden_section_max(w_of, lo, hi, 1e-12)
    });

    let content = match args.output.format {
        Format::Csv => {
            let mut csv = Csv::new();
            csv.row(&[
                "concurrence",
                "w_opt_closed",
                "w_opt_numeric",
                "theta_opt",
                "q_x",
                "q_y",
                "q_z",
                "r_x",
                "r_y",
                "r_z",
                "tau_over_xi",
                "two_minus_tau_over_tau",
                "xi",
                "tau",
            ]);
            for row in &rows {
                csv.row(&[
                    g17(row.concurrence),
                    g17(row.w_closed),
                    g17(row.w_numeric),
                    g17(row.theta),
                    g17(row.q.x),
                    g17(row.q.y),
                    g17(row.q.z),
                    g17(row.r.x),
                    g17(row.r.y),
                    g17(row.r.z),
                    g17(row.tau_over_xi),
                    g17(row.two_minus_tau_over_tau),
                    g17(row.xi),
                    g17(row.tau),
                ]);
            }
            if let Some((c_opt, w_max)) = global {
                csv.blank();
                csv.row(&["c_opt", "w_max"]);
                csv.row(&[g17(c_opt), g17(w_max)]);
            }
            csv.finish()
        }
        Format::Json => {
            let vec3 = |v: Vec3| json!([v.x, v.y, v.z]);
            let rows: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "concurrence": row.concurrence,
                        "w_opt_closed": row.w_closed,
                        "w_opt_numeric": row.w_numeric,
                        "theta_opt": row.theta,
                        "q_opt": vec3(row.q),
                        "r_opt": vec3(row.r),
                        "tau_over_xi": row.tau_over_xi,
                        "two_minus_tau_over_tau": row.two_minus_tau_over_tau,
                        "xi": row.xi,
                        "tau": row.tau,
                    })
                })
                .collect();
            let global = global
                .map(|(c_opt, w_max)| json!({"c_opt": c_opt, "w_max": w_max}))
                .unwrap_or(serde_json::Value::Null);
            format!("{:#}\n", json!({"per_concurrence": rows, "global": global}))
        }
    };
    write_output(args.output.out.as_deref(), &content)
}
