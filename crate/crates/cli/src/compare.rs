//! Maximal CHSH value under each constraint subset across a concurrence
//! grid: the curves that show how much each defining condition costs.
//!
//! Grid points are independent, so the searches run in parallel; rows are
//! assembled in the deterministic subset-outer, concurrence-inner order
//! regardless of scheduling.

use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use hardy_chsh::optimize::{optimize_constrained, ConstraintSubset, DEFAULT_STARTS};
use hardy_chsh::Concurrence;

use crate::grid::ValueOrGrid;
use crate::render::{g17, write_output, CliError, Csv};
use crate::{Format, OutputArgs};

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Concurrence value or grid.
    #[arg(short, long, default_value = "0.05:0.95:19")]
    pub concurrence: ValueOrGrid,
    /// Single constraint subset; omitting it runs the representative five.
    #[arg(long)]
    pub subset: Option<ConstraintSubset>,
    /// Seed for the multi-start searches.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

struct CompareRow {
    concurrence: f64,
    subset: ConstraintSubset,
    s_opt: f64,
    converged: bool,
    spread: f64,
}

pub fn run(args: &CompareArgs) -> Result<(), CliError> {
    let subsets: Vec<ConstraintSubset> = match args.subset {
        Some(subset) => vec![subset],
        None => vec![
            ConstraintSubset::NONE,
            ConstraintSubset::new(false, true, false),
            ConstraintSubset::new(true, true, false),
            ConstraintSubset::new(false, true, true),
            ConstraintSubset::ALL,
        ],
    };
    let concurrences = args.concurrence.values();
    for &v in &concurrences {
        Concurrence::new(v)?;
    }

    let jobs: Vec<(ConstraintSubset, f64)> = subsets
        .iter()
        .flat_map(|&subset| concurrences.iter().map(move |&v| (subset, v)))
        .collect();
    let rows: Vec<CompareRow> = jobs
        .par_iter()
        .map(|&(subset, v)| {
            let c = Concurrence::new(v).expect("validated above");
            let result = optimize_constrained(c, subset, DEFAULT_STARTS, args.seed);
            CompareRow {
                concurrence: v,
                subset,
                s_opt: result.best_value,
                converged: result.converged,
                spread: result.multistart_spread,
            }
        })
        .collect();

    let content = match args.output.format {
        Format::Csv => {
            let mut csv = Csv::new();
            csv.row(&["concurrence", "subset", "S_opt", "converged", "multistart_spread"]);
            for row in &rows {
                csv.row(&[
                    g17(row.concurrence),
                    row.subset.label().to_string(),
                    g17(row.s_opt),
                    row.converged.to_string(),
                    g17(row.spread),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "concurrence": row.concurrence,
                        "subset": row.subset.label(),
                        "S_opt": row.s_opt,
                        "converged": row.converged,
                        "multistart_spread": row.spread,
                    })
                })
                .collect();
            format!("{:#}\n", json!({"rows": rows}))
        }
    };
    write_output(args.output.out.as_deref(), &content)
}
