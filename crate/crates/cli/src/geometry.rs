//! Figure data for the ellipse-section construction, tagged by series:
//! the ellipse and unit-circle samples plus the labelled chord points, or
//! the inscribed rectangle whose horizontal sides pass through the foci.

use clap::Args;
use serde_json::json;

use hardy_chsh::frame::{build_frame, classify_degeneracy, lengths};
use hardy_chsh::geometry::{
    figure_points, rectangle_points, unit_circle_sample, EllipseGeometry, FigurePoint,
};
use hardy_chsh::optimize::theta_opt;
use hardy_chsh::{Concurrence, MeasurementVector};

use crate::grid::ValueOrGrid;
use crate::render::{degenerate, g17, write_output, CliError, Csv};
use crate::{require_single, Format, OutputArgs};

/// Points per sampled curve.
const SAMPLES: usize = 256;

#[derive(Args, Debug)]
pub struct GeometryArgs {
    /// Concurrence of the state.
    #[arg(short, long, default_value = "0.6")]
    pub concurrence: ValueOrGrid,
    /// Polar angle of q; defaults to the optimal angle.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Emit the inscribed two-constraint rectangle instead of the chord
    /// construction.
    #[arg(long)]
    pub rectangle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: &GeometryArgs) -> Result<(), CliError> {
    let c = Concurrence::new(require_single(&args.concurrence, "geometry")?)?;
    // The section collapses to a segment at the boundary concurrences,
    // in rectangle mode too; the probe axis never trips the check itself.
    if let Some(kind) = classify_degeneracy(MeasurementVector::x_axis(), c) {
        return Err(degenerate(kind));
    }

    let points: Vec<FigurePoint> = if args.rectangle {
        let ellipse = EllipseGeometry::new(c);
        let mut points = Vec::new();
        for (x, z) in ellipse.sample(SAMPLES) {
            points.push(FigurePoint { series: "ellipse", x, z });
        }
        for (x, z) in unit_circle_sample(SAMPLES) {
            points.push(FigurePoint { series: "unit_circle", x, z });
        }
        points.extend(rectangle_points(c));
        points
    } else {
        let theta = args.theta.unwrap_or_else(|| theta_opt(c));
        let q = MeasurementVector::from_angles(theta, 0.0);
        let frame = build_frame(q, c)?;
        let ls = lengths(q, c)?;
        figure_points(&frame, &ls, SAMPLES)?
    };

    let content = match args.output.format {
        Format::Csv => {
            let mut csv = Csv::new();
            csv.row(&["series", "x", "z"]);
            for point in &points {
                csv.row(&[point.series.to_string(), g17(point.x), g17(point.z)]);
            }
            csv.finish()
        }
        Format::Json => {
            let points: Vec<_> = points
                .iter()
                .map(|p| json!({"series": p.series, "x": p.x, "z": p.z}))
                .collect();
            format!("{:#}\n", json!({"points": points}))
        }
    };
    write_output(args.output.out.as_deref(), &content)
}
