//! One fully expanded record: the four directions, their ellipsoid
//! images, the focal lengths, the violation probability through three
//! independent routes, and the residuals of the defining conditions.

use clap::Args;
use serde_json::json;

use hardy_chsh::frame::{build_frame, hardy_residuals, lengths};
use hardy_chsh::geometry::{lambda_length, w_geometric};
use hardy_chsh::quantum::{build_state, joint_probability, OutcomePair};
use hardy_chsh::{Concurrence, MeasurementVector, Vec3};

use crate::grid::ValueOrGrid;
use crate::render::{g17, write_output, CliError, Csv};
use crate::{require_single, Format, OutputArgs};

#[derive(Args, Debug)]
pub struct ProbeArgs {
    /// Concurrence of the state.
    #[arg(short, long, default_value = "0.6")]
    pub concurrence: ValueOrGrid,
    /// Polar angle of q.
    #[arg(long, default_value = "2.0943951023931953")]
    pub theta: ValueOrGrid,
    /// Azimuth of q.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: &ProbeArgs) -> Result<(), CliError> {
    let c = Concurrence::new(require_single(&args.concurrence, "probe")?)?;
    let theta = require_single(&args.theta, "probe")?;
    let q = MeasurementVector::from_angles(theta, args.phi);

    let frame = build_frame(q, c)?;
    let ls = lengths(q, c)?;
    let triangle = lambda_length(&frame, &ls)?;
    let residuals = hardy_residuals(&frame)?;
    let state = build_state(c);
    let w_direct = joint_probability(&state, frame.r, frame.s, OutcomePair::PLUS_PLUS);
    let chsh = frame.chsh();
    let w_identity = (chsh - 2.0) / 4.0;
    let w_geo = w_geometric(&frame, &ls)?;

    let content = match args.output.format {
        Format::Csv => {
            let mut csv = Csv::new();
            let mut header: Vec<String> = ["concurrence", "theta", "phi"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let mut fields = vec![g17(c.value()), g17(theta), g17(args.phi)];
            let push_vec = |name: &str, v: Vec3, header: &mut Vec<String>, fields: &mut Vec<String>| {
                for (axis, value) in [("x", v.x), ("y", v.y), ("z", v.z)] {
                    header.push(format!("{name}_{axis}"));
                    fields.push(g17(value));
                }
            };
            push_vec("q", frame.q.vec(), &mut header, &mut fields);
            push_vec("r", frame.r.vec(), &mut header, &mut fields);
            push_vec("s", frame.s.vec(), &mut header, &mut fields);
            push_vec("t", frame.t.vec(), &mut header, &mut fields);
            push_vec("sk", frame.sk, &mut header, &mut fields);
            push_vec("tk", frame.tk, &mut header, &mut fields);
            for (name, value) in [
                ("xi", ls.xi),
                ("tau", ls.tau),
                ("lambda", triangle.lambda),
                ("w_direct", w_direct),
                ("w_identity", w_identity),
                ("w_geometric", w_geo),
                ("S", chsh),
                ("residual_qt", residuals.qt_joint),
                ("residual_qs", residuals.qs_conditional),
                ("residual_rt", residuals.rt_conditional),
            ] {
                header.push(name.to_string());
                fields.push(g17(value));
            }
            csv.row(&header);
            csv.row(&fields);
            csv.finish()
        }
        Format::Json => {
            let vec3 = |v: Vec3| json!([v.x, v.y, v.z]);
            let record = json!({
                "concurrence": c.value(),
                "theta": theta,
                "phi": args.phi,
                "q": vec3(frame.q.vec()),
                "r": vec3(frame.r.vec()),
                "s": vec3(frame.s.vec()),
                "t": vec3(frame.t.vec()),
                "sk": vec3(frame.sk),
                "tk": vec3(frame.tk),
                "xi": ls.xi,
                "tau": ls.tau,
                "lambda": triangle.lambda,
                "w": {
                    "direct": w_direct,
                    "identity": w_identity,
                    "geometric": w_geo,
                },
                "S": chsh,
                "residuals": {
                    "qt_joint": residuals.qt_joint,
                    "qs_conditional": residuals.qs_conditional,
                    "rt_conditional": residuals.rt_conditional,
                },
            });
            format!("{:#}\n", record)
        }
    };
    write_output(args.output.out.as_deref(), &content)
}
