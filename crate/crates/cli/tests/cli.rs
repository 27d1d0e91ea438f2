//! End-to-end tests driving the compiled binary: schemas, landmark
//! values, determinism, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hardy-chsh"));
    // Ambient tolerance overrides must not leak into the tests.
    cmd.env_remove("HARDY_CHSH_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

/// Splits one CSV line, honoring double-quoted fields.
fn split_csv(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if quoted && chars.peek() == Some(&'"') => {
                chars.next();
                field.push('"');
            }
            '"' => quoted = !quoted,
            ',' if !quoted => fields.push(std::mem::take(&mut field)),
            other => field.push(other),
        }
    }
    fields.push(field);
    fields
}

/// Parses blank-line-separated CSV blocks into (header, rows) pairs.
fn csv_blocks(text: &str) -> Vec<(Vec<String>, Vec<Vec<String>>)> {
    text.split("\n\n")
        .filter(|block| !block.trim().is_empty())
        .map(|block| {
            let mut lines = block.lines().filter(|l| !l.is_empty());
            let header = split_csv(lines.next().expect("block header"));
            let rows = lines.map(split_csv).collect();
            (header, rows)
        })
        .collect()
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    let idx = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name} in {header:?}"));
    row[idx].parse().unwrap_or_else(|_| panic!("{name}={}", row[idx]))
}

#[test]
fn probe_emits_three_agreeing_w_routes() {
    let out = stdout(&run(&["probe"]));
    let blocks = csv_blocks(&out);
    assert_eq!(blocks.len(), 1);
    let (header, rows) = &blocks[0];
    assert_eq!(rows.len(), 1);
    let w = 0.07346938775510204;
    for name in ["w_direct", "w_identity", "w_geometric"] {
        assert!((field(header, &rows[0], name) - w).abs() < 1e-12, "{name}");
    }
    assert!((field(header, &rows[0], "S") - (2.0 + 4.0 * w)).abs() < 1e-12);
    for name in ["residual_qt", "residual_qs", "residual_rt"] {
        assert!(field(header, &rows[0], name).abs() < 1e-12, "{name}");
    }
    // r at the optimum has the exact rational z component -13/14.
    assert!((field(header, &rows[0], "r_z") + 13.0 / 14.0).abs() < 1e-12);
}

#[test]
fn probe_reproduces_frozen_off_optimum_point() {
    let out = stdout(&run(&["probe", "-c", "0.85", "--theta", "2.2", "--phi", "0.7"]));
    let blocks = csv_blocks(&out);
    let (header, rows) = &blocks[0];
    for (name, expected) in [
        ("xi", 0.5515215811532108),
        ("tau", 1.0471199639170880),
        ("lambda", 0.2472004990590140),
        ("w_direct", 0.07608027052354920),
        ("S", 2.304321082094197),
    ] {
        assert!(
            (field(header, &rows[0], name) - expected).abs() < 1e-13,
            "{name}"
        );
    }
}

#[test]
fn probe_json_mirror_carries_the_same_record() {
    let out = stdout(&run(&[
        "probe", "-c", "0.85", "--theta", "2.2", "--phi", "0.7", "--format", "json",
    ]));
    let record: serde_json::Value = serde_json::from_str(&out).expect("valid json");
    assert!((record["w"]["direct"].as_f64().unwrap() - 0.07608027052354920).abs() < 1e-13);
    assert!((record["tau"].as_f64().unwrap() - 1.0471199639170880).abs() < 1e-13);
    assert_eq!(record["q"].as_array().unwrap().len(), 3);
}

#[test]
fn probe_rejects_grid_arguments() {
    let out = run(&["probe", "-c", "0.2:0.8:5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn degenerate_inputs_exit_with_code_two() {
    let out = run(&["probe", "-c", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("degenerate: maximally entangled state (C = 1)"),
        "stderr: {err}"
    );
    let polar = run(&["probe", "-c", "0.6", "--theta", "0"]);
    assert_eq!(polar.status.code(), Some(2));
}

#[test]
fn parse_failures_exit_with_code_one() {
    assert_eq!(run(&["probe", "-c", "banana"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["scan", "-c", "0.9:0.1:5"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_emits_exact_schema_flags_and_ridge() {
    let out = stdout(&run(&[
        "scan",
        "-c",
        "0:1:11",
        "--theta",
        "0:3.141592653589793:61",
    ]));
    assert!(
        out.starts_with("concurrence,theta,phi,w,S,xi,tau,lambda,degenerate\n"),
        "header: {}",
        out.lines().next().unwrap()
    );
    let blocks = csv_blocks(&out);
    assert_eq!(blocks.len(), 2);
    let (header, rows) = &blocks[0];
    assert_eq!(rows.len(), 11 * 61);

    // Boundary concurrences are flagged with w = 0, S = 2.
    for row in rows.iter().take(61).chain(rows.iter().skip(10 * 61)) {
        assert_eq!(row[header.iter().position(|h| h == "degenerate").unwrap()], "true");
        assert_eq!(field(header, row, "w"), 0.0);
        assert_eq!(field(header, row, "S"), 2.0);
    }
    // Interior rows at the poles are flagged too; off-pole ones are not.
    let c06 = &rows[6 * 61..7 * 61];
    assert_eq!(c06[0][8], "true");
    assert_eq!(c06[60][8], "true");
    assert_eq!(c06[30][8], "false");

    // Ridge block: the grid argmax for C = 0.6 sits at the optimal angle
    // (an exact grid point here) with the closed-form peak value.
    let (ridge_header, ridge_rows) = &blocks[1];
    assert_eq!(ridge_header.join(","), "concurrence,theta_opt,w_opt");
    assert_eq!(ridge_rows.len(), 11);
    let ridge06 = &ridge_rows[6];
    assert!((field(ridge_header, ridge06, "theta_opt") - 2.0943951023931953).abs() < 1e-12);
    assert!((field(ridge_header, ridge06, "w_opt") - 0.07346938775510204).abs() < 1e-9);
}

#[test]
fn identical_configs_produce_byte_identical_files() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    let scan = |path: &Path| {
        let out = run(&[
            "scan",
            "-c",
            "0.1:0.9:5",
            "--theta",
            "0.2:3:40",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(path).expect("output file")
    };
    assert_eq!(scan(&path_a), scan(&path_b));

    // The seeded multistart search is deterministic as well.
    let compare = || stdout(&run(&["compare", "-c", "0.7", "--subset", "all", "--seed", "9"]));
    assert_eq!(compare(), compare());
}

#[test]
fn unwritable_output_path_exits_with_code_one() {
    let out = run(&["probe", "--out", "/nonexistent-dir/record.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn optimize_reports_per_concurrence_and_global_landmarks() {
    let out = stdout(&run(&["optimize"]));
    let blocks = csv_blocks(&out);
    assert_eq!(blocks.len(), 2);
    let (header, rows) = &blocks[0];
    assert_eq!(rows.len(), 99);

    let row06 = rows
        .iter()
        .find(|row| (field(header, row, "concurrence") - 0.6).abs() < 1e-9)
        .expect("C = 0.6 in the default grid");
    assert!((field(header, row06, "w_opt_closed") - 0.07346938775510204).abs() < 1e-10);
    assert!((field(header, row06, "w_opt_numeric") - 0.07346938775510204).abs() < 1e-9);
    assert!((field(header, row06, "theta_opt") - 2.0943951023931953).abs() < 1e-10);
    assert!((field(header, row06, "r_z") + 13.0 / 14.0).abs() < 1e-10);
    assert!((field(header, row06, "tau_over_xi") - 7.0 / 3.0).abs() < 1e-10);

    let (global_header, global_rows) = &blocks[1];
    assert_eq!(global_header.join(","), "c_opt,w_max");
    assert!((field(global_header, &global_rows[0], "c_opt") - 0.7639320225002103).abs() < 1e-4);
    assert!((field(global_header, &global_rows[0], "w_max") - 0.09016994374947424).abs() < 1e-6);
}

#[test]
fn optimize_single_concurrence_reports_the_golden_ratio() {
    let out = stdout(&run(&["optimize", "-c", "0.7639320225002103"]));
    let blocks = csv_blocks(&out);
    // No global block for a single value.
    assert_eq!(blocks.len(), 1);
    let (header, rows) = &blocks[0];
    assert_eq!(rows.len(), 1);
    let phi = 1.618033988749895;
    assert!((field(header, &rows[0], "tau_over_xi") - phi).abs() < 1e-9);
    assert!((field(header, &rows[0], "two_minus_tau_over_tau") - phi).abs() < 1e-9);
}

#[test]
fn compare_curves_match_their_closed_forms() {
    let out = stdout(&run(&["compare", "-c", "0.3:0.9:4"]));
    let blocks = csv_blocks(&out);
    let (header, rows) = &blocks[0];
    assert_eq!(rows.len(), 5 * 4);
    let subset_idx = header.iter().position(|h| h == "subset").unwrap();
    // Subset-outer ordering, concurrence ascending inside each subset.
    assert_eq!(rows[0][subset_idx], "none");
    assert_eq!(rows[4][subset_idx], "qs");
    assert_eq!(rows[8][subset_idx], "qt,qs");
    assert_eq!(rows[12][subset_idx], "qs,rt");
    assert_eq!(rows[16][subset_idx], "all");

    for row in rows {
        let c = field(header, row, "concurrence");
        let s_opt = field(header, row, "S_opt");
        match row[subset_idx].as_str() {
            "none" => {
                assert!((s_opt - 2.0 * (1.0 + c * c).sqrt()).abs() < 1e-8, "C={c}");
            }
            "qt,qs" => {
                let closed = 2.0 * (c * c + (1.0 - c * c).sqrt());
                assert!((s_opt - closed).abs() < 1e-7, "C={c}");
            }
            "all" => {
                let w = c * c * (1.0 - c) / ((2.0 - c) * (2.0 - c));
                assert!((s_opt - (2.0 + 4.0 * w)).abs() < 1e-8, "C={c}");
            }
            _ => {}
        }
        assert_eq!(row[header.iter().position(|h| h == "converged").unwrap()], "true");
    }
}

#[test]
fn compare_single_subset_hits_the_known_landmark() {
    let out = stdout(&run(&["compare", "-c", "0.6", "--subset", "qs"]));
    let (header, rows) = &csv_blocks(&out)[0];
    assert_eq!(rows.len(), 1);
    assert!((field(header, &rows[0], "S_opt") - 2.328095291437271).abs() < 1e-8);
}

#[test]
fn geometry_emits_all_series_with_figure_landmarks() {
    let out = stdout(&run(&["geometry", "-c", "0.6"]));
    let (header, rows) = &csv_blocks(&out)[0];
    assert_eq!(header.join(","), "series,x,z");
    let count = |series: &str| rows.iter().filter(|row| row[0] == series).count();
    assert_eq!(count("ellipse"), 256);
    assert_eq!(count("unit_circle"), 256);
    for series in ["S", "T", "S_bar", "T_bar", "R", "F_u", "F_l"] {
        assert_eq!(count(series), 1, "{series}");
    }
    for row in rows {
        let x = field(header, row, "x");
        let z = field(header, row, "z");
        match row[0].as_str() {
            // Chord endpoints and their mirrors sit on the ellipse section.
            "S" | "T" | "S_bar" | "T_bar" => {
                assert!((x * x / 0.36 + z * z - 1.0).abs() < 1e-10, "{}", row[0]);
            }
            "unit_circle" => assert!((x * x + z * z - 1.0).abs() < 1e-12),
            "F_u" => assert!(x.abs() < 1e-15 && (z - 0.8).abs() < 1e-12),
            "F_l" => assert!(x.abs() < 1e-15 && (z + 0.8).abs() < 1e-12),
            _ => {}
        }
    }
}

#[test]
fn geometry_rectangle_mode_has_the_advertised_sides() {
    let out = stdout(&run(&["geometry", "-c", "0.8660254037844386", "--rectangle"]));
    let (header, rows) = &csv_blocks(&out)[0];
    let corners: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row[0] == "rectangle")
        .map(|row| (field(header, row, "x"), field(header, row, "z")))
        .collect();
    assert_eq!(corners.len(), 5, "closed corner loop");
    assert_eq!(corners[0], corners[4]);
    let max = |f: fn(&(f64, f64)) -> f64| corners.iter().map(f).fold(f64::MIN, f64::max);
    let min = |f: fn(&(f64, f64)) -> f64| corners.iter().map(f).fold(f64::MAX, f64::min);
    assert!((max(|p| p.0) - min(|p| p.0) - 1.5).abs() < 1e-12, "x side");
    assert!((max(|p| p.1) - min(|p| p.1) - 1.0).abs() < 1e-12, "z side");
    assert_eq!(
        run(&["geometry", "-c", "0", "--rectangle"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_reports_every_suite_passing() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid json report");
    assert_eq!(report["total_failures"], 0);
    let suites = report["suites"].as_array().unwrap();
    let expected: Vec<&str> = hardy_chsh::checks::suite_names();
    assert_eq!(suites.len(), expected.len());
    for (entry, name) in suites.iter().zip(expected) {
        assert_eq!(entry["suite"], name);
        assert_eq!(entry["failures"], 0, "{name}");
        assert!(entry["cases"].as_u64().unwrap() > 0, "{name}");
    }
}

#[test]
fn verify_overtight_tolerance_exits_with_code_three() {
    let out = bin()
        .args(["verify", "--suite", "chsh_route_equivalence"])
        .env("HARDY_CHSH_TOL", "1e-18")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("report still emitted");
    assert!(report["total_failures"].as_u64().unwrap() > 0);
}

#[test]
fn verify_verdicts_are_seed_independent() {
    for seed in ["0", "12345"] {
        let out = run(&["verify", "--suite", "hardy_conditions", "--seed", seed]);
        assert_eq!(out.status.code(), Some(0), "seed {seed}");
    }
}

#[test]
fn verify_rejects_csv_and_unknown_suites() {
    assert_eq!(run(&["verify", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "no_such_suite"]).status.code(), Some(1));
}
