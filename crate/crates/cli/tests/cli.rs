use std::collections::HashMap;
use std::process::Command;

use xychain::analytic::{c2max_n3, isotropic_zero_field};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn xychain(args: &[&str]) -> Run {
    xychain_env(args, &[])
}

fn xychain_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_xychain")).args(args).envs(env.iter().copied()).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Data rows keyed by column name; `#` lines skipped.
fn csv(text: &str) -> Vec<HashMap<String, String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines.map(|l| header.iter().map(|h| h.to_string()).zip(l.split(',').map(str::to_owned)).collect()).collect()
}

fn num(row: &HashMap<String, String>, col: &str) -> f64 {
    row[col].parse().unwrap_or_else(|_| panic!("{col} = {:?}", row[col]))
}

#[test]
fn modes_lists_primed_resonances() {
    let run = xychain(&["modes", "--n", "4", "--b", "0", "--v", "1", "--g", "0.5"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv(&run.stdout);
    assert_eq!(rows.len(), 2);
    let mut fields: Vec<f64> = rows.iter().map(|r| num(r, "b_k")).collect();
    fields.sort_by(f64::total_cmp);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((fields[0] + r).abs() < 1e-12 && (fields[1] - r).abs() < 1e-12);

    let two = csv(&xychain(&["modes", "--n", "2", "--b", "0.3", "--v", "1", "--g", "0.4"]).stdout);
    assert!((num(&two[0], "lambda") - 0.5).abs() < 1e-12);
    assert_eq!(
        xychain(&["modes", "--n", "4", "--all", "--gamma", "1"]).stdout.lines().filter(|l| !l.starts_with('#')).count(),
        5
    );
}

#[test]
fn invalid_parameters_exit_with_usage_status() {
    for args in [
        &["modes", "--n", "1", "--g", "1"][..],
        &["modes", "--n", "4", "--g", "-1"],
        &["modes", "--n", "4"],
        &["scan", "--n", "4", "--gamma", "0.1", "--b-min", "1", "--b-max", "1"],
        &["evolve", "--n", "15", "--gamma", "0.1", "--oracle"],
        &["analytic", "c2-of-p-n3", "--p", "1.5"],
        &["analytic", "harmonic", "--n", "4", "--k", "1", "--g", "0.1", "--t", "1"],
        &["frobnicate"],
    ] {
        let run = xychain(args);
        assert_eq!(run.code, 1, "{args:?}: {}", run.stderr);
        assert!(run.stdout.is_empty());
    }
    let run = xychain_env(&["modes", "--n", "4", "--g", "1"], &[("XYCHAIN_THREADS", "zero")]);
    assert_eq!(run.code, 1);
}

#[test]
fn empty_window_gives_one_zero_row() {
    let run = xychain(&["evolve", "--n", "6", "--b", "0.4", "--gamma", "0.7", "--t-max", "0"]);
    assert_eq!(run.code, 0);
    let rows = csv(&run.stdout);
    assert_eq!(rows.len(), 1);
    for (col, value) in &rows[0] {
        if col != "c2_type" {
            assert_eq!(value.parse::<f64>().unwrap(), 0.0, "{col}");
        }
    }
}

#[test]
fn isotropic_series_matches_closed_form() {
    let run = xychain(&["evolve", "--n", "8", "--b", "0", "--v", "1", "--gamma", "1", "--t-max", "12", "--dt", "0.05"]);
    let rows = csv(&run.stdout);
    assert_eq!(rows.len(), 241);
    for r in &rows {
        let exact = isotropic_zero_field(1.0, num(r, "t")).unwrap();
        assert!((num(r, "p") - exact.p).abs() < 1e-10);
        assert!((num(r, "C1") - exact.c1).abs() < 1e-10);
        assert!((num(r, "C2") - exact.c2).abs() < 1e-10);
    }
}

#[test]
fn outer_resonance_shows_both_pair_types() {
    let b = (std::f64::consts::PI / 15.0).cos().to_string();
    let run = xychain(&["evolve", "--n", "15", "--b", &b, "--gamma", "0.1", "--t-max", "160", "--dt", "0.05"]);
    let types: Vec<String> = csv(&run.stdout).into_iter().map(|r| r["c2_type"].clone()).collect();
    assert!(types.iter().any(|t| t == "I") && types.iter().any(|t| t == "II"));
}

#[test]
fn oracle_columns_agree() {
    let run =
        xychain(&["evolve", "--n", "5", "--b", "-0.3", "--gamma", "0.4", "--t-max", "15", "--dt", "0.25", "--oracle"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    for r in csv(&run.stdout) {
        for (fast, exact) in [("p", "oracle_p"), ("C1", "oracle_C1"), ("C2", "oracle_C2"), ("beta", "oracle_beta")] {
            assert!((num(&r, fast) - num(&r, exact)).abs() < 1e-9);
        }
    }
    let summary: Vec<&str> = run.stdout.lines().filter(|l| l.starts_with("# max_deviation_")).collect();
    assert_eq!(summary.len(), 7);
}

#[test]
fn json_and_csv_carry_identical_numbers() {
    let args = ["evolve", "--n", "7", "--b", "0.6", "--gamma", "0.2", "--t-max", "5", "--dt", "0.1"];
    let rows = csv(&xychain(&args).stdout);
    let json: serde_json::Value =
        serde_json::from_str(&xychain(&[&args[..], &["--format", "json"]].concat()).stdout).unwrap();
    assert_eq!(json["manifest"]["command"], "evolve");
    assert_eq!(json["manifest"]["parameters"]["n"], 7);
    let json_rows = json["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), rows.len());
    for (c, j) in rows.iter().zip(json_rows) {
        for (col, value) in c {
            match value.parse::<f64>() {
                Ok(x) => assert_eq!(j[col].as_f64().unwrap(), x, "{col}"),
                Err(_) => assert_eq!(j[col].as_str().unwrap(), value),
            }
        }
    }
    assert!(json["peaks"].as_array().unwrap().is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["scan", "--n", "6", "--gamma", "0.3", "--b-steps", "41", "--t-max", "20"];
    let one = xychain_env(&args, &[("XYCHAIN_THREADS", "1")]);
    let four = xychain_env(&args, &[("XYCHAIN_THREADS", "4")]);
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, xychain(&args).stdout);
    let bs: Vec<f64> = csv(&one.stdout).iter().map(|r| num(r, "b")).collect();
    assert!(bs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn fourteen_site_scan_finds_seven_peaks() {
    let run = xychain(&[
        "scan",
        "--n",
        "14",
        "--gamma",
        "0.1",
        "--b-min",
        "-1.2",
        "--b-max",
        "1.2",
        "--b-steps",
        "1201",
        "--t-max",
        "180",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let peaks_line = run.stdout.lines().find(|l| l.starts_with("# peaks:")).unwrap();
    assert_eq!(peaks_line, "# peaks: 7");
    let rows = csv(&run.stdout);
    // outermost resonances are dominated by type II
    let near = |b: f64| rows.iter().min_by(|x, y| (num(x, "b") - b).abs().total_cmp(&(num(y, "b") - b).abs())).unwrap();
    let outer = near((std::f64::consts::PI / 14.0).cos());
    assert!(num(outer, "C2m_II") > num(outer, "C2m_I"));
}

#[test]
fn three_site_scan_follows_closed_form() {
    let g = 0.25;
    let run = xychain(&[
        "scan",
        "--n",
        "3",
        "--v",
        "1",
        "--g",
        "0.25",
        "--b-min",
        "-0.5",
        "--b-max",
        "1.5",
        "--b-steps",
        "41",
        "--t-max",
        "300",
        "--dt",
        "0.002",
    ]);
    for r in csv(&run.stdout) {
        let c2m = num(&r, "C2m_I").max(num(&r, "C2m_II"));
        let s = (num(&r, "b") - 0.5) / g;
        assert!((c2m - c2max_n3(s)).abs() < 2e-3, "b = {}: {c2m} vs {}", r["b"], c2max_n3(s));
    }
}

#[test]
fn svg_plots_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let evolve_svg = dir.path().join("evolve.svg");
    let scan_svg = dir.path().join("scan.svg");
    let b = (std::f64::consts::PI / 15.0).cos().to_string();
    let run = xychain(&[
        "evolve",
        "--n",
        "15",
        "--b",
        &b,
        "--gamma",
        "0.1",
        "--t-max",
        "160",
        "--dt",
        "0.1",
        "--svg",
        evolve_svg.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0);
    let svg = std::fs::read_to_string(&evolve_svg).unwrap();
    assert!(svg.contains("C2 type II") && svg.contains("stroke-dasharray"));
    let run = xychain(&[
        "scan",
        "--n",
        "4",
        "--gamma",
        "0.2",
        "--b-steps",
        "51",
        "--t-max",
        "20",
        "--svg",
        scan_svg.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0);
    let svg = std::fs::read_to_string(&scan_svg).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("modes.json");
    let run = xychain(&["modes", "--n", "4", "--gamma", "0.5", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_is_deterministic_and_clean() {
    let args = ["validate", "--n", "2..5", "--draws", "3", "--times", "8", "--seed", "11"];
    let first = xychain(&args);
    assert_eq!(first.code, 0, "{}{}", first.stdout, first.stderr);
    assert_eq!(first.stdout, xychain(&args).stdout);
    let rows = csv(&first.stdout);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r["status"], "ok");
        for col in ["p", "beta", "alpha_re", "alpha_im", "p1", "C1", "C2", "spectrum"] {
            assert!(num(r, col) < 1e-9, "{col}");
        }
    }
    let three = rows.iter().find(|r| r["n"] == "3").unwrap();
    assert!(num(three, "C2_over_C1_max") <= std::f64::consts::FRAC_1_SQRT_2 + 1e-9);
    assert!(rows.iter().filter(|r| r["n"] != "3").all(|r| r["C2_over_C1_max"].is_empty()));
    let other_seed = xychain(&["validate", "--n", "2..5", "--draws", "3", "--times", "8", "--seed", "12"]);
    assert_ne!(first.stdout, other_seed.stdout);
}

#[test]
fn analytic_tables() {
    let rows = csv(&xychain(&["analytic", "c2max-n3", "--s", "-3..3", "--steps", "601"]).stdout);
    assert_eq!(rows.len(), 601);
    let peak = rows.iter().map(|r| num(r, "C2max")).fold(0.0, f64::max);
    assert!((peak - 2.0 / 3.0).abs() < 1e-12);
    assert!((num(&rows[150], "C2max") - 1.0 / 3.0).abs() < 1e-12);

    let c1 = csv(&xychain(&["analytic", "resonance-c1", "--n", "14"]).stdout);
    assert!((num(&c1[0], "C1") - 0.70).abs() < 0.01);

    let dip = csv(&xychain(&["analytic", "dip-n4", "--gamma", "1"]).stdout);
    assert!((num(&dip[0], "b_low_over_v") - 0.555).abs() < 1e-3);
    assert!((num(&dip[0], "b_high_over_v") - 1.802).abs() < 1e-3);

    let c2 = csv(&xychain(&["analytic", "resonance-c2", "--n", "4"]).stdout);
    assert_eq!(c2.len(), 2);
    assert!((num(&c2[0], "C2_II") - 0.46).abs() < 0.02);

    for args in [
        &["analytic", "harmonic", "--n", "6", "--k", "1/2", "--g", "0.01", "--t", "0..100", "--steps", "11"][..],
        &["analytic", "isotropic", "--t", "0..5"],
        &["analytic", "short-time", "--n", "8", "--b", "-0.3", "--g", "0.5", "--t", "0..0.1"],
        &["analytic", "large-field", "--n", "6", "--b", "20..60", "--g", "0.5"],
        &["analytic", "c1max-n2", "--s", "-2,0,2"],
        &["analytic", "c1max-n3", "--s", "0"],
        &["analytic", "c2-of-p-n3", "--p", "0..0.6"],
    ] {
        let run = xychain(args);
        assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
        assert!(!csv(&run.stdout).is_empty());
    }
}
