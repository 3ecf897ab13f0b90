//! End-to-end CLI checks: exit-code contract, file round trips, backend
//! selection.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ringcore"))
}

fn write_mixture_csv(path: &Path, n: usize, groups: bool) {
    let pts = ringcore::synth::gaussian_mixture(n, 3, 2, 8.0, 1.0, 99);
    let mut text = String::from(if groups { "x1,x2,weight,groups\n" } else { "x1,x2\n" });
    for (i, row) in pts.iter().enumerate() {
        if groups {
            let g = if i % 2 == 0 { "a" } else { "a;b" };
            text.push_str(&format!("{},{},1.0,{}\n", row[0], row[1], g));
        } else {
            text.push_str(&format!("{},{}\n", row[0], row[1]));
        }
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn build_then_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    write_mixture_csv(&csv, 600, false);
    let out = dir.path().join("S.json");
    let mirror = dir.path().join("S.csv");
    let status = bin()
        .args([
            "build",
            "--input",
            csv.to_str().unwrap(),
            "--k",
            "3",
            "--z",
            "1",
            "--eps",
            "0.25",
            "--delta",
            "0.1",
            "--seed",
            "5",
            "--alpha-budget",
            "1",
            "--c1",
            "0.01",
            "--mode",
            "vanilla",
            "--out",
            out.to_str().unwrap(),
            "--csv-mirror",
            mirror.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(mirror.exists());

    let report = dir.path().join("report.json");
    let status = bin()
        .args([
            "eval",
            "--input",
            csv.to_str().unwrap(),
            "--coreset",
            out.to_str().unwrap(),
            "--trials",
            "40",
            "--threshold",
            "0.5",
            "--seed",
            "9",
            "--out",
            report.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(report.exists());

    // an absurd threshold flips the exit code to 1
    let status = bin()
        .args([
            "eval",
            "--input",
            csv.to_str().unwrap(),
            "--coreset",
            out.to_str().unwrap(),
            "--trials",
            "40",
            "--threshold",
            "0.0000000001",
            "--seed",
            "9",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    std::fs::write(&csv, "").unwrap();
    let out = dir.path().join("S.json");
    let status = bin()
        .args([
            "build",
            "--input",
            csv.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn infeasible_config_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    write_mixture_csv(&csv, 50, false);
    let out = dir.path().join("S.json");
    let status = bin()
        .args([
            "build",
            "--input",
            csv.to_str().unwrap(),
            "--eps",
            "7.0",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn fair_mode_over_csv_groups() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    write_mixture_csv(&csv, 300, true);
    let out = dir.path().join("S.json");
    let status = bin()
        .args([
            "build",
            "--input",
            csv.to_str().unwrap(),
            "--k",
            "2",
            "--eps",
            "0.3",
            "--mode",
            "fair",
            "--alpha-budget",
            "1",
            "--c0",
            "0.0005",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("assignment_preserving"));
    assert!(text.contains("labels"));
}

#[test]
fn barycenter_mode_over_tuples_json() {
    let dir = tempfile::tempdir().unwrap();
    let tuples = ringcore::synth::random_tuples(100, 3, 2, 5.0, 4);
    let path = dir.path().join("tuples.json");
    std::fs::write(&path, serde_json::to_string(&tuples).unwrap()).unwrap();
    let out = dir.path().join("S.json");
    let status = bin()
        .args([
            "build",
            "--input",
            path.to_str().unwrap(),
            "--backend",
            "wasserstein",
            "--l",
            "3",
            "--p",
            "1",
            "--k",
            "1",
            "--eps",
            "0.3",
            "--mode",
            "barycenter",
            "--c1",
            "0.05",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .args([
            "eval",
            "--input",
            path.to_str().unwrap(),
            "--backend",
            "wasserstein",
            "--l",
            "3",
            "--p",
            "1",
            "--coreset",
            out.to_str().unwrap(),
            "--trials",
            "10",
            "--threshold",
            "0.5",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn frechet_backend_build_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let curves = ringcore::synth::random_curves(120, 5, 2, 4.0, 8);
    let path = dir.path().join("curves.json");
    std::fs::write(&path, serde_json::to_string(&curves).unwrap()).unwrap();
    let out = dir.path().join("S.json");
    let status = bin()
        .args([
            "build",
            "--input",
            path.to_str().unwrap(),
            "--backend",
            "frechet",
            "--m-cap",
            "8",
            "--k",
            "2",
            "--eps",
            "0.3",
            "--alpha-budget",
            "1",
            "--c1",
            "0.02",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .args([
            "eval",
            "--input",
            path.to_str().unwrap(),
            "--backend",
            "frechet",
            "--coreset",
            out.to_str().unwrap(),
            "--trials",
            "10",
            "--threshold",
            "0.5",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn eval_detects_handle_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.csv");
    write_mixture_csv(&big, 400, false);
    let small = dir.path().join("small.csv");
    write_mixture_csv(&small, 40, false);
    let out = dir.path().join("S.json");
    let status = bin()
        .args([
            "build",
            "--input",
            big.to_str().unwrap(),
            "--k",
            "2",
            "--eps",
            "0.3",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    // coreset indices point past the end of the smaller dataset
    let status = bin()
        .args([
            "eval",
            "--input",
            small.to_str().unwrap(),
            "--coreset",
            out.to_str().unwrap(),
            "--trials",
            "5",
            "--threshold",
            "0.5",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn graph_backend_build() {
    let dir = tempfile::tempdir().unwrap();
    // path graph 0-1-2-...-19 plus a distant appendage
    let mut edges = String::new();
    for v in 1..20 {
        edges.push_str(&format!("{} {} 1.0\n", v - 1, v));
    }
    edges.push_str("19 20 50.0\n");
    let epath = dir.path().join("edges.txt");
    std::fs::write(&epath, edges).unwrap();
    let ppath = dir.path().join("verts.txt");
    let ids: Vec<String> = (0..21).map(|v| v.to_string()).collect();
    std::fs::write(&ppath, ids.join("\n")).unwrap();
    let out = dir.path().join("S.json");
    let status = bin()
        .args([
            "build",
            "--backend",
            "graph",
            "--graph-edges",
            epath.to_str().unwrap(),
            "--graph-points",
            ppath.to_str().unwrap(),
            "--k",
            "2",
            "--eps",
            "0.4",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn inspect_dumps_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    write_mixture_csv(&csv, 200, false);
    let out = dir.path().join("dump.json");
    let status = bin()
        .args([
            "inspect",
            "--input",
            csv.to_str().unwrap(),
            "--k",
            "2",
            "--eps",
            "0.3",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("heavy"));
    assert!(text.contains("two_points"));
}

#[test]
fn bench_runs_on_small_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.json");
    let status = bin()
        .args([
            "bench",
            "--sizes",
            "500,1000",
            "--k",
            "3",
            "--trials",
            "5",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(
        &std::fs::read_to_string(&out).unwrap(),
    )
    .unwrap();
    assert_eq!(rows.len(), 2);
    // identical budget across sizes: flat-in-n headline
    assert_eq!(rows[0]["ring_budget"], rows[1]["ring_budget"]);
}
