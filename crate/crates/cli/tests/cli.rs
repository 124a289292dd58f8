use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levicount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {out:?}");
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn heawood_hexagons() {
    let v = json(&["cycles", "--p", "2", "--k", "3"]);
    assert_eq!(v["count"], "28");
    assert_eq!(v["algo"], "plane-gons");
    assert_eq!(v["under_cap"], true);
    assert!(v.get("seconds").is_none());
}

#[test]
fn cross_check_and_profile() {
    let v = json(&["cycles", "--p", "3", "--k", "5", "--cross-check"]);
    assert_eq!(v["count"], "5616");
    let v = json(&["cycles", "--p", "2", "--kmax", "7"]);
    let counts: Vec<&str> = v["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["count"].as_str().unwrap())
        .collect();
    assert_eq!(counts, ["28", "21", "84", "56", "24"]);
}

#[test]
fn walk_formula() {
    let v = json(&["walks", "--n", "2", "--k", "3"]);
    assert_eq!(v["formula"], "1554");
    assert_eq!(v["direct"], "1554");
    assert_eq!(v["match"], true);
}

#[test]
fn census_of_fano_quadruples() {
    let v = json(&["census", "--p", "2", "--k", "4"]);
    assert_eq!(v["Q"]["3"], "672");
    assert_eq!(v["Q"]["4"], "168");
    assert_eq!(v["A_k"], "672");
    assert_eq!(v["B_k"], "0");
}

#[test]
fn bounds_hold_for_small_plane() {
    let out = run(&["bounds", "--p", "3", "--k", "4"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["cycles", "--p", "9", "--k", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["cycles", "--p", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["cycles", "--p", "3", "--k", "8", "--budget", "10"])
            .status
            .code(),
        Some(3)
    );
    let out = run(&["cap", "--v", "14", "--k", "3", "--count", "1000000"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["under_cap"], false);
    assert_eq!(
        run(&["cap", "--v", "15", "--k", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_reproducible_and_thread_independent() {
    let a = run(&["cycles", "--p", "3", "--k", "5", "--threads", "1"]);
    let b = run(&["cycles", "--p", "3", "--k", "5", "--threads", "1"]);
    let c = run(&["cycles", "--p", "3", "--k", "5", "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn plane_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pg2_4.plane");
    let path_str = path.to_str().unwrap();
    let out = run(&["plane", "gen", "--p", "2", "--e", "2", "--out", path_str]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(
        json(&["plane", "check", "--plane", path_str])["valid"],
        true
    );
    let from_file = json(&["cycles", "--plane", path_str, "--k", "3"]);
    let generated = json(&["cycles", "--p", "2", "--e", "2", "--k", "3"]);
    assert_eq!(from_file["count"], generated["count"]);

    let broken = dir.path().join("broken.plane");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    std::fs::write(&broken, lines.join("\n")).unwrap();
    let out = run(&["plane", "check", "--plane", broken.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn fit_from_csv_predicts_held_out_order() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c6.csv");
    let mut text = String::from("n,count\n");
    for n in [2u64, 3, 4, 5, 7, 8, 9, 11] {
        let big_n = n * n + n + 1;
        text.push_str(&format!("{n},{}\n", big_n * (big_n - 1) * n * n / 6));
    }
    std::fs::write(&csv, text).unwrap();
    let csv = csv.to_str().unwrap();
    let v = json(&["fit", "--counts", csv, "--k", "3"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["held_out"][0]["n"], 11);
    assert_eq!(v["held_out"][0]["match"], true);

    let v = json(&[
        "fit",
        "--counts",
        csv,
        "--k",
        "3",
        "--fit-orders",
        "3,4,5,7,8,9,11",
    ]);
    assert_eq!(v["held_out"][0]["n"], 2);
    assert_eq!(v["passed"], true);
}
