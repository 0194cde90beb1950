use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sierpinski_knopp::certify::{export_table, CandidateTable, Encoding, Verdict};
use sierpinski_knopp::curve::OrientedFraction;
use sierpinski_knopp::extremal::ExtremalResult;
use sierpinski_knopp::metrics::LocalityReport;
use sierpinski_knopp::{Dyadic, ExactRatio, Point};

fn sk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sk"))
        .args(args)
        .env_remove("SK_DEPTH_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_table(dir: &Path, name: &str, table: &CandidateTable) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(table).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn eval_prints_right_vertex() {
    let o = sk(&["eval", "--t", "1/2^1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("(1,1)"));
}

#[test]
fn slr_of_endpoints_is_four() {
    let o = sk(&["slr", "--t1", "0", "--t2", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).split_whitespace().next(), Some("4"));
}

#[test]
fn json_outputs_round_trip() {
    let o = sk(&["--json", "eval", "--t", "3/2^3"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let p: Point = serde_json::from_value(v["point"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&p).unwrap(), v["point"]);

    let o = sk(&["--json", "slr", "--t1", "1/2^2", "--t2", "1"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r: ExactRatio = serde_json::from_value(v["slr"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap(), v["slr"]);

    let o = sk(&["--json", "locality", "--depth", "3,5", "--certified"]);
    let reports: Vec<LocalityReport> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.certified_upper.is_some()));

    let o = sk(&["--json", "rival", "--curve", "hilbert", "--depth", "4"]);
    let r: LocalityReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.curve, "hilbert");

    let o = sk(&["--json", "tiling", "--order", "3"]);
    let tiles: Vec<OrientedFraction> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(tiles.len(), 8);

    let o = sk(&["--json", "extremal", "--resolution", "50"]);
    let r: ExtremalResult = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.max_area <= 1.0 + 1e-9);
}

#[test]
fn locality_csv_header_and_rows() {
    let o = sk(&["locality", "--depth", "2,4", "--certified", "--csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "depth,attained_max,certified_upper");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,4,"));
    let o = sk(&["locality", "--depth", "3", "--csv"]);
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",none"));
}

#[test]
fn export_then_certify_passes() {
    let dir = tempfile::tempdir().unwrap();
    for depth in 1..=12u32 {
        let path = dir.path().join(format!("sk{depth}.json"));
        let p = path.to_str().unwrap();
        let o = sk(&["export-table", "--depth", &depth.to_string(), "--output", p]);
        assert!(o.status.success());
        let o = sk(&["certify", "--input", p, "--tol", "0"]);
        assert_eq!(o.status.code(), Some(0), "depth {depth}: {}", stdout(&o));
    }
}

#[test]
fn decimal_export_certifies_with_default_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_table(dir.path(), "dec.json", &export_table(7, Encoding::Decimal).unwrap());
    let o = sk(&["--json", "certify", "--input", &path]);
    assert_eq!(o.status.code(), Some(0));
    let v: Verdict = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.pass);
}

#[test]
fn perturbed_table_exits_two_with_violation() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = export_table(6, Encoding::Dyadic).unwrap();
    table.points[32].x = &table.points[32].x + &Dyadic::new(1, 3);
    let path = write_table(dir.path(), "bad.json", &table);
    let o = sk(&["certify", "--input", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("first violation"));

    let o = sk(&["--json", "certify", "--input", &path]);
    assert_eq!(o.status.code(), Some(2));
    let v: Verdict = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v.pass);
    assert_eq!(serde_json::to_value(&v).unwrap(), serde_json::from_slice::<Value>(&o.stdout).unwrap());
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    std::fs::write(&path, r#"{"depth": 2, "encoding": "dyadic", "points": [["0","0"]]}"#).unwrap();
    let o = sk(&["certify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("length"));

    assert_eq!(sk(&["certify", "--input", "/nonexistent/x.json"]).status.code(), Some(1));
    assert_eq!(sk(&["nosuch"]).status.code(), Some(1));
    assert_eq!(sk(&["eval", "--t", "2"]).status.code(), Some(1));
    assert_eq!(sk(&["render", "--order", "0"]).status.code(), Some(1));
}

#[test]
fn invalid_depth_budget_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_sk"))
        .args(["eval", "--t", "0"])
        .env("SK_DEPTH_BUDGET", "500")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_sk"))
        .args(["eval", "--t", "1/2^9"])
        .env("SK_DEPTH_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    let o = sk(&["render", "--order", "4", "--subdivision", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polygon").count(), 17);
    let again = stdout(&sk(&["render", "--order", "4", "--subdivision"]));
    assert_eq!(again, svg);
}
