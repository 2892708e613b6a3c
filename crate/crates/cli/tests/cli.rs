use std::path::PathBuf;
use std::process::{Command, Output};

use pointed_coh::records::Record;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pointed-coh"))
        .args(args)
        .env_remove("POINTED_COH_SEED")
        .env_remove("POINTED_COH_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_odd_invariant() {
    let o = run(&["check", "--datum", &data("a1cubed.datum")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("odd invariant: η₁η₂η₃ (degree 3)"));
}

#[test]
fn oracle_matches_invariant_count() {
    let o = run(&["oracle", "--datum", &data("sweedler.datum"), "--degree", "4", "--compare", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let dims: Vec<u64> = out
        .lines()
        .map(|l| l.parse::<Record>().unwrap())
        .filter(|r| r.kind() == Some("ext"))
        .map(|r| r.require("dim").unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 0, 1, 0, 1]);
    assert!(out.contains("MATCH"));
}

#[test]
fn bad_cartan_is_an_input_error() {
    let o = run(&["validate", "--datum", &data("bad_cartan.datum")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Cartan condition"));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("broken.datum");
    std::fs::write(&path, "cartan = [[2]]\ng = [[1]]\nchi = [[1]]\n\n[group]\norders = [2, \"x\"]\n").unwrap();
    let o = run(&["roots", "--datum", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["roots", "--datum", "/nonexistent/x.datum"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn records_round_trip() {
    let o = run(&["cohomology", "--datum", &data("a1cubed.datum"), "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let mut relations = 0;
    for line in stdout(&o).lines() {
        let r: Record = line.parse().unwrap();
        assert_eq!(r.to_string(), line);
        if r.kind() == Some("relation") {
            r.get_scalar("coeff").unwrap();
            relations += 1;
        }
    }
    assert_eq!(relations, 3 * 4 + 3);
}

#[test]
fn table_is_rendered_from_records() {
    let args = ["roots", "--datum", &data("a2a1.datum")];
    let table = stdout(&run(&args));
    let records = stdout(&run(&[args[0], args[1], args[2], "--format", "records"]));
    for line in records.lines() {
        let r: Record = line.parse().unwrap();
        for (k, v) in r.fields().iter().skip(1) {
            assert!(table.contains(k.as_str()) && table.contains(v.as_str()), "{k}={v}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["check", "--datum", &data("uqsl2.datum"), "--samples", "500", "--seed", "3"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn budget_exhaustion_fails_the_run() {
    let o = run(&["oracle", "--datum", &data("uqsl2.datum"), "--degree", "2", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("budget"));
}

#[test]
fn invariants_list_and_witness() {
    let o = run(&["invariants", "--datum", &data("uqsl2_gr.datum"), "--max-degree", "4", "--odd-witness"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("odd invariant: none"));
    let fingen = run(&["fingen", "--datum", &data("uqsl2_gr.datum")]);
    assert_eq!(fingen.status.code(), Some(0));
}

#[test]
fn examples_pass() {
    let o = run(&["examples"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
