use std::path::Path;
use std::process::{Command, Output};

use merohecke::hecke::t_op;
use merohecke::meroforms::{build, FormName};

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_merohecke"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("MEROHECKE_CACHE_DIR", dir),
        None => cmd.env_remove("MEROHECKE_CACHE_DIR"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_big_g() {
    let o = run(&["expand", "G", "--prec", "6"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "q^2 - 4143*q^3 + 16868385*q^4 - 68686682635*q^5 + O(q^6)");
}

#[test]
fn obstructed_principal_part() {
    let o = run(&["solve-pp", "--weight", "-10", "--pp", "1:1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "obstruction [1]");

    let o = run(&["solve-pp", "--weight", "-4", "--pp", "5:1,1:-3126", "--sshriek", "--prec", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("26994415788736*q"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["expand", "NotAForm"], None).status.code(), Some(2));
    assert_eq!(run(&["solve-pp", "--weight", "2", "--pp", "1:1"], None).status.code(), Some(2));
    assert_eq!(run(&["bogus"], None).status.code(), Some(2));
    let guard = run(&["eval", "f6i", "--at", "0,0.9", "--bits", "64"], None);
    assert_eq!(guard.status.code(), Some(3));
}

#[test]
fn verify_all_reports_every_identity() {
    let o = run(&["verify", "all"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    let ids: Vec<&str> = v["identities"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    for id in ["bol-f6iinfty", "gT2", "gT3", "G-hecke", "jpoly-eval", "F-over-Delta", "psi-fourier-consistency"] {
        assert!(ids.contains(&id), "{id} missing");
    }
    assert_eq!(v["theorem_checks"].as_array().unwrap().len(), 13 * 3 * 2);

    let single = run(&["verify", "gT2", "--prec", "40"], None);
    assert_eq!(single.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&single)).unwrap();
    assert_eq!(r["window"], serde_json::json!([-4, 20]));
}

#[test]
fn expand_then_hecke_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    let o = run(&["expand", "g", "--prec", "30", "--json"], None);
    std::fs::write(&file, &o.stdout).unwrap();
    let o = run(&["hecke", file.to_str().unwrap(), "--weight", "-10", "--m", "3", "--json"], None);
    assert_eq!(o.status.code(), Some(0));
    let expected = t_op(&build(FormName::SmallG, 30).unwrap().series, -10, 3).unwrap();
    assert_eq!(stdout(&o).trim(), expected.to_json());
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["expand", "E4^2*E6/Delta^2", "--prec", "25"];
    let plain = run(&args, None);
    let first = run(&args, Some(dir.path()));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let second = run(&args, Some(dir.path()));
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(plain.stdout, second.stdout);

    // A stale entry under the same file name is ignored.
    let path = entries[0].as_ref().unwrap().path();
    let text = std::fs::read_to_string(&path).unwrap().replace("\"format_version\":1", "\"format_version\":0");
    std::fs::write(&path, text).unwrap();
    assert_eq!(run(&args, Some(dir.path())).stdout, plain.stdout);
}

#[test]
fn numeric_commands() {
    let o = run(&["cm-check", "--bits", "128", "--tol", "1e-20"], None);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["psi-sum", "--k", "3", "--ell", "0", "--zz", "i", "--at", "0,2", "--bits", "53"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vanishing"], true);

    let o = run(
        &["psi-prop-check", "--k", "3", "--ell", "-1", "--zz", "i", "--at", "0.13,1.37", "--n", "2", "--bits", "53", "--tol", "1e-2"],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = run(&["eval", "j", "--at", "cm7", "--bits", "128"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let re: f64 = v["value"]["value_re"].as_str().unwrap().parse().unwrap();
    assert!((re + 3375.0).abs() < 1e-20 * 3375.0 + 1e-12);
}
