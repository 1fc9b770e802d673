use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cherednik")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--out", "json"]);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (v, out.status.code().unwrap())
}

#[test]
fn group_info_cyclic() {
    let (v, code) = json(&["group", "--family", "cyclic", "--n", "3", "info"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 3);
    assert_eq!(v["hyperplanes"], 1);
    assert_eq!(v["degrees"], serde_json::json!([3]));
    for key in ["group", "k", "caps"] {
        assert!(v.get(key).is_some(), "missing header {key}");
    }
}

#[test]
fn hilbert_of_z2() {
    let (v, code) = json(&["quasi", "hilbert", "--family", "cyclic", "--n", "2", "--k", "0,1", "--max-degree", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["numerator"], "1 + t^3");
    assert_eq!(v["p_at_one"], 2);
}

#[test]
fn hilbert_cap_too_small_is_inconclusive() {
    let (v, code) = json(&["quasi", "hilbert", "--family", "symmetric", "--n", "3", "--k", "1", "--max-degree", "6"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "inconclusive");
}

#[test]
fn s3_suite_passes() {
    let out = run(&["suite", "--family", "symmetric", "--n", "3", "--k", "1", "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("suite: PASS"));
}

#[test]
fn text_output_is_default() {
    let out = run(&["group", "--family", "symmetric", "--n", "3", "info"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("group info: PASS\n"));
    assert!(s.contains("  order: 6\n"));
}

#[test]
fn membership_failure_exits_one_with_witness() {
    let (v, code) = json(&["quasi", "membership", "--family", "cyclic", "--n", "2", "--k", "1", "--poly", "x"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert!(!v["witness"].is_null());
    let (v, code) = json(&["quasi", "membership", "--family", "cyclic", "--n", "2", "--k", "1", "--poly", "x^3 + x^2"]);
    assert_eq!((code, &v["pass"]), (0, &Value::Bool(true)));
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let out = run(&["dunkl", "relations", "--family", "cyclic", "--n", "2", "--k", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--k"));

    let out = run(&["group", "info", "--family", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--family"));

    let out = run(&["group", "info", "--family", "cyclic"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));

    let out = run(&["kz", "residues", "--family", "cyclic", "--n", "3", "--tau", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--tau"));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dunkl_apply_rank_one() {
    // T(x^3) = 3x^2 - (2/3)(x^3 - (-x)^3)/(2x) = (3 - 2/3)x^2 at k = 1/3
    let (v, code) = json(&["dunkl", "apply", "--family", "cyclic", "--n", "2", "--k", "1/3", "--xi", "e1", "--poly", "x^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "7/3*x^2");
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn cm_commutator_for_s3() {
    let (v, code) = json(&["cm", "commutator", "--family", "symmetric", "--n", "3", "--k", "1", "--p", "p2", "--q", "p3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "0");
}

#[test]
fn g_family_with_operator_polynomial() {
    let (v, code) = json(&["cm", "commutator", "--family", "G(3,1,2)", "--k", "1", "--p", "p3", "--q", "p6"]);
    assert_eq!(code, 0, "{v}");
    let out = run(&["--family", "G", "--m", "3", "--p", "1", "--n", "2", "quasi", "stability"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_intertwiner_is_reported() {
    let (v, code) = json(&["derham", "intertwiner", "--family", "cyclic", "--n", "2", "--k=-1/2", "--max-total-degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["intertwiner"]["status"], "singular");
    assert_eq!(v["intertwiner"]["eigenvalue"], "-1");
}

#[test]
fn derham_check_report_shape() {
    let (v, code) = json(&["derham", "check", "--family", "dihedral", "--m", "3", "--k", "1", "--max-total-degree", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["homotopy"], true);
    assert_eq!(v["d_squared"], true);
    assert_eq!(v["intertwiner"]["status"], "ok");
}

#[test]
fn group_and_multiplicity_files() {
    let dir = tempfile::tempdir().unwrap();
    let gpath = dir.path().join("g.json");
    let kpath = dir.path().join("k.json");
    std::fs::File::create(&gpath)
        .unwrap()
        .write_all(br#"{"family": "explicit", "conductor": 4, "generators": [[["z4"]]]}"#)
        .unwrap();
    std::fs::File::create(&kpath).unwrap().write_all(br#"{"orbits": [[0, 1, 0, "1/2"]]}"#).unwrap();
    let (v, code) = json(&["group", "info", "--group", gpath.to_str().unwrap(), "--k", kpath.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["order"], 4);
    assert_eq!(v["k"], "0,1,0,1/2");

    std::fs::File::create(&kpath).unwrap().write_all(br#"{"orbits": [[1, 1, 0, 0]]}"#).unwrap();
    let out = run(&["group", "info", "--group", gpath.to_str().unwrap(), "--k", kpath.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kz_residues_json_entries_are_cyclotomic() {
    let (v, code) = json(&["kz", "residues", "--family", "symmetric", "--n", "3", "--k", "1", "--tau", "standard"]);
    assert_eq!(code, 0);
    let entry = &v["residues"][0][0][0];
    assert!(entry.get("N").is_some() && entry.get("c").is_some(), "{entry}");
}

#[test]
fn suite_is_deterministic_across_threads() {
    let args = ["suite", "--family", "dihedral", "--m", "4", "--k", "0,1;0,2", "--max-degree", "4", "--out", "json"];
    let a = Command::new(env!("CARGO_BIN_EXE_cherednik")).args(args).args(["--threads", "1"]).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_cherednik")).args(args).args(["--threads", "4"]).output().unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    let s = String::from_utf8(out.stdout).unwrap();
    for cmd in ["group", "dunkl", "cm", "derham", "kz", "quasi", "suite"] {
        assert!(s.contains(cmd), "{cmd} missing from --help");
    }
}
