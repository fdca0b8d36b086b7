use std::process::Command;

use locc::cli::{BoundReport, CheckReport, ClassesReport, ClassifyReport};

fn locc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_locc")).args(args).env_remove("LOCC_TOL").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn classes_counts() {
    let (code, out, _) = locc(&["classes", "--d", "4", "--k", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("classes: 122, total_sets: 1820"));
    let (_, out, _) = locc(&["classes", "--d", "3", "--k", "3", "--format", "json"]);
    let r: ClassesReport = serde_json::from_str(&out).unwrap();
    assert_eq!((r.classes, r.total_sets), (12, 84));
}

#[test]
fn check_exit_codes_and_json() {
    let (code, out, _) = locc(&["check", "00,11,31,32", "--format", "json"]);
    assert_eq!(code, 3);
    let r: CheckReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.alice.unwrap().op_only, 5);
    assert_eq!(r.alice.unwrap().op_plus_r, 1);
    assert_eq!(locc(&["check", "00,01,02,03"]).0, 0);
    assert_eq!(locc(&["check", "00,01,01,02"]).0, 2);
    assert_eq!(locc(&["check", "000,1"]).0, 2);
    assert_eq!(locc(&["check", "00,11,22", "--d", "3"]).0, 0);
}

#[test]
fn classify_json_round_trips_and_is_thread_independent() {
    let (code, one, _) = locc(&["classify-all", "--format", "json", "--threads", "1"]);
    assert_eq!(code, 0);
    let (_, many, _) = locc(&["classify-all", "--format", "json", "--threads", "4"]);
    assert_eq!(one, many);
    let r: ClassifyReport = serde_json::from_str(&one).unwrap();
    assert_eq!(r.schema, "locc-classify/1");
    assert_eq!((r.fails_r, r.passes_r), (39, 83));
    let again: ClassifyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
    let (_, text, _) = locc(&["classify-all"]);
    assert_eq!(text.lines().last(), Some("fails_r=39 passes_r=83"));
}

#[test]
fn classify_csv_parses() {
    let (_, out, _) = locc(&["classify-all", "--format", "csv"]);
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(out.as_bytes());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        ["representative", "member_count", "verdict", "alice_op_dim", "alice_opr_dim", "bob_op_dim", "bob_opr_dim", "protocol"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 122);
    assert_eq!(rows.iter().filter(|r| &r[2] == "FailsR").count(), 39);
    assert!(out.trim_end().ends_with("# fails_r=39 passes_r=83"));
}

#[test]
fn bound_values() {
    let (code, out, _) = locc(&["bound", "00,11,31,32"]);
    assert_eq!(code, 0);
    assert!(out.contains("pre_measurement: 2.0000000000 bits"));
    let (_, out, _) = locc(&["bound", "00,11,31,32", "--a0", "1", "--mu0", "0", "--mu1", "0", "--zeta", "0", "--eta", "0"]);
    assert!(out.contains("post_measurement: 2.0000000000 bits"));
    let args = ["bound", "00,11,31,32", "--a0", "1", "--mu0", "0.5", "--mu1", "0.25", "--zeta", "1.0471975512", "--eta", "0.6283185307", "--format", "json"];
    let (_, out, _) = locc(&args);
    let r: BoundReport = serde_json::from_str(&out).unwrap();
    let p = [0.3125f64, 0.1875, 0.28125, 0.21875];
    let h: f64 = -p.iter().map(|x| x * x.log2()).sum::<f64>();
    assert!((r.post_measurement.unwrap().bits - h).abs() < 1e-10);
    assert_eq!(locc(&["bound", "00,01,02,03", "--a0", "1"]).0, 2);
}

#[test]
fn out_file_and_env_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("classes.json");
    let (code, stdout, _) = locc(&["classes", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let r: ClassesReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.classes, 122);

    let bad = Command::new(env!("CARGO_BIN_EXE_locc")).args(["check", "00,11,31,32"]).env("LOCC_TOL", "0.5").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_locc")).args(["check", "00,11,31,32"]).env("LOCC_TOL", "1e-8").output().unwrap();
    assert_eq!(ok.status.code(), Some(3));
}

#[test]
fn invalid_config_is_exit_2() {
    for args in [&["classes", "--d", "9"][..], &["classes", "--k", "0"], &["classes", "--tol", "1"], &["classify-all", "--k", "3"], &["frobnicate"]] {
        let (code, _, err) = locc(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}
