use std::process::{Command, Output};

fn partcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partcong")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cusps_of_gamma0_20() {
    let o = partcong(&["cusps", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "6 cusp classes of Gamma0(20)\n1/20 1/10 1/5 1/4 1/2 1\n");
}

#[test]
fn order_and_newman() {
    let o = partcong(&["order", "20:1^2,4^2,10^8,5^-2,20^-10", "1/20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-5"), "{}", stdout(&o));
    assert_eq!(partcong(&["newman", "20:1^2,4^2,10^8,5^-2,20^-10"]).status.code(), Some(0));
    assert_eq!(partcong(&["newman", "4:1^-3,2^5,4^-2"]).status.code(), Some(1));
}

#[test]
fn tables_are_stable_and_match_golden() {
    let first = partcong(&["tables"]);
    let second = partcong(&["tables"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first), include_str!("golden/tables.txt"));
}

#[test]
fn direct_check_reports_counterexample() {
    let o = partcong(&["direct-check", "rogers-ramanujan", "125", "99", "2", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("856503255"), "{}", stdout(&o));
    assert_eq!(partcong(&["direct-check", "rogers-ramanujan", "25", "24", "1", "60"]).status.code(), Some(0));
}

#[test]
fn verify_builtin_families() {
    let o = partcong(&["verify", "rogers-ramanujan", "--B", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("V = [0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5"), "{}", stdout(&o));
    assert_eq!(partcong(&["verify", "andrews-sellers", "--B", "3"]).status.code(), Some(0));
}

#[test]
fn verify_json_report() {
    let o = partcong(&["verify", "andrews-sellers", "--B", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let v: Vec<u64> = report["steps"].as_array().unwrap().iter().map(|s| s["v"].as_u64().unwrap()).collect();
    assert_eq!(v, [0, 1, 2]);
    assert_eq!(report["spec"]["c"], 12);
}

#[test]
fn verify_spec_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partitions.json");
    std::fs::write(&path, r#"{"M":1,"r":{"1":-1},"ell":5,"c":1,"pattern":"every-alpha","B":2}"#).unwrap();
    let out = dir.path().join("report.json");
    let o = partcong(&["verify", path.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["spec"]["M"], 1);
    assert_eq!(report["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(partcong(&["verify", "no-such-family"]).status.code(), Some(2));
    assert_eq!(partcong(&["verify", r#"{"M":2}"#]).status.code(), Some(2));
    assert_eq!(partcong(&["cusps"]).status.code(), Some(2));
    assert_eq!(partcong(&["frobnicate"]).status.code(), Some(2));
}
