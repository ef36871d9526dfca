use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn kleinian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinian"))
        .args(args)
        .output()
        .unwrap()
}

fn kleinian_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kleinian"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn quiver_show_d4() {
    let o = kleinian(&["quiver", "show", "--type", "D4"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["delta"], serde_json::json!([1, 1, 2, 1, 1]));
    assert_eq!(v["type"], "D");
    assert_eq!(v["edges"][0], serde_json::json!(["inf", 0, 1]));
}

#[test]
fn poset_dot_counts() {
    let o = kleinian(&["poset", "--type", "A2", "--format", "dot"]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.contains(" -> ")).count(), 12);
    assert_eq!(text.lines().filter(|l| l.contains("[rank=")).count(), 8);
    assert!(text.contains("\"J={0,2}\" [rank=2"));
}

#[test]
fn poset_text_and_json() {
    let text = stdout(&kleinian(&["poset", "--type", "A1"]));
    assert_eq!(
        text,
        "J={0,1} -> J={0}\nJ={0,1} -> J={1}\nJ={0} -> J={}\nJ={1} -> J={}\n"
    );
    let v = json(&kleinian(&["poset", "--type", "A1", "--format", "json"]));
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
}

#[test]
fn chi_csv() {
    let o = kleinian(&["hilb", "chi", "--r", "1", "--nmax", "2"]);
    assert_eq!(stdout(&o), "n,chi\n0,1\n1,1\n2,3\n");
}

#[test]
fn staircase_listings() {
    assert_eq!(
        stdout(&kleinian(&["hilb", "staircases", "--n", "4"])).lines().count(),
        5
    );
    let fixed = stdout(&kleinian(&["hilb", "fixed-points", "--r", "1", "--n", "1"]));
    assert_eq!(fixed, "{\"cells\":[[0,0],[0,1]]}\n{\"cells\":[[0,0],[1,0]]}\n");
    let monoid = stdout(&kleinian(&["hilb", "monoid-staircases", "--r", "1", "--n", "2"]));
    assert_eq!(monoid.lines().count(), 3);
    let weights = stdout(&kleinian(&["hilb", "staircases", "--n", "1", "--r", "2"]));
    assert_eq!(weights, "{\"cells\":[[0,0]],\"weights\":[1,0,0]}\n");
}

#[test]
fn intersect_reads_stdin() {
    let o = kleinian_stdin(
        &["hilb", "intersect", "--r", "1"],
        r#"{"cells":[[0,0],[1,0],[0,1],[1,1]]}"#,
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{\"cells\":[[0,0],[1,1]],\"r\":1}\n");
}

#[test]
fn staircase_to_corner_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let stair = dir.path().join("s.json");
    std::fs::write(&stair, r#"{"cells":[[0,0],[1,0],[2,0],[3,0]]}"#).unwrap();
    let stair = stair.to_str().unwrap();

    let rep = kleinian(&["rep", "from-staircase", "--r", "1", "--input", stair]);
    assert!(rep.status.success());
    let rep_text = stdout(&rep);
    let residual = kleinian_stdin(&["rep", "residual"], &rep_text);
    assert_eq!(json(&residual)["preprojective"], true);
    let cyclic = kleinian_stdin(&["rep", "cyclic"], &rep_text);
    assert_eq!(json(&cyclic)["cyclic"], true);

    let corner = kleinian_stdin(&["corner", "from-rep"], &rep_text);
    let corner_text = stdout(&corner);
    let direct = kleinian(&["corner", "from-staircase", "--r", "1", "--input", stair]);
    assert_eq!(stdout(&direct), corner_text);
    let c = json(&corner);
    assert_eq!(c["n"], 2);
    assert_eq!(c["A"][0], serde_json::json!([["0", "0"], ["1", "0"]]));

    let check = kleinian_stdin(&["corner", "check", "--type", "A1"], &corner_text);
    assert!(check.status.success());
    assert_eq!(json(&check)["valid"], true);
    let stable = kleinian_stdin(&["corner", "stable", "--conjugations", "5"], &corner_text);
    let s = json(&stable);
    assert_eq!(s["eta_stable"], true);
    assert_eq!(s["wstar_vanishes"], true);
    assert_eq!(s["basis_invariant"], true);
    let chow = kleinian_stdin(&["corner", "chow", "--conjugations", "3", "--seed", "7"], &corner_text);
    assert_eq!(
        json(&chow)["points"],
        serde_json::json!([["0", "0", "0"], ["0", "0", "0"]])
    );
}

#[test]
fn rep_json_round_trips() {
    let rep = stdout(&kleinian_stdin(
        &["rep", "from-staircase", "--r", "2"],
        r#"{"cells":[[0,0],[1,0],[0,1]]}"#,
    ));
    let parsed: kleinian::RepJson = serde_json::from_str(&rep).unwrap();
    let back = kleinian::QuiverRepresentation::from_json(&parsed).unwrap();
    assert_eq!(serde_json::to_string_pretty(&back.to_json()).unwrap() + "\n", rep);
}

#[test]
fn invalid_corner_exits_two() {
    let bad = r#"{"n":1,"w":["1"],"wstar":["0"],"A":[[["2"]],[["3"]],[["1"]]]}"#;
    let o = kleinian_stdin(&["corner", "check", "--type", "A1"], bad);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["f"], serde_json::json!([["5"]]));
}

#[test]
fn domain_errors_exit_one() {
    let o = kleinian_stdin(&["corner", "check", "--type", "A1"], "{not json");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));
    assert!(o.stdout.is_empty());

    assert_eq!(
        kleinian(&["verify", "--type", "A2", "--n", "1", "--J", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(kleinian(&["quiver", "show", "--type", "D3"]).status.code(), Some(1));
    assert_eq!(kleinian(&["frobnicate"]).status.code(), Some(1));
    let irregular = kleinian_stdin(&["rep", "from-staircase", "--r", "2"], r#"{"cells":[[0,0]]}"#);
    assert_eq!(irregular.status.code(), Some(1));
}

#[test]
fn verify_single_face() {
    let o = kleinian(&["verify", "--type", "E8", "--n", "1", "--J", "2"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["status"], "verified");
    assert_eq!(v["witnesses"], serde_json::json!([]));

    let a1 = json(&kleinian(&["verify", "--type", "A1", "--n", "1", "--J", "1"]));
    assert_eq!(a1["integer_max"]["0"], 1);
    assert_eq!(a1["lp_max"]["0"], "3/2");
}

#[test]
fn verify_all_writes_report_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let o = kleinian(&[
        "--workers",
        "1",
        "verify-all",
        "--type",
        "D4",
        "--n",
        "1",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("D4 31/31 verified\n"));
    let o2 = kleinian(&[
        "--workers",
        "3",
        "verify-all",
        "--type",
        "D4",
        "--n",
        "1",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(o.stdout, o2.stdout);
    let ra = std::fs::read(&a).unwrap();
    assert_eq!(ra, std::fs::read(&b).unwrap());
    let reports: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 31);
}
