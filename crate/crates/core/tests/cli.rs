use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn itsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itsec"))
        .args(args)
        .output()
        .expect("spawn itsec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

const ALL_HALF: &str = r#"{"channel": {"messages": ["0", "1"], "cryptograms": ["0", "1"],
    "matrix": [["1/2", "1/2"], ["1/2", "1/2"]]}}"#;

const GAP4: &str = r#"{"channel": {"messages": ["m1", "m2", "m3", "m4"],
    "cryptograms": ["c1", "c2", "c3", "c4"],
    "matrix": [["3/8", "1/8", "3/8", "1/8"],
               ["1/8", "3/8", "1/8", "3/8"],
               ["1/4", "1/4", "1/4", "1/4"],
               ["1/4", "1/4", "1/4", "1/4"]]}}"#;

const CIRCULANT: &str = r#"{"channel": {"messages": ["0", "1", "2"], "cryptograms": ["0", "1", "2"],
    "matrix": [["1/2", "1/4", "1/4"], ["1/4", "1/2", "1/4"], ["1/4", "1/4", "1/2"]]}}"#;

#[test]
fn analyze_all_half_is_zero_everywhere() {
    let f = write_temp(ALL_HALF);
    let v = json(&itsec(&["analyze", "--input", f.path().to_str().unwrap()]));
    for key in [
        "eps_ind",
        "eps_ps_cs_sup",
        "eps_ps_cm_sup",
        "eps_ps_sm_sup",
        "eps_ss_sup",
    ] {
        assert_eq!(v[key], "0", "{key}");
    }
    assert_eq!(v["doubly_stochastic"], true);
}

#[test]
fn analyze_gap_matrix_reports_ind() {
    let v = json(&itsec(&["analyze", "--inline", GAP4]));
    assert_eq!(v["eps_ind"], "1/4");
    assert_eq!(v["eps_ps_cs_sup"], "1/4");
    assert_eq!(v["grid_resolution"], 4);
}

#[test]
fn analyze_reads_stdin_and_cryptosystems() {
    let otp = r#"{"cryptosystem": {"keys": ["k0", "k1"], "key_dist": ["0.5", "0.5"],
        "enc": {"0": {"k0": "0", "k1": "1"}, "1": {"k0": "1", "k1": "0"}},
        "dec": {"0": {"k0": "0", "k1": "1"}, "1": {"k0": "1", "k1": "0"}}}}"#;
    let mut child = Command::new(env!("CARGO_BIN_EXE_itsec"))
        .args(["analyze", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(otp.as_bytes())
        .unwrap();
    let v = json(&child.wait_with_output().unwrap());
    assert_eq!(v["eps_ind"], "0");
    assert_eq!(v["eps_ss_sup"], "0");
}

#[test]
fn non_stochastic_column_exits_2_naming_it() {
    let bad = r#"{"channel": {"messages": ["a", "b"], "cryptograms": ["x", "y"],
        "matrix": [["1/2", "1/2"], ["1/2", "1/4"]]}}"#;
    let o = itsec(&["analyze", "--inline", bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column `b`"), "{}", stderr(&o));
}

#[test]
fn malformed_json_exits_2_with_location() {
    let o = itsec(&["analyze", "--inline", r#"{"channel": {"messages": ["a"],"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));

    let o = itsec(&[
        "analyze",
        "--inline",
        r#"{"channel": {"messages": ["a"], "cryptograms": ["x"], "matrix": [["0.333..."]]}}"#,
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("channel.matrix[0][0]") && err.contains("p/q"),
        "{err}"
    );
}

#[test]
fn cap_exceedance_exits_3() {
    let o = itsec(&["analyze", "--inline", GAP4, "--ss-cap", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cap"), "{}", stderr(&o));
}

#[test]
fn csv_and_text_formats() {
    let o = itsec(&["analyze", "--inline", GAP4, "--format", "csv"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[0][0], "ind");
    assert_eq!(&rows[0][1], "1/4");
    let cert: Value = serde_json::from_str(&rows[0][2]).unwrap();
    assert_eq!(cert["m0"], "m1");

    let o = itsec(&["analyze", "--inline", GAP4, "--format", "text"]);
    assert!(stdout(&o).contains("IND     1/4"), "{}", stdout(&o));
}

#[test]
fn synthesize_examples() {
    let identity = r#"{"channel": {"messages": ["a", "b"], "cryptograms": ["x", "y"],
        "matrix": [[1, 0], [0, 1]]}}"#;
    let v = json(&itsec(&["synthesize", "--inline", identity]));
    assert_eq!(v["cryptosystem"]["keys"].as_array().unwrap().len(), 1);

    let v = json(&itsec(&["synthesize", "--inline", ALL_HALF]));
    let sys = &v["cryptosystem"];
    assert_eq!(sys["key_dist"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(sys["enc"]["0"]["k1"], "0");
    assert_eq!(sys["enc"]["0"]["k2"], "1");

    let v = json(&itsec(&["synthesize", "--inline", CIRCULANT]));
    let sys = &v["cryptosystem"];
    assert_eq!(sys["key_dist"], serde_json::json!(["1/2", "1/4", "1/4"]));
    let shifts: Vec<Vec<String>> = ["k1", "k2", "k3"]
        .iter()
        .map(|k| {
            ["0", "1", "2"]
                .iter()
                .map(|m| sys["enc"][m][k].as_str().unwrap().to_string())
                .collect()
        })
        .collect();
    assert_eq!(
        shifts,
        vec![
            vec!["0", "1", "2"],
            vec!["1", "2", "0"],
            vec!["2", "0", "1"]
        ]
    );
}

#[test]
fn synthesized_cipher_feeds_back_into_analyze() {
    let o = itsec(&["synthesize", "--inline", GAP4]);
    let v = json(&itsec(&["analyze", "--inline", &stdout(&o)]));
    assert_eq!(v["eps_ind"], "1/4");
}

#[test]
fn synthesize_rejects_non_doubly_stochastic() {
    let m = r#"{"channel": {"messages": ["a", "b"], "cryptograms": ["x", "y"],
        "matrix": [[1, 1], [0, 0]]}}"#;
    let o = itsec(&["synthesize", "--inline", m]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row `x` sums to 2"), "{}", stderr(&o));
}

#[test]
fn gap_demo_examples() {
    let v = json(&itsec(&["gap-demo", "--n", "4", "--delta", "1/8"]));
    assert_eq!(v["eps_ind"], "1/4");
    assert_eq!(v["eps_ps_sm_uniform"], "1/4");
    assert_eq!(
        v["posterior_distances"],
        serde_json::json!(["1/4", "1/4", "0", "0"])
    );

    let v = json(&itsec(&["gap-demo", "--n", "100", "--delta", "1/100"]));
    assert_eq!(v["eps_ind"], "1/50");
    assert_eq!(v["eps_ps_sm_uniform"], "1/2");

    assert_eq!(itsec(&["gap-demo", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        itsec(&["gap-demo", "--n", "4", "--delta", "1/3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn lemma_check_examples() {
    let v = json(&itsec(&["lemma-check", "1/2", "0", "0", "1/2"]));
    assert_eq!(v["lhs"], "1/2");
    assert_eq!(v["rhs"], "1/4");
    assert_eq!(v["abs_ad_minus_bc"], "1/4");

    for args in [["1/4", "1/4", "1/4", "1/4"], ["1", "0", "0", "0"]] {
        let v = json(&itsec(&[&["lemma-check"][..], &args[..]].concat()));
        assert_eq!(
            (&v["lhs"], &v["rhs"], &v["abs_ad_minus_bc"]),
            (&"0".into(), &"0".into(), &"0".into())
        );
    }
    assert_eq!(
        itsec(&["lemma-check", "1/2", "1/2", "1/2", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_theorems_small_runs() {
    let o = itsec(&["verify-theorems", "--count", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ALL PASS"));

    let args = [
        "verify-theorems",
        "--count",
        "5",
        "--max-size",
        "4",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let a = itsec(&args);
    let b = itsec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["counterexamples"], serde_json::json!([]));
}

#[test]
fn invalid_flags_exit_2() {
    assert_eq!(
        itsec(&["analyze", "--inline", ALL_HALF, "--grid", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        itsec(&["analyze", "--inline", ALL_HALF, "--ss-cap", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(itsec(&["analyze"]).status.code(), Some(2));
}
