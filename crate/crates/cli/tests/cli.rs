use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const EVEN: &str = r#"{"alphabet":2,"generators":["0","11"]}"#;
const DOUBLED: &str = r#"{"alphabet":2,"generators":["00","0000"]}"#;
const FAMILY: &str = r#"{"alphabet":2,"family":{"kind":"power-suffix","u":"00","v":"111","level":4}}"#;
const HALF_SYNC: &str = r#"{"alphabet":2,"half_sync":{"m":"1","U":{"kind":"power","word":"0"},"level":6}}"#;
const COVER: &str = r#"{"alphabet":4,"cover":{"provider":"thue-morse","k":2,"window":64}}"#;

fn spec(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(spec_text: Option<&str>, args: &[&str]) -> Output {
    let file = spec_text.map(spec);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_codedshift"));
    if let Some(f) = &file {
        cmd.arg("--spec").arg(f.path());
    }
    cmd.args(args).output().unwrap()
}

fn code(spec_text: Option<&str>, args: &[&str]) -> i32 {
    run(spec_text, args).status.code().unwrap()
}

fn json(spec_text: Option<&str>, args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(spec_text, &all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn classify_even_shift_mixes() {
    let (c, v) = json(Some(EVEN), &["classify", "--len", "3", "--horizon", "64"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["mixing"], "yes");
    assert_eq!(v["status"], "definite");
    let text = String::from_utf8(run(Some(EVEN), &["classify", "--len", "3", "--horizon", "64"]).stdout).unwrap();
    assert!(text.contains("mixing: yes"));
}

#[test]
fn gcd_of_doubled_lengths() {
    let (c, v) = json(Some(DOUBLED), &["gcd"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["gcd"], 2);
}

#[test]
fn exhausted_horizon_is_unknown() {
    for s in [FAMILY, HALF_SYNC] {
        let (c, v) = json(Some(s), &["classify", "--len", "2", "--horizon", "8"]);
        assert_eq!(c, 2, "{v}");
        assert_eq!(v["result"]["mixing"], "unknown");
        assert_eq!(v["status"], "unknown");
        assert!(v["provenance"]["level"].is_number());
    }
}

#[test]
fn exit_codes_per_command() {
    let cases: &[(&str, &[&str], i32)] = &[
        (EVEN, &["lang", "--len", "4"], 0),
        (EVEN, &["member", "--word", "010"], 0),
        (EVEN, &["member", "--word", "012"], 1),
        (EVEN, &["periodic", "--period", "3"], 0),
        (EVEN, &["return-set", "--u", "0", "--v", "0", "--horizon", "16"], 0),
        (EVEN, &["return-set", "--u", "01", "--v", "10", "--horizon", "4"], 2),
        (EVEN, &["return-set", "--u", "010", "--v", "0"], 1),
        (EVEN, &["classify", "--len", "2", "--horizon", "48"], 0),
        (EVEN, &["classify", "--len", "0"], 1),
        (EVEN, &["gcd"], 0),
        (DOUBLED, &["augment"], 1),
        (EVEN, &["augment"], 0),
        (EVEN, &["property-p", "--words", "0,1,110", "--k", "3"], 0),
        (EVEN, &["property-p", "--words", "0,1", "--k", "5", "--sample", "20", "--seed", "7"], 0),
        (EVEN, &["property-p", "--words", "010"], 1),
        (EVEN, &["sync-word", "--word", "1"], 0),
        (EVEN, &["sync-gen", "--alpha", "0", "--bound", "5"], 0),
        (HALF_SYNC, &["half-sync-verify", "--depth", "3"], 0),
        (EVEN, &["half-sync-verify", "--m", "0", "--depth", "3"], 0),
        (COVER, &["cover-lang", "--len", "3"], 0),
        (COVER, &["cover-lang", "--len", "100"], 1),
        (COVER, &["cover-periodic", "--period", "6"], 0),
        (COVER, &["cover-return", "--u", "0", "--v", "2", "--horizon", "8"], 2),
        (COVER, &["sft-window", "--radius", "2"], 0),
        (COVER, &["gcd"], 1),
        (EVEN, &["cover-lang", "--len", "2"], 1),
    ];
    for (s, args, want) in cases {
        let out = run(Some(s), args);
        assert_eq!(
            out.status.code(),
            Some(*want),
            "{args:?}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(code(None, &["frobenius", "--a1", "3", "--a2", "5"]), 0);
    assert_eq!(code(None, &["frobenius", "--a1", "2", "--a2", "4"]), 1);
    assert_eq!(code(None, &["gcd"]), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(Some(EVEN), &["property-p", "--words", "0", "--sample", "5"]), 1);
    assert_eq!(code(Some(EVEN), &["no-such-command"]), 1);
    assert_eq!(code(None, &["--help"]), 0);
}

#[test]
fn parse_errors_are_located() {
    let out = run(Some("{\"alphabet\":2,\n \"generators\":[\"0\", 11]}"), &["gcd"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("generators[1]") && err.contains("line 2"), "{err}");

    let out = run(Some(r#"{"alphabet":2,"generators":["0"],"cover":{"provider":"fibonacci","window":8}}"#), &["gcd"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("exactly one"));

    let out = run(Some(r#"{"alphabet":2,"half_sync":{"m":"1","U":{"kind":"list","words":["010"]},"level":4}}"#), &["gcd"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn frobenius_report() {
    let (c, v) = json(None, &["frobenius", "--a1", "3", "--a2", "5"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["bound"], 8);
}

/// Every scalar in the JSON report shows up in the text report.
fn scalars(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.values().for_each(|x| scalars(x, out)),
        Value::Array(a) => a.iter().for_each(|x| scalars(x, out)),
        Value::String(s) if s.is_empty() => out.push("ε".into()),
        Value::String(s) => out.push(s.clone()),
        Value::Null => out.push("-".into()),
        other => out.push(other.to_string()),
    }
}

#[test]
fn text_and_json_carry_the_same_data() {
    let cases: &[(&str, &[&str])] = &[
        (EVEN, &["classify", "--len", "2", "--horizon", "32"]),
        (EVEN, &["return-set", "--u", "01", "--v", "10", "--horizon", "12"]),
        (EVEN, &["property-p", "--words", "0,110"]),
        (EVEN, &["sync-word", "--word", "1"]),
        (HALF_SYNC, &["half-sync-verify", "--depth", "2"]),
        (COVER, &["cover-periodic", "--period", "4"]),
        (COVER, &["sft-window", "--radius", "1"]),
    ];
    for (s, args) in cases {
        let (_, v) = json(Some(s), args);
        let text = String::from_utf8(run(Some(s), args).stdout).unwrap();
        let mut items = Vec::new();
        scalars(&v, &mut items);
        for item in items {
            assert!(text.contains(&item), "{args:?}: {item} missing from\n{text}");
        }
    }
}

#[test]
fn sampled_checks_are_reproducible() {
    let args = ["property-p", "--words", "0,1,110", "--k", "6", "--sample", "50", "--seed", "11"];
    let (_, a) = json(Some(EVEN), &args);
    let (_, b) = json(Some(EVEN), &args);
    assert_eq!(a, b);
    assert_eq!(a["provenance"]["seed"], 11);
}

#[test]
fn defaults_apply_when_flags_are_absent() {
    let s = r#"{"alphabet":2,"family":{"kind":"power-suffix","u":"00","v":"111","level":4},"defaults":{"level":2,"horizon":40,"word_length":1}}"#;
    let (_, v) = json(Some(s), &["classify"]);
    assert_eq!(v["provenance"]["level"], 2);
    assert_eq!(v["provenance"]["horizon"], 40);
    assert_eq!(v["provenance"]["word_length"], 1);
    let (_, v) = json(Some(s), &["--level", "3", "gcd"]);
    assert_eq!(v["provenance"]["level"], 3);
}
