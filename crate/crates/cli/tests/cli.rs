use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cornerrank")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn spec_file(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("cornerrank-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn sr_examples() {
    let z4 = spec_file("zmod4.json", r#"{"type":"zmod","m":4}"#);
    let (code, out, _) = run(&["sr", "--ring", &z4]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["records"][0]["detail"]["stable_rank"], 1);

    let m2 = spec_file("m2f2.json", r#"{"type":"matrix","n":2,"base":{"type":"zmod","m":2}}"#);
    let (code, out, _) = run(&["sr", "--ring", &m2, "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("check,ring,result"));

    let z = spec_file("integers.json", r#"{"type":"integers"}"#);
    let (code, _, err) = run(&["sr", "--ring", &z]);
    assert_eq!(code, 2);
    assert!(err.contains("enumeration unsupported"), "{err}");
}

#[test]
fn bad_input_exits_3() {
    assert_eq!(run(&["check", "no-such-battery"]).0, 3);
    assert_eq!(run(&["sr", "--ring", "/no/such/file"]).0, 3);
    let bad = spec_file("bad.json", r#"{"type":"zmod","m":1}"#);
    assert_eq!(run(&["sr", "--ring", &bad]).0, 3);
    assert_eq!(run(&["demo", "nope"]).0, 3);
    let junk = spec_file("junk.json", "{}");
    assert_eq!(run(&["verify-report", &junk]).0, 3);
}

#[test]
fn corpus_cap_is_unsupported() {
    let corpus = spec_file(
        "corpus.json",
        r#"[{"name":"z4","spec":{"type":"zmod","m":4},"enumeration_cap":2}]"#,
    );
    let (code, out, _) = run(&["check", "sr1", "--corpus", &corpus]);
    assert_eq!(code, 2);
    assert!(out.contains("\"unsupported\""));
}

#[test]
fn empty_demo_and_determinism() {
    let (code, out, _) = run(&["demo", "m2z-reduce", "--count", "0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 0);

    let strip = |s: &str| {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        for r in v["records"].as_array_mut().unwrap() {
            r["elapsed_ms"] = 0.into();
        }
        v
    };
    let a = run(&["demo", "m2z-reduce", "--seed", "9", "--count", "5", "--trace", "--jobs", "2"]).1;
    let b = run(&["demo", "m2z-reduce", "--seed", "9", "--count", "5", "--trace"]).1;
    assert_eq!(strip(&a), strip(&b));
    assert!(strip(&a)["records"][0]["trace"].is_array() || strip(&a)["records"][0]["trace"].is_object());
}

#[test]
fn tampered_report_fails_replay() {
    let (_, out, _) = run(&["demo", "z-reduce", "--count", "3"]);
    let mut v: serde_json::Value = serde_json::from_str(&out).unwrap();
    v["records"][0]["witnesses"][0]["c1"] = "0".into();
    v["records"][0]["witnesses"][0]["c2"] = "0".into();
    v["records"][0]["witnesses"][0]["a1"] = "2".into();
    v["records"][0]["witnesses"][0]["a2"] = "4".into();
    v["records"][0]["witnesses"][0]["b"] = "1".into();
    let f = spec_file("tampered.json", &v.to_string());
    assert_eq!(run(&["verify-report", &f]).0, 1);
}
