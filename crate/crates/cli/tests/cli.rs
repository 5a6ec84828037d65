use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn ccj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccj"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_u3_passes() {
    let f = fixture("u3.toml");
    for s in ["category", "csystem", "bridge", "j2", "filler", "functors"] {
        let o = ccj(&["verify", f.to_str().unwrap(), "--suite", s]);
        assert_eq!(code(&o), 0, "{s}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("# ccj-report/1 fixture=U3\n"));
    }
}

#[test]
fn defect_fixture_fails_with_the_check_named() {
    let o = ccj(&[
        "verify",
        fixture("bad-fiber-map.toml").to_str().unwrap(),
        "--suite",
        "functors",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL broken/comparison-iso"));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("broken/comparison-iso"), "{err}");

    let o = ccj(&[
        "verify",
        fixture("bad-omega.toml").to_str().unwrap(),
        "--suite",
        "functors",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL broken/omega-compatibility"));
}

#[test]
fn structured_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let f = fixture("u1.toml");
    let run = || {
        let o = ccj(&[
            "verify",
            f.to_str().unwrap(),
            "--suite",
            "j01",
            "--format",
            "structured",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c["elapsed_ms"] = 0.into();
        }
        v
    };
    let a = run();
    assert_eq!(a["format"], "ccj-report/1");
    assert_eq!(a["fixture"], "U1");
    assert!(a["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
    assert_eq!(a, run());
}

#[test]
fn text_and_structured_agree() {
    let f = fixture("bad-omega.toml");
    let t = ccj(&["verify", f.to_str().unwrap(), "--suite", "functors"]);
    let j = ccj(&[
        "verify",
        f.to_str().unwrap(),
        "--suite",
        "functors",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    let text = stdout(&t);
    for c in v["checks"].as_array().unwrap() {
        let tag = match c["status"].as_str().unwrap() {
            "pass" => "PASS",
            "fail" => "FAIL",
            _ => "SKIP",
        };
        let id = c["id"].as_str().unwrap();
        assert!(text.contains(&format!("{tag} {id} ")), "{tag} {id}");
    }
}

#[test]
fn error_exit_codes() {
    let o = ccj(&["verify", "/nonexistent/fixture.toml"]);
    assert_eq!(code(&o), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "format = \"ccj-fixture/1\"\nname = [\n").unwrap();
    let o = ccj(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));

    let o = ccj(&["construct", fixture("empty.toml").to_str().unwrap(), "cc"]);
    assert_eq!(code(&o), 2);

    let o = ccj(&[
        "verify",
        fixture("u3.toml").to_str().unwrap(),
        "--suite",
        "csystem",
        "--bound",
        "9",
    ]);
    assert_eq!(code(&o), 3);

    let o = ccj(&[
        "verify",
        fixture("u3.toml").to_str().unwrap(),
        "--suite",
        "nope",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn construct_outputs() {
    let o = ccj(&[
        "construct",
        fixture("u1.toml").to_str().unwrap(),
        "cc",
        "--bound",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("# ccj-construct/1 cc\n# construction: cc-of-universe\n"));
    assert!(s.contains("[objects by length]\n0: 1\n1: 2\n2: 4\n3: 8\n"));

    let f = fixture("u3.toml");
    let o = ccj(&["construct", f.to_str().unwrap(), "j-cc"]);
    assert_eq!(code(&o), 0);
    let line = "T=[()↦2] P=[()↦2 | (el(2,0))↦2 (el(2,1))↦2 | (el(2,0),el(2,0))↦1 (el(2,0),el(2,1))↦0 (el(2,1),el(2,0))↦0 (el(2,1),el(2,1))↦1 | (el(2,0),el(2,0),el(1,0))↦2 (el(2,1),el(2,1),el(1,0))↦1] s0={(el(2,0))↦(el(2,0),el(2,0)) (el(2,1))↦(el(2,1),el(1,0))} ↦ J={(el(2,0),el(2,0),el(1,0))↦(el(2,0),el(2,0),el(1,0),el(2,0)) (el(2,1),el(2,1),el(1,0))↦(el(2,1),el(2,1),el(1,0),el(1,0))}";
    assert!(stdout(&o).lines().any(|l| l == line));

    let skewed = ccj(&["construct", f.to_str().unwrap(), "j-cc", "--skew", "5"]);
    let body = |o: &Output| stdout(o).lines().skip(3).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&o), body(&skewed));

    for t in ["j-universe", "derive-j", "h-of"] {
        let o = ccj(&[
            "construct",
            f.to_str().unwrap(),
            t,
            "--format",
            "structured",
        ]);
        assert_eq!(code(&o), 0, "{t}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["target"], t);
    }
}
