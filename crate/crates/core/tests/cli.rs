use std::path::Path;
use std::process::{Command, Output};

use desusp::report::{Report, Status, Verdict, Witness};

fn desusp(args: &[&str], env_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_desusp"));
    cmd.args(args).env_remove("DESUSP_OUTPUT_DIR");
    if let Some(dir) = env_dir {
        cmd.env("DESUSP_OUTPUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn hilbert_all_places() {
    let o = desusp(&["hilbert", "--a", "2", "--b", "3", "--all"], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(2, 3)_3 = -1"), "{out}");
    assert!(out.contains("(2, 3)_2 = -1"), "{out}");
    assert!(out.contains("(2, 3)_inf = 1"), "{out}");
}

#[test]
fn hilbert_single_place_and_rationals() {
    let o = desusp(&["hilbert", "--a", "-1", "--b", "-1", "--place", "inf"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(-1, -1)_inf = -1"));
    let o = desusp(&["hilbert", "--a", "2/9", "--b", "3", "--place", "3"], None);
    assert!(stdout(&o).contains("= -1"), "{}", stdout(&o));
}

#[test]
fn lcs_ranks_printed() {
    let o = desusp(&["verify", "lcs-ranks"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ranks: 2, 1, 2"));
}

#[test]
fn bad_flags_exit_two_with_usage() {
    for args in [
        &["verify", "extension", "--class", "4"][..],
        &["--N", "70", "obstruct"],
        &["frobnicate"],
        &["hilbert", "--a", "2"],
        &["hilbert", "--a", "0", "--b", "3", "--all"],
    ] {
        let o = desusp(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty());
        assert!(stdout(&o).is_empty(), "{args:?} wrote to stdout");
    }
    assert!(stderr(&desusp(&["--N", "70", "obstruct"], None)).contains("Usage"));
}

#[test]
fn failing_check_exits_one_and_names_it() {
    // with primes up to 2 only, the class of 2 has no partner
    let o = desusp(&["obstruct", "--bound", "2", "--samples", "2"], None);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("failing check: step 3"), "{err}");
}

#[test]
fn json_stream_is_pure_json_and_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/lcs.json");
    let o = desusp(&["verify", "lcs-ranks", "--json", "--output", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let from_stdout = Report::from_json(&stdout(&o)).expect("stdout is a report");
    let from_file = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(from_stdout, from_file);
    // text mode keeps JSON out of stdout
    let o = desusp(&["verify", "lcs-ranks", "--output", path.to_str().unwrap()], None);
    assert!(!stdout(&o).contains('{'));
}

#[test]
fn report_schema() {
    let o = desusp(&["hilbert", "--a", "2", "--b", "3", "--all", "--json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let obj = v.as_object().unwrap();
    for key in ["command", "parameters", "checks", "elapsed_ms"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    for check in v["checks"].as_array().unwrap() {
        assert!(matches!(check["status"].as_str(), Some("pass" | "fail")));
        assert!(check["name"].is_string() && check["anchor"].is_string());
    }
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = desusp(&["verify", "lcs-ranks"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(0));
    let written = dir.path().join("verify-lcs-ranks.json");
    assert!(written.exists());
    // an explicit --output wins
    let explicit = dir.path().join("explicit.json");
    desusp(&["verify", "lcs-ranks", "--output", explicit.to_str().unwrap()], Some(dir.path()));
    assert!(explicit.exists());
}

#[test]
fn obstruct_json_deterministic_apart_from_timing() {
    let run = || {
        let o = desusp(&["obstruct", "--json", "--seed", "7", "--samples", "4"], None);
        assert_eq!(o.status.code(), Some(0));
        let mut r = Report::from_json(&stdout(&o)).unwrap();
        assert_eq!(r.verdict, Some(Verdict::Contradiction));
        r.elapsed_ms = 0;
        r.to_json()
    };
    assert_eq!(run(), run());
}

#[test]
fn tampered_report_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("obstruct.json");
    let o = desusp(&["obstruct", "--samples", "2", "--output", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let good = desusp(&["report", "--check", path.to_str().unwrap()], None);
    assert_eq!(good.status.code(), Some(0), "{}", stderr(&good));

    let mut report = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for check in report.checks.iter_mut() {
        if let Some(Witness::Pairing { partner, .. }) = &mut check.witness {
            // 2 is a norm from Q(sqrt(-1)): every symbol (2, -1) is trivial
            *partner = desusp::arithmetic::SquareClass::new(-1, 1).unwrap();
        }
    }
    std::fs::write(&path, report.to_json()).unwrap();
    let bad = desusp(&["report", "--check", path.to_str().unwrap()], None);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).starts_with("failing check:"));

    let mut failed = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    failed.checks.truncate(1);
    failed.checks[0].status = Status::Fail;
    failed.verdict = None;
    std::fs::write(&path, failed.to_json()).unwrap();
    assert_eq!(desusp(&["report", "--check", path.to_str().unwrap()], None).status.code(), Some(1));

    std::fs::write(&path, "not json").unwrap();
    assert_eq!(desusp(&["report", "--check", path.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn custom_model_flags() {
    let o = desusp(&["verify", "extension", "--class", "2", "--N", "144", "--cyclic-order", "4"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("N=144 n=3 H=<35> |H|=4"));
    let o = desusp(&["verify", "theta3", "--generator", "5"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = desusp(&["verify", "extension", "--class", "2", "--cyclic-order", "4"], None);
    assert_eq!(o.status.code(), Some(2), "no element of order 4 mod 72");
}
