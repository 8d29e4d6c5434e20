use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sasakian"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_prints_normal_form() {
    let out = run(&["classify", "--rank", "2", "--torsion", "3^2", "--i", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("NORMAL_FORM: M_{0;3;2}"), "{text}");
}

#[test]
fn decide_yes_exits_zero() {
    let out = run(&["decide", "--rank", "1", "--torsion", "5^4", "--i", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("VERDICT: yes"));
}

#[test]
fn decide_no_exits_zero_with_obstruction() {
    let out = run(&["decide", "--rank", "0", "--torsion", "2^1", "--i", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("VERDICT: no"));
    assert!(text.contains("OBSTRUCTION:"));
}

#[test]
fn decide_unknown_exits_two() {
    let out = run(&["decide", "--rank", "0", "--torsion", "3^2", "--i", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("VERDICT: unknown"));
}

#[test]
fn bad_input_exits_one() {
    let out = run(&["decide", "--rank", "1", "--torsion", "banana", "--i", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn construct_then_verify_round_trips() {
    let dir = std::env::temp_dir().join(format!("sasakian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.txt");

    let out = run(&[
        "construct",
        "--rank",
        "1",
        "--torsion",
        "3^2,5^4",
        "--i",
        "inf",
        "--emit",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("surface:"));

    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("VALID: true"), "{text}");
    assert!(text.contains("RANK: 1"), "{text}");
    assert!(text.contains("TORSION: 3^2,5^4"), "{text}");
    assert!(text.contains("SPIN: false"), "{text}");
    assert!(text.contains("SIMPLY_CONNECTED: true"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn emit_respects_output_dir_env() {
    let dir = std::env::temp_dir().join(format!("sasakian-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sasakian"))
        .args(["regular", "--rank", "2", "--emit", "reg.txt"])
        .env("SASAKIAN_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("reg.txt").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_reports_parse_error_with_line() {
    let dir = std::env::temp_dir().join(format!("sasakian-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "surface: CP2\nbasis: H\nbclass: x y\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn negative_decision() {
    let out = run(&["negative", "--torsion", "7^6,11^2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("POSITIVE_TABLE_MEMBER: false"));
    assert!(text.contains("VERDICT: yes"));

    let out = run(&["negative", "--torsion", "5^2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("POSITIVE_TABLE_MEMBER: true"));
}

#[test]
fn kcontact_branches() {
    let out = run(&["kcontact", "--torsion", "3^2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("NECESSARY_CONDITION: fail"), "{text}");

    let out = run(&["kcontact", "--torsion", "5^2"]);
    assert!(stdout(&out).contains("NECESSARY_CONDITION: pass"));
}

#[test]
fn regular_prints_name_and_certificate() {
    let out = run(&["regular", "--rank", "3", "--non-spin"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("NORMAL_FORM: M_{inf;;2}"), "{text}");
    assert!(text.contains("surface: BlowUp(3)"), "{text}");
}

#[test]
fn atlas_small_sweep() {
    let out = run(&["atlas", "--max-order", "7", "--max-count", "4", "--max-parts", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("ATLAS: 5^2 semiregular=yes"), "{text}");
    assert!(text.contains("ATLAS: 3^2 semiregular=no"), "{text}");
    assert!(text.contains("SUMMARY:"), "{text}");
}

#[test]
fn check_reports_clauses() {
    let out = run(&["check", "--rank", "0", "--torsion", "3^2", "--i", "0"]);
    let text = stdout(&out);
    assert!(text.contains("GK: pass"), "{text}");
    assert!(text.contains("KOLLAR: pass"), "{text}");
    assert!(text.contains("TSTAR: fail"), "{text}");
}
