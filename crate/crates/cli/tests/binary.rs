use std::path::PathBuf;
use std::process::Command;

fn qcond() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcond"))
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcond-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn passing_script_exits_zero_and_writes_summary() {
    let script = scratch("ok.qc", "vars t x; dep u; eq heat: u_t = u_xx; op G: t*dx - 1/2*x*u*du; check-lie heat G;");
    let summary = script.with_extension("jsonl");
    let out = qcond().arg(&script).arg("--emit-summary").arg(&summary).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[001] check-lie heat G: PASS"), "{text}");
    let rec: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&summary).unwrap().trim()).unwrap();
    assert_eq!(rec["status"], "pass");
    assert_eq!(rec["residuals"][0], "0");
}

#[test]
fn failing_check_exits_one() {
    let script = scratch("fail.qc", "vars t x; dep u; eq heat: u_t = u_xx; op Q: x*dt; check-lie heat Q;");
    let out = qcond().arg(&script).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_error_exits_two_with_position() {
    let script = scratch("bad.qc", "vars t x;\ndep u;\neq heat: u_t = w;");
    let out = qcond().arg(&script).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("3:16: undeclared symbol"), "{err}");
}

#[test]
fn print_is_canonical() {
    let script = scratch("p.qc", "vars t x; dep u; op G: t*dx - (1/2)*x*u*du;");
    let out = qcond().arg("--print").arg(&script).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "vars t x;\ndep u;\nop G: t*dx - 1/2*x*u*du;\n");
}

#[test]
fn casebook_flag_and_seed_are_reproducible() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/casebook/casebook.qc");
    let a = qcond().args(["--casebook", path, "--seed", "11"]).output().unwrap();
    let b = qcond().args(["--casebook", path, "--seed", "11", "--parallel"]).output().unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}
