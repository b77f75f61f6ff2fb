use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bridgelab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn generate(m: &str, n: &str) -> Vec<u8> {
    let out = run(&["generate", "--m", m, "--n", n], b"");
    assert!(out.status.success());
    out.stdout
}

#[test]
fn bound_prints_the_formula() {
    let out = run(&["bound", "--m", "4", "--n", "5"], b"");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "3\n");
}

#[test]
fn bad_parameters_exit_two() {
    assert_eq!(run(&["bound", "--m", "4", "--n", "4"], b"").status.code(), Some(2));
    assert_eq!(run(&["generate", "--m", "5", "--n", "4"], b"").status.code(), Some(2));
    assert_eq!(run(&["check"], b"not json").status.code(), Some(2));
}

#[test]
fn file_and_pipe_agree() {
    let dir = std::env::temp_dir().join(format!("bridgelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("l45.json");
    let out = run(&["generate", "--m", "4", "--n", "5", "--out", path.to_str().unwrap()], b"");
    assert!(out.status.success());
    let from_file = run(&["check", path.to_str().unwrap()], b"");
    let from_pipe = run(&["check"], &generate("4", "5"));
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_pipe.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn emit_cert_passes_the_presentation_through() {
    let dir = std::env::temp_dir().join(format!("bridgelab-cert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("cert.json");
    let p = generate("4", "5");
    let out = run(&["check", "--emit-cert", cert.to_str().unwrap()], &p);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, p);
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"condition_holds\": true"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn perturbed_presentation_fails_the_check() {
    let p = run(&["perturb", "--bridge", "1"], &generate("4", "5"));
    assert!(p.status.success());
    assert_eq!(run(&["check"], &p.stdout).status.code(), Some(1));
}

#[test]
fn render_writes_svg() {
    let p = generate("4", "5");
    for args in [&["render"][..], &["render", "--level", "2"][..]] {
        let out = run(args, &p);
        assert!(out.status.success());
        assert!(out.stdout.starts_with(b"<svg"));
    }
}
