//! The `btt` binary end to end: exit codes, reports and pipelines.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use btt::format::print;
use btt::gallery;
use serde_json::Value;

fn btt(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_btt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("btt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn document(name: &str) -> String {
    print(&gallery::by_name(name).unwrap().document)
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("report is JSON: {e}"))
}

#[test]
fn gallery_pipes_into_verify() {
    let listed = btt(&["gallery"], None);
    assert_eq!(code(&listed), 0);
    let names = String::from_utf8(listed.stdout).unwrap();
    for name in gallery::NAMES {
        assert!(names.contains(name));
    }
    let doc = btt(&["gallery", "heisenberg"], None);
    assert_eq!(code(&doc), 0);
    let text = String::from_utf8(doc.stdout).unwrap();
    let verified = btt(&["verify", "-"], Some(&text));
    assert_eq!(code(&verified), 0, "{}", String::from_utf8_lossy(&verified.stderr));
    let r = report(&verified);
    assert_eq!(r["command"], "verify");
    assert_eq!(r["holds"], true);
    assert_eq!(r["tool"]["name"], "btt");
    assert_eq!(r["input_sha256"].as_str().unwrap(), btt::report::digest(text.as_bytes()));
}

#[test]
fn exit_codes_follow_the_verdicts() {
    let cases: &[(&str, &[&str], i32)] = &[
        ("heisenberg", &["verify"], 0),
        ("heisenberg", &["degeneration"], 1),
        ("heisenberg", &["ddlemma"], 1),
        ("square_bicomplex", &["degeneration"], 0),
        ("square_bicomplex", &["quasiabelian"], 0),
        ("delta_only", &["degeneration"], 1),
        ("abelian_torus", &["deform", "--class", "1,0,0,0,0,0", "--order", "8", "--method", "tt"], 0),
        ("obstructed_dglie", &["deform", "--class", "0,1,0", "--order", "4"], 1),
        ("obstructed_dglie", &["charp", "--p", "5"], 1),
        ("heisenberg", &["transfer", "--arity", "3"], 0),
        ("heisenberg_hierarchy", &["verify"], 0),
        ("heisenberg_hierarchy", &["degeneration"], 2),
    ];
    for (name, args, expected) in cases {
        let path = temp_file(&format!("{name}.btt"), &document(name));
        let mut full: Vec<&str> = vec![args[0], path.to_str().unwrap()];
        full.extend_from_slice(&args[1..]);
        let o = btt(&full, None);
        assert_eq!(code(&o), *expected, "{name} {args:?}: {}", String::from_utf8_lossy(&o.stderr));
        if *expected == 1 {
            let r = report(&o);
            assert_eq!(r["holds"], false);
            assert!(String::from_utf8_lossy(&o.stderr).contains("property fails"));
        }
    }
}

#[test]
fn deformation_report_carries_the_series() {
    let path = temp_file("torus.btt", &document("abelian_torus"));
    let o = btt(&["deform", path.to_str().unwrap(), "--class", "1,0,0,0,0,0", "--method", "tt"], None);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    let series = r["certificates"]["series"].as_array().unwrap();
    assert_eq!(series.len(), 8);
    assert_eq!(series[0]["element"], "e1 e2");
    assert_eq!(r["certificates"]["fallback"], false);
}

#[test]
fn corrupted_inputs_exit_two() {
    let heis = document("heisenberg");
    let corrupted = [
        heis.replacen("d e3 = e1 e2", "d e3 = e1 $ e2", 1),
        heis.replacen("d e3 = e1 e2", "d e9 = e1 e2", 1),
        heis.replacen("d e3 = e1 e2", "d e3 = e1", 1),
        heis.replacen("field Q", "feld Q", 1),
        String::new(),
    ];
    for text in &corrupted {
        let o = btt(&["verify", "-"], Some(text));
        assert_eq!(code(&o), 2, "{text}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn mutated_structure_exits_one() {
    let text = document("square_bicomplex").replacen("a -> c ;", "a -> 2 c ;", 1);
    let o = btt(&["verify", "-"], Some(&text));
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_two() {
    let heis = temp_file("usage.btt", &document("heisenberg"));
    let h = heis.to_str().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["verify"],
        vec!["transfer", h, "--arity", "7"],
        vec!["charp", h],
        vec!["deform", h, "--method", "magic"],
        vec!["verify", "/nonexistent/input.btt"],
        vec!["gallery", "no_such_entry"],
    ] {
        assert_eq!(code(&btt(&args, None)), 2, "{args:?}");
    }
}

#[test]
fn reports_are_deterministic_and_written_to_out() {
    let path = temp_file("det.btt", &document("square_bicomplex"));
    let p = path.to_str().unwrap();
    for cmd in ["verify", "degeneration", "quasiabelian"] {
        let a = btt(&[cmd, p], None);
        let b = btt(&[cmd, p], None);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let out = path.with_extension(format!("{cmd}.json"));
        let c = btt(&[cmd, p, "--out", out.to_str().unwrap()], None);
        assert_eq!(code(&c), 0);
        assert_eq!(std::fs::read(&out).unwrap(), a.stdout, "{cmd}");
    }
}

#[test]
fn gallery_replay_reports_every_claim() {
    for name in gallery::NAMES {
        let o = btt(&["gallery", name, "--replay"], None);
        assert_eq!(code(&o), 0, "{name}");
        let r = report(&o);
        let n = gallery::by_name(name).unwrap().manifest.len();
        assert_eq!(r["verdicts"].as_array().unwrap().len(), n, "{name}");
    }
}

#[test]
fn truncation_override_keeps_verdicts() {
    let path = temp_file("maxu.btt", &document("square_bicomplex"));
    for value in ["0", "40", "not-a-number"] {
        let o = Command::new(env!("CARGO_BIN_EXE_btt"))
            .args(["degeneration", path.to_str().unwrap()])
            .env(btt::degeneration::MAX_U_ENV, value)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "BTT_MAX_U={value}");
    }
}
