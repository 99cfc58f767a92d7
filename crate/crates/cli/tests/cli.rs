use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_fluxknit");

fn fluxknit(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("FLUXKNIT_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const RANDOM: &str = "chain 3\nsq all-data H\nsweep ltr\nmeasure d1 z\nmeasure d2 x\nmeasure s1 z\ndump\n";

#[test]
fn run_is_byte_identical_across_invocations() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.fknit", RANDOM);
    let a = fluxknit(&["run", &f, "--seed", "42", "--dump"]);
    let b = fluxknit(&["run", &f, "--seed", "42", "--dump"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["format"], 1);
    assert_eq!(v["seed"], 42);
    assert!(v.get("wall_time_s").is_none());
    assert!(v["final_amplitudes"].is_array());
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.fknit", RANDOM);
    let env = Command::new(BIN).args(["run", &f]).env("FLUXKNIT_SEED", "9").output().unwrap();
    let flag = fluxknit(&["run", &f, "--seed", "9"]);
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(env.stdout, flag.stdout);
}

#[test]
fn timing_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.fknit", RANDOM);
    let o = fluxknit(&["run", &f, "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn parse_error_exits_one_with_location() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.fknit", "chain 2\nsq d9 X\n");
    let o = fluxknit(&["run", &f]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("undeclared qubit d9"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_file_and_bad_usage_exit_one() {
    assert_eq!(fluxknit(&["run", "/nonexistent/x.fknit"]).status.code(), Some(1));
    assert_eq!(fluxknit(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fluxknit(&["qec-sweep", "--p", "1.5", "--trials", "10"]).status.code(), Some(1));
}

#[test]
fn verify_passes_and_detects_corruption() {
    let ok = fluxknit(&["verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let json = fluxknit(&["verify", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["all_passed"], true);

    let bad = fluxknit(&["verify", "--corrupt", "u0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("jps_factorization"), "{}", stderr(&bad));
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn sweep_is_deterministic_in_both_formats() {
    let args = ["qec-sweep", "--p", "0,0.1,1", "--trials", "2000", "--seed", "3"];
    let a = fluxknit(&args);
    let b = fluxknit(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][2], "0");
    assert_eq!(rows[2][2], "2000");

    let mut json_args = args.to_vec();
    json_args.extend(["--out", "json"]);
    let j1 = fluxknit(&json_args);
    assert_eq!(j1.stdout, fluxknit(&json_args).stdout);
    let v: serde_json::Value = serde_json::from_slice(&j1.stdout).unwrap();
    assert_eq!(v["format"], 1);
    assert_eq!(v["rows"][0]["failures"], 0);
    assert_eq!(v["rows"][2]["estimate"], 1.0);
}

#[test]
fn compiled_program_reparses_and_runs() {
    let dir = TempDir::new().unwrap();
    let decl = write(&dir, "decl.fknit", "chain 4\n");
    let o = fluxknit(&[
        "compile", &decl, "--control", "d1", "--target", "d4", "--unitary", "0.3 -1.2 0.9 2.0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with('#'));
    assert!(text.contains("sweep"));
    let compiled = write(&dir, "out.fknit", &text);
    let run = fluxknit(&["run", &compiled]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
}

#[test]
fn compile_rejects_bad_angles() {
    let dir = TempDir::new().unwrap();
    let decl = write(&dir, "decl.fknit", "chain 3\n");
    let o = fluxknit(&["compile", &decl, "--control", "d1", "--target", "d2", "--unitary", "1 2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn qec_cycle_corrects_a_single_flip() {
    let o = fluxknit(&["qec-cycle", "--flips", "d2", "--amp0", "(0.6,0)", "--amp1", "(0,0.8)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["format"], 1);
    assert!((v["fidelity_after"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["decoded"], "d_i+1");
}

#[test]
fn corpus_samples_run_through_the_binary() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus");
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let o = fluxknit(&["run", p.to_str().unwrap(), "--seed", "1"]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", p.display(), stderr(&o));
    }
}
