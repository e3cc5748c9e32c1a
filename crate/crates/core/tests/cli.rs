use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ising-forge"));
    c.env_remove("ISING_FORGE_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn rydberg_k56_ratio() {
    let out = run(&["rydberg", "--c6", "40.43", "60.81", "100.80", "--r", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((ratio - 0.0029).abs() < 5e-5, "{ratio}");
    for key in ["J_pm", "J_pp", "phase"] {
        assert!(v[key].is_number(), "{key}");
    }
}

#[test]
fn rydberg_json_input_matches_flags() {
    let path = tmp("pair.json");
    std::fs::write(&path, r#"{"C6_nn": 40.43, "C6_tt": 60.81, "C6_nt": 100.80, "R_um": 1.0}"#).unwrap();
    let a = run(&["rydberg", "--in", path.to_str().unwrap()]);
    let b = run(&["rydberg", "--c6", "40.43", "60.81", "100.80", "--r", "1.0"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn transmute_writes_a_readable_ising_file() {
    let out_path = tmp("potts.json");
    let input = models().join("heisenberg_chain3.json");
    let out = run(&["transmute", "--in", input.to_str().unwrap(), "--path", "four-state", "--phi", "0.7854", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    match ising_forge::model_io::from_str(&text).unwrap() {
        ising_forge::model_io::ModelFile::Ising(m) => assert_eq!(m.site_dim, 4),
        other => panic!("expected an Ising model, got {other:?}"),
    }
}

#[test]
fn phase_diagram_has_chiral_centre_and_is_deterministic() {
    let a = run(&["--jobs", "1", "kitaev-phasediag", "--lambda", "2.31", "--res", "60"]);
    let b = run(&["--jobs", "3", "kitaev-phasediag", "--lambda", "2.31", "--res", "60"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let third = ising_forge::ed::fmt12(20.0 / 60.0);
    let centre = text.lines().find(|l| l.starts_with(&format!("{third},{third},{third},"))).expect("centre row");
    assert!(centre.ends_with(",Chiral"), "{centre}");
    assert_eq!(text.lines().count(), 1 + 61 * 62 / 2);
}

#[test]
fn env_var_sets_default_jobs() {
    let out = bin().env("ISING_FORGE_JOBS", "2").args(["spt2", "--lambdas", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = bin().env("ISING_FORGE_JOBS", "many").args(["spt2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bh-verify", "--version", "sideways"]).status.code(), Some(2));
    assert_eq!(run(&["kitaev-phasediag", "--lambda", "1", "--res", "1"]).status.code(), Some(2));
    let bad = tmp("bad_model.json");
    std::fs::write(&bad, r#"{"lattice": {"geometry": "chain", "L": 2}, "terms": [{"coeff": [1, 0], "factors": [{"site": 5, "op": "x"}]}]}"#).unwrap();
    let out = run(&["transmute", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    // The hopping version misses the 5% bound at ratio 10; the check says so.
    assert_eq!(run(&["bh-verify", "--version", "hopping", "--ratios", "10,100", "--check"]).status.code(), Some(1));
    assert_eq!(run(&["bh-verify", "--check"]).status.code(), Some(0));
}

#[test]
fn convergence_check_passes_for_bundled_models() {
    for (file, path) in [("heisenberg_chain3.json", "four-state"), ("xy_chain3.json", "three-state")] {
        let input = models().join(file);
        let out = run(&["ed-converge", "--in", input.to_str().unwrap(), "--path", path, "--check"]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn potts_commands() {
    let out = run(&["potts-eff", "--j", "1", "--lambda", "10"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["J_eff"].as_f64().unwrap() - (1.0 - 1.0 / 60.0)).abs() < 1e-11);
    assert!((v["threshold_lambda"].as_f64().unwrap() - 3.046).abs() < 1e-3);
    assert_eq!(run(&["potts-validate", "--check"]).status.code(), Some(0));
    assert_eq!(run(&["potts-eff", "--j", "1", "--lambda", "0"]).status.code(), Some(2));
}

#[test]
fn verify_algebra_passes() {
    let out = run(&["verify-algebra", "--seed", "99", "--count", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
}
