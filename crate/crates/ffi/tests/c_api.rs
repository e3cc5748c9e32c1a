use std::ffi::{c_char, c_int, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ising_forge_ffi::*;

const HEISENBERG_DIMER: &str = r#"{"lattice": {"geometry": "chain", "L": 2, "boundary": "open"},
  "terms": [
    {"coeff": [0.25, 0], "factors": [{"site": 0, "op": "x"}, {"site": 1, "op": "x"}]},
    {"coeff": [0.25, 0], "factors": [{"site": 0, "op": "y"}, {"site": 1, "op": "y"}]},
    {"coeff": [0.25, 0], "factors": [{"site": 0, "op": "z"}, {"site": 1, "op": "z"}]}]}"#;

fn load(json: &str) -> *mut IfModel {
    let text = CString::new(json).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { if_model_from_json(text.as_ptr(), &mut m) }, IfStatus::Ok);
    m
}

#[test]
fn model_lifecycle_and_projection() {
    let q = load(HEISENBERG_DIMER);
    assert_eq!(unsafe { if_model_site_dim(q) }, 2);
    let mut ising = ptr::null_mut();
    assert_eq!(unsafe { if_transmute(q, IfPath::FourState, 0.3, f64::NAN, &mut ising) }, IfStatus::Ok);
    assert_eq!(unsafe { if_model_site_dim(ising) }, 4);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { if_effective_model(ising, &mut back) }, IfStatus::Ok);
    // Singlet-triplet levels of J/4 (xx + yy + zz) with J = 1.
    let mut levels = [0.0; 4];
    assert_eq!(unsafe { if_model_lowest_levels(back, 4, levels.as_mut_ptr()) }, IfStatus::Ok);
    for (got, want) in levels.iter().zip([-0.75, 0.25, 0.25, 0.25]) {
        assert!((got - want).abs() < 1e-12, "{levels:?}");
    }
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { if_model_to_json(back, &mut json) }, IfStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"terms\""));
    unsafe {
        if_string_free(json);
        if_model_free(back);
        if_model_free(ising);
        if_model_free(q);
        if_model_free(ptr::null_mut());
        if_string_free(ptr::null_mut());
    }
}

#[test]
fn unset_field_strength_blocks_ed() {
    let q = load(HEISENBERG_DIMER);
    let mut ising = ptr::null_mut();
    assert_eq!(unsafe { if_transmute(q, IfPath::FourState, 0.0, f64::NAN, &mut ising) }, IfStatus::Ok);
    let mut levels = [0.0; 2];
    assert_ne!(unsafe { if_model_lowest_levels(ising, 2, levels.as_mut_ptr()) }, IfStatus::Ok);
    let mut with_field = ptr::null_mut();
    assert_eq!(unsafe { if_transmute(q, IfPath::FourState, 0.0, 50.0, &mut with_field) }, IfStatus::Ok);
    assert_eq!(unsafe { if_model_lowest_levels(with_field, 2, levels.as_mut_ptr()) }, IfStatus::Ok);
    unsafe {
        if_model_free(with_field);
        if_model_free(ising);
        if_model_free(q);
    }
}

#[test]
fn wrong_kind_and_bad_json() {
    let q = load(HEISENBERG_DIMER);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { if_effective_model(q, &mut out) }, IfStatus::InvalidArgument);
    let bad = CString::new(r#"{"lattice": 3}"#).unwrap();
    assert_eq!(unsafe { if_model_from_json(bad.as_ptr(), &mut out) }, IfStatus::Schema);
    assert!(out.is_null());
    let mut buf = [0 as c_char; 128];
    let n = unsafe { if_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    assert_eq!(unsafe { if_model_from_json(ptr::null(), &mut out) }, IfStatus::NullPointer);
    unsafe { if_model_free(q) };
}

#[test]
fn physics_entry_points() {
    let mut g = 0.0;
    let l = 1.0 / 3f64.sqrt();
    assert_eq!(unsafe { if_kitaev_gap(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, l, 201, &mut g) }, IfStatus::Ok);
    assert!(g <= 1e-6);
    let mut ch: c_int = 0;
    assert_eq!(unsafe { if_kitaev_chern(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, l, 61, &mut ch) }, IfStatus::Numeric);
    assert_eq!(unsafe { if_kitaev_chern(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0, 40, &mut ch) }, IfStatus::Ok);
    assert_eq!(ch.rem_euclid(2), 1);
    let mut k = IfSpinCouplings::default();
    assert_eq!(unsafe { if_rydberg_couplings(40.43, 60.81, 100.80, 1.0, &mut k) }, IfStatus::Ok);
    assert!(k.ratio < 0.003);
    assert_eq!(unsafe { if_rydberg_couplings(1.0, 1.0, 1.0, -1.0, &mut k) }, IfStatus::InvalidArgument);
}

#[test]
fn selftest_through_the_abi() {
    assert_eq!(if_selftest_count(), 11);
    let mut passed: c_int = -1;
    for id in [1, 2, 11] {
        assert_eq!(unsafe { if_selftest_run(id, &mut passed) }, IfStatus::Ok);
        assert_eq!(passed, 1, "criterion {id}");
    }
    assert_eq!(unsafe { if_selftest_run(0, &mut passed) }, IfStatus::InvalidArgument);
}

#[test]
fn errors_are_per_thread() {
    let mut g = 0.0;
    assert_eq!(unsafe { if_kitaev_gap(1.0, 1.0, 1.0, 1.0, 1, &mut g) }, IfStatus::InvalidArgument);
    let other = std::thread::spawn(|| unsafe { if_last_error_message(ptr::null_mut(), 0) }).join().unwrap();
    assert_eq!(other, 0);
    assert!(unsafe { if_last_error_message(ptr::null_mut(), 0) } > 0);
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("ising_forge.h")
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "if_version",
        "if_last_error_message",
        "if_model_from_json",
        "if_model_to_json",
        "if_model_free",
        "if_string_free",
        "if_transmute",
        "if_effective_model",
        "if_model_lowest_levels",
        "if_kitaev_gap",
        "if_kitaev_chern",
        "if_rydberg_couplings",
        "if_potts_effective",
        "if_selftest_run",
        "typedef struct IfModel IfModel;",
        "IF_STATUS_NULL_POINTER = 1",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

fn static_lib() -> Option<PathBuf> {
    let deps = std::env::current_exe().ok()?.parent()?.to_path_buf();
    for dir in [deps.clone(), deps.parent()?.to_path_buf()] {
        let p = dir.join("libising_forge_ffi.a");
        if p.exists() {
            return Some(p);
        }
    }
    None
}

/// Compile and run a C client when a C compiler and the static archive are
/// available; otherwise report the skip.
#[test]
fn c_client_links_and_runs() {
    let Some(lib) = static_lib() else {
        eprintln!("skipping: static archive not found next to the test binary");
        return;
    };
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler `{cc}`");
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <math.h>
#include "ising_forge.h"
int main(void) {
    IfSpinCouplings k;
    if (if_rydberg_couplings(40.43, 60.81, 100.80, 1.0, &k) != IF_STATUS_OK) return 10;
    if (!(k.ratio < 0.003)) return 11;
    double gap = -1.0;
    if (if_kitaev_gap(1.0, 1.0, 1.0, 1.0, 0, &gap) != IF_STATUS_INVALID_ARGUMENT) return 12;
    char msg[128];
    if (if_last_error_message(msg, sizeof msg) == 0) return 13;
    IfModel *m = NULL;
    if (if_model_from_json("{\"lattice\": {\"geometry\": \"custom\", \"nsites\": 1, \"bonds\": []}, \"terms\": [{\"coeff\": [1, 0], \"factors\": [{\"site\": 0, \"op\": \"z\"}]}]}", &m) != IF_STATUS_OK) {
        if_last_error_message(msg, sizeof msg);
        printf("%s\n", msg);
        return 14;
    }
    double levels[2];
    if (if_model_lowest_levels(m, 2, levels) != IF_STATUS_OK) return 15;
    if_model_free(m);
    if (fabs(levels[0] + 1.0) > 1e-12 || fabs(levels[1] - 1.0) > 1e-12) return 16;
    printf("ok %s\n", if_version());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("client");
    let status =
        Command::new(&cc).arg(&src).arg("-I").arg(header().parent().unwrap()).arg(&lib).args(["-lpthread", "-ldl", "-lm", "-o"]).arg(&exe).status().unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
