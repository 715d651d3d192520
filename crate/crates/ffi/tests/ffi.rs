use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use braidosc_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(braidosc_last_error()) }.to_string_lossy().into_owned()
}

fn build(
    gammas: &[f64],
    cs: &[f64],
    total: u32,
    q: f64,
    backend: u32,
    route: u32,
    inverse: bool,
) -> (i32, *mut BraidoscMatrices) {
    let mut out = ptr::null_mut();
    let rc = unsafe {
        braidosc_matrices_build(
            gammas.len(),
            total,
            gammas.as_ptr(),
            cs.as_ptr(),
            q,
            backend,
            route,
            i32::from(inverse),
            0,
            &mut out,
        )
    };
    (rc, out)
}

fn entries(m: *const BraidoscMatrices, index: usize) -> Vec<f64> {
    let (mut dim, mut gens) = (0, 0);
    assert_eq!(unsafe { braidosc_matrices_shape(m, &mut dim, &mut gens) }, BRAIDOSC_OK);
    let mut buf = vec![0.0; dim * dim];
    assert_eq!(unsafe { braidosc_matrices_entries(m, index, buf.as_mut_ptr(), buf.len()) }, BRAIDOSC_OK);
    buf
}

fn matmul(a: &[f64], b: &[f64], d: usize) -> Vec<f64> {
    let mut c = vec![0.0; d * d];
    for i in 0..d {
        for k in 0..d {
            for j in 0..d {
                c[i * d + j] += a[i * d + k] * b[k * d + j];
            }
        }
    }
    c
}

#[test]
fn counts_match_binomials() {
    let (mut w, mut l) = (0u64, 0u64);
    assert_eq!(unsafe { braidosc_counts(3, 3, &mut w, &mut l) }, BRAIDOSC_OK);
    assert_eq!((w, l), (10, 4));
    assert_eq!(unsafe { braidosc_counts(1, 3, &mut w, &mut l) }, BRAIDOSC_ERR_INVALID);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { braidosc_counts(3, 3, ptr::null_mut(), &mut l) }, BRAIDOSC_ERR_NULL);
}

#[test]
fn numeric_family_and_inverse() {
    let g = [1.1, 1.1, 0.7];
    let c = [0.4, 0.4, 1.3];
    let (rc, fwd) = build(&g, &c, 1, 0.55, BRAIDOSC_BACKEND_NUMERIC, BRAIDOSC_ROUTE_REWRITE, false);
    assert_eq!(rc, BRAIDOSC_OK, "{}", last_error());
    let (rc, bwd) = build(&g, &c, 1, 0.55, BRAIDOSC_BACKEND_NUMERIC, BRAIDOSC_ROUTE_REWRITE, true);
    assert_eq!(rc, BRAIDOSC_OK, "{}", last_error());
    let (mut dim, mut gens) = (0, 0);
    unsafe { braidosc_matrices_shape(fwd, &mut dim, &mut gens) };
    assert_eq!((dim, gens), (6, 2));
    for i in 1..=2 {
        let p = matmul(&entries(fwd, i), &entries(bwd, i), dim);
        for r in 0..dim {
            for s in 0..dim {
                let want = if r == s { 1.0 } else { 0.0 };
                assert!((p[r * dim + s] - want).abs() < 1e-9);
            }
        }
    }
    let mut small = [0.0; 4];
    assert_eq!(unsafe { braidosc_matrices_entries(fwd, 1, small.as_mut_ptr(), 4) }, BRAIDOSC_ERR_RANGE);
    assert_eq!(unsafe { braidosc_matrices_entries(fwd, 3, small.as_mut_ptr(), 4) }, BRAIDOSC_ERR_RANGE);
    unsafe {
        braidosc_matrices_free(fwd);
        braidosc_matrices_free(bwd);
    }
}

#[test]
fn exact_family_is_json_only() {
    let (rc, m) = build(&[1.0; 3], &[0.5; 3], 1, 0.0, BRAIDOSC_BACKEND_EXACT, BRAIDOSC_ROUTE_REWRITE, false);
    assert_eq!(rc, BRAIDOSC_OK, "{}", last_error());
    let mut buf = [0.0; 4];
    assert_eq!(unsafe { braidosc_matrices_entries(m, 1, buf.as_mut_ptr(), 4) }, BRAIDOSC_ERR_BACKEND);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { braidosc_matrices_to_json(m, &mut s) }, BRAIDOSC_OK);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe {
        braidosc_string_free(s);
        braidosc_matrices_free(m);
    }
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["backend"], "exact");
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["matrices"].as_array().unwrap().len(), 2);
    assert_eq!(doc["conventions"]["variable"], "x = q^(-gamma)");
}

#[test]
fn invalid_inputs_report_codes() {
    let (rc, m) = build(&[1.0, 2.0, 1.0], &[0.5; 3], 1, 0.6, BRAIDOSC_BACKEND_EXACT, BRAIDOSC_ROUTE_REWRITE, false);
    assert_eq!(rc, BRAIDOSC_ERR_INVALID);
    assert!(m.is_null());
    assert!(last_error().contains("homogeneous"), "{}", last_error());

    let (rc, _) = build(&[1.0; 3], &[0.5; 3], 1, 1.0, BRAIDOSC_BACKEND_NUMERIC, BRAIDOSC_ROUTE_REWRITE, false);
    assert_eq!(rc, BRAIDOSC_ERR_INVALID);
    let (rc, _) = build(&[1.0; 3], &[0.5; 3], 1, 0.6, 9, BRAIDOSC_ROUTE_REWRITE, false);
    assert_eq!(rc, BRAIDOSC_ERR_INVALID);
    let (rc, _) = build(&[1.0; 3], &[0.5; 3], 1, 0.6, BRAIDOSC_BACKEND_NUMERIC, 9, false);
    assert_eq!(rc, BRAIDOSC_ERR_INVALID);

    let mut out = ptr::null_mut();
    let rc = unsafe { braidosc_matrices_build(3, 1, ptr::null(), ptr::null(), 0.6, 0, 1, 0, 0, &mut out) };
    assert_eq!(rc, BRAIDOSC_ERR_NULL);
    let mut d = 0;
    let mut g = 0;
    assert_eq!(unsafe { braidosc_matrices_shape(ptr::null(), &mut d, &mut g) }, BRAIDOSC_ERR_NULL);

    let (rc, m) = build(&[1.0; 3], &[0.5; 3], 1, 0.6, BRAIDOSC_BACKEND_NUMERIC, BRAIDOSC_ROUTE_REWRITE, false);
    assert_eq!(rc, BRAIDOSC_OK);
    assert!(last_error().is_empty());
    unsafe { braidosc_matrices_free(m) };
    unsafe { braidosc_matrices_free(ptr::null_mut()) };
    unsafe { braidosc_string_free(ptr::null_mut()) };
}

#[test]
fn verify_suite_through_ffi() {
    let suite = CString::new("algebra").unwrap();
    let mut passed = 0;
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { braidosc_verify(suite.as_ptr(), 3, &mut passed, &mut report) }, BRAIDOSC_OK);
    assert_eq!(passed, 1);
    let text = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_owned();
    unsafe { braidosc_string_free(report) };
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["seed"], 3);
    assert_eq!(doc["suites"][0]["suite"], "algebra");

    let bad = CString::new("nope").unwrap();
    assert_eq!(unsafe { braidosc_verify(bad.as_ptr(), 3, &mut passed, ptr::null_mut()) }, BRAIDOSC_ERR_INVALID);
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(braidosc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/braidosc.h")).unwrap();
    for name in [
        "braidosc_last_error",
        "braidosc_string_free",
        "braidosc_counts",
        "braidosc_matrices_build",
        "braidosc_matrices_free",
        "braidosc_matrices_shape",
        "braidosc_matrices_entries",
        "braidosc_matrices_to_json",
        "braidosc_verify",
        "typedef struct BraidoscMatrices BraidoscMatrices",
        "#define BRAIDOSC_ERR_PANIC 7",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Compiles a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libbraidosc_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile_dir();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "braidosc.h"
int main(void) {
    double g[3] = {1.0, 1.0, 1.0}, c[3] = {0.5, 0.5, 0.5};
    BraidoscMatrices *m = NULL;
    if (braidosc_matrices_build(3, 1, g, c, 0.6, BRAIDOSC_BACKEND_NUMERIC, BRAIDOSC_ROUTE_REWRITE, 0, 0, &m) != BRAIDOSC_OK) return 1;
    size_t dim = 0, gens = 0;
    if (braidosc_matrices_shape(m, &dim, &gens) != BRAIDOSC_OK) return 2;
    double buf[4];
    if (braidosc_matrices_entries(m, 1, buf, 4) != BRAIDOSC_OK) return 3;
    printf("%zu %zu %.12f\n", dim, gens, buf[0]);
    braidosc_matrices_free(m);
    if (braidosc_matrices_build(3, 1, g, c, 1.0, 0, 1, 0, 0, &m) != BRAIDOSC_ERR_INVALID) return 4;
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(&fields[..2], ["2", "2"]);
    // Top-left entry of the reduced Burau sigma_1 is -t with t = q^{-2 gamma}.
    let want = -(0.6f64.powf(-2.0));
    assert!((fields[2].parse::<f64>().unwrap() - want).abs() < 1e-10);
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("braidosc-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
