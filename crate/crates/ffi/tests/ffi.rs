use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use serde_json::Value;
use stackyfan_ffi::*;

fn run(cmd: &str, input: &str, options: *const SfOptions) -> (SfStatus, *mut SfResult) {
    let (c, i) = (CString::new(cmd).unwrap(), CString::new(input).unwrap());
    let mut out = ptr::null_mut();
    let status = unsafe { sf_run(c.as_ptr(), i.as_ptr(), options, &mut out) };
    (status, out)
}

fn json(r: *const SfResult) -> Value {
    let text = unsafe { CStr::from_ptr(sf_result_json(r)) }.to_str().unwrap();
    serde_json::from_str(text).unwrap()
}

fn last_error() -> String {
    let p = sf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn success_payload() {
    let (s, r) = run("g-beta", &sample("p1.json"), ptr::null());
    assert_eq!(s, SfStatus::Ok);
    assert_eq!(unsafe { sf_result_status(r) }, SfStatus::Ok);
    assert_eq!(json(r), serde_json::json!({"free_rank": 1, "torsion": []}));
    assert_eq!(unsafe { sf_result_diagnostic_count(r) }, 0);
    unsafe { sf_result_free(r) };
}

#[test]
fn failures_carry_diagnostics() {
    let (s, r) =
        run("stacky-validate", r#"{"lattice_rank": 1, "maximal_cones": [[[1]]], "beta": [[1], [0]]}"#, ptr::null());
    assert_eq!(s, SfStatus::MathFailure);
    assert!(!r.is_null());
    assert_eq!(json(r)["valid"], false);
    assert!(unsafe { sf_result_diagnostic_count(r) } >= 1);
    assert!(!unsafe { sf_result_diagnostic(r, 0) }.is_null());
    assert!(unsafe { sf_result_diagnostic(r, 99) }.is_null());
    unsafe { sf_result_free(r) };

    let (s, r) = run("mass", "{\"groups\": [", ptr::null());
    assert_eq!(s, SfStatus::InvalidInput);
    assert!(json(r)["error"].as_str().unwrap().contains("line 1"));
    assert!(last_error().contains("malformed JSON"));
    unsafe { sf_result_free(r) };
}

#[test]
fn argument_errors() {
    let (s, r) = run("frobnicate", "{}", ptr::null());
    assert_eq!(s, SfStatus::UnknownCommand);
    assert!(r.is_null());
    assert!(last_error().contains("frobnicate"));

    let mut out = ptr::null_mut();
    let s = unsafe { sf_run(ptr::null(), ptr::null(), ptr::null(), &mut out) };
    assert_eq!(s, SfStatus::NullArgument);
    assert!(out.is_null());
    assert_eq!(unsafe { sf_run(ptr::null(), ptr::null(), ptr::null(), ptr::null_mut()) }, SfStatus::NullArgument);

    let bad = [0xffu8, 0];
    let s = unsafe { sf_run(bad.as_ptr().cast(), bad.as_ptr().cast(), ptr::null(), &mut out) };
    assert_eq!(s, SfStatus::InvalidUtf8);

    unsafe {
        sf_result_free(ptr::null_mut());
        sf_options_free(ptr::null_mut());
        assert!(sf_result_json(ptr::null()).is_null());
    }
}

fn sample(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)).unwrap()
}

#[test]
fn options_are_applied() {
    let o = sf_options_new();
    let s3 = sample("s3.json");
    unsafe {
        assert_eq!(sf_options_set_max_degree(o, 1), SfStatus::Ok);
        let (s, r) = run("group-homology", &s3, o);
        assert_eq!(s, SfStatus::Ok);
        assert_eq!(json(r)["homology"].as_array().unwrap().len(), 2);
        sf_result_free(r);

        let half_plane = sample("upper-half-plane.json");
        let (first, r1) = run("hodge-validate", &half_plane, o);
        sf_result_free(r1);
        assert_eq!(sf_options_set_convention(o, SfConvention::ConjugateSecond), SfStatus::Ok);
        let (second, r2) = run("hodge-validate", &half_plane, o);
        sf_result_free(r2);
        assert_eq!((first, second), (SfStatus::Ok, SfStatus::MathFailure));

        let y = CString::new("1/3,5").unwrap();
        assert_eq!(sf_options_set_y_samples(o, y.as_ptr()), SfStatus::Ok);
        let y = CString::new("1/0").unwrap();
        assert_eq!(sf_options_set_y_samples(o, y.as_ptr()), SfStatus::InvalidInput);
        assert!(last_error().contains("denominator"));
        assert_eq!(sf_options_set_max_degree(ptr::null_mut(), 1), SfStatus::NullArgument);
        sf_options_free(o);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include").join("stackyfan.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["sf_run", "sf_result_json", "sf_result_free", "sf_last_error", "sf_options_set_y_samples"] {
        assert!(text.contains(f), "{f}");
    }
    let Ok(cc) = std::env::var("CC").or_else(|_| which("cc").ok_or(())) else {
        eprintln!("no C compiler; skipping link test");
        return;
    };
    let lib_dir = target_dir();
    if !lib_dir.join("libstackyfan_ffi.so").exists() {
        eprintln!("shared library not found in {}; skipping link test", lib_dir.display());
        return;
    }
    let exe = std::env::temp_dir().join(format!("stackyfan-smoke-{}", std::process::id()));
    let status = Command::new(cc)
        .arg(manifest.join("tests").join("c").join("smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lstackyfan_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
}

fn which(name: &str) -> Option<String> {
    std::env::var_os("PATH")?
        .to_str()?
        .split(':')
        .map(|d| Path::new(d).join(name))
        .find(|p| p.is_file())
        .map(|p| p.to_string_lossy().into_owned())
}
