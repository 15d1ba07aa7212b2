use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use paritybias_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    pb_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(pb_last_error_message()).to_str().unwrap().to_owned()
}

#[test]
fn build_and_read_coefficients() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pb_series_build(cstr("pe").as_ptr(), 0, 8, &mut s), PbStatus::Ok);
        let mut order = 0;
        assert_eq!(pb_series_order(s, &mut order), PbStatus::Ok);
        assert_eq!(order, 8);
        let got: Vec<i64> = (0..=8)
            .map(|n| {
                let mut c = -1;
                assert_eq!(pb_series_coefficient_i64(s, n, &mut c), PbStatus::Ok);
                c
            })
            .collect();
        assert_eq!(got, vec![0, 0, 1, 0, 2, 0, 3, 1, 5]);
        let mut text = ptr::null_mut();
        assert_eq!(pb_series_coefficient(s, 9, &mut text), PbStatus::BeyondTruncation);
        assert!(last_error().contains("9"));
        pb_series_free(s);
    }
}

#[test]
fn arithmetic_round_trip() {
    unsafe {
        let (mut a, mut inv, mut prod, mut diff) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        let coeffs = [1i64, -1, 0, 3, 5];
        assert_eq!(pb_series_from_i64(coeffs.as_ptr(), coeffs.len(), &mut a), PbStatus::Ok);
        assert_eq!(pb_series_reciprocal(a, &mut inv), PbStatus::Ok);
        assert_eq!(pb_series_mul(a, inv, &mut prod), PbStatus::Ok);
        assert_eq!(pb_series_sub(prod, prod, &mut diff), PbStatus::Ok);
        for n in 0..=4 {
            let (mut p, mut d) = (0, 0);
            pb_series_coefficient_i64(prod, n, &mut p);
            pb_series_coefficient_i64(diff, n, &mut d);
            assert_eq!((p, d), (i64::from(n == 0), 0));
        }
        let two = [2i64, 1];
        let mut b = ptr::null_mut();
        pb_series_from_i64(two.as_ptr(), 2, &mut b);
        let mut out = ptr::null_mut();
        assert_eq!(pb_series_reciprocal(b, &mut out), PbStatus::NonInvertible);
        for h in [a, inv, prod, diff, b] {
            pb_series_free(h);
        }
    }
}

#[test]
fn large_coefficients_as_strings() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pb_series_build(cstr("b_seq").as_ptr(), 0, 1000, &mut s), PbStatus::Ok);
        let mut small = 0;
        assert_eq!(pb_series_coefficient_i64(s, 1000, &mut small), PbStatus::Overflow);
        let mut text = ptr::null_mut();
        assert_eq!(pb_series_coefficient(s, 1000, &mut text), PbStatus::Ok);
        // number of partitions of 500
        assert_eq!(take_string(text), "2300165032574323995027");
        pb_series_free(s);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pb_series_build(ptr::null(), 0, 8, &mut s), PbStatus::NullPointer);
        assert_eq!(pb_series_build(cstr("nope").as_ptr(), 0, 8, &mut s), PbStatus::InvalidParameter);
        assert!(last_error().contains("nope"));
        assert_eq!(pb_series_build(cstr("po").as_ptr(), 0, 8, ptr::null_mut()), PbStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(pb_series_build(bad.as_ptr().cast(), 0, 8, &mut s), PbStatus::InvalidUtf8);
        let mut out = ptr::null_mut();
        assert_eq!(pb_count_bias(41, 1, ptr::null(), 0, 1, 1, 2, &mut out), PbStatus::InvalidParameter);
        assert_eq!(pb_count_bias(301, 1, ptr::null(), 0, 1, 0, 2, &mut out), PbStatus::CapExceeded);
        pb_series_free(ptr::null_mut());
        pb_string_free(ptr::null_mut());
    }
}

#[test]
fn counts_and_theorems() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(pb_count_bias(8, 2, ptr::null(), 0, 0, 1, 2, &mut out), PbStatus::Ok);
        assert_eq!(take_string(out), "5");
        let forbid = [2u32];
        assert_eq!(pb_count_bias(1, 1, forbid.as_ptr(), 1, 1, 0, 2, &mut out), PbStatus::Ok);
        assert_eq!(take_string(out), "1");

        let mut holds = false;
        let mut json = ptr::null_mut();
        assert_eq!(pb_verify_theorem(cstr("thm_mm").as_ptr(), 0, 100, 100, &mut holds, &mut json), PbStatus::Ok);
        assert!(holds);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["range"]["lo"], 8);
        assert_eq!(
            pb_verify_theorem(cstr("thm_kim_new").as_ptr(), 0, 100, 100, &mut holds, &mut json),
            PbStatus::InvalidParameter
        );
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(pb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/paritybias.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "pb_version",
        "pb_last_error_message",
        "pb_series_build",
        "pb_series_from_i64",
        "pb_series_mul",
        "pb_series_sub",
        "pb_series_reciprocal",
        "pb_series_order",
        "pb_series_coefficient",
        "pb_series_coefficient_i64",
        "pb_series_free",
        "pb_verify_theorem",
        "pb_count_bias",
        "pb_string_free",
        "typedef struct PbSeries PbSeries",
        "PB_STATUS_TIER_DISAGREEMENT",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

/// Compiles and runs a C program against the header and the static library.
/// Skipped when no C compiler is installed.
#[test]
fn c_program_links_and_runs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    // test builds skip the staticlib; the test binary lives in <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let target = exe.ancestors().nth(3).unwrap().to_path_buf();
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let built = Command::new(cargo)
        .args(["build", "--quiet", "-p", "paritybias-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .status()
        .unwrap();
    assert!(built.success(), "building the static library failed");
    let lib = target.join("debug/libparitybias_ffi.a");
    let out = std::env::temp_dir().join(format!("pb-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    std::fs::remove_file(&out).ok();
    assert!(run.status.success(), "smoke test exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
