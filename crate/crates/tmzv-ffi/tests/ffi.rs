use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use tmzv_ffi::*;

fn s(x: &str) -> CString {
    CString::new(x).unwrap()
}

fn json(r: *const TmzvReport) -> serde_json::Value {
    let text = unsafe { CStr::from_ptr(tmzv_report_json(r)) }.to_str().unwrap();
    serde_json::from_str(text).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tmzv_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn field_and_mzv() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(tmzv_field_new(2, &mut f), TmzvStatus::Ok);
        assert_eq!(tmzv_field_q(f), 2);
        let mut r = ptr::null_mut();
        assert_eq!(tmzv_mzv(f, s("1,3").as_ptr(), 50, &mut r), TmzvStatus::Ok);
        let v = json(r);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["result"]["value"]["ord"], 2);
        tmzv_report_free(r);
        tmzv_field_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(tmzv_field_new(6, &mut f), TmzvStatus::InvalidField);
        assert!(f.is_null());
        assert!(last_error().contains("prime power"));
        let m = [1u32, 0, 1];
        assert_eq!(tmzv_field_with_modulus(2, m.as_ptr(), 3, &mut f), TmzvStatus::Reducible);
        assert!(last_error().contains("x + 1"), "{}", last_error());
        assert_eq!(tmzv_field_new(3, ptr::null_mut()), TmzvStatus::NullArgument);
        assert_eq!(tmzv_field_new(3, &mut f), TmzvStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(tmzv_mzv(f, s("1,,3").as_ptr(), 20, &mut r), TmzvStatus::Parse);
        assert_eq!(tmzv_verify(f, s("nope").as_ptr(), 20, &mut r), TmzvStatus::Parse);
        let bad = [0xffu8, 0];
        assert_eq!(tmzv_mzv(f, bad.as_ptr().cast(), 20, &mut r), TmzvStatus::Utf8);
        assert_eq!(tmzv_field_q(ptr::null()), 0);
        tmzv_field_free(f);
        tmzv_field_free(ptr::null_mut());
        tmzv_report_free(ptr::null_mut());
    }
}

#[test]
fn module_log_and_coproduct() {
    unsafe {
        let mut f = ptr::null_mut();
        tmzv_field_new(2, &mut f);
        let mut m = ptr::null_mut();
        assert_eq!(tmzv_module_new(f, s("3,1").as_ptr(), s("θ^2,1").as_ptr(), &mut m), TmzvStatus::Ok);
        assert_eq!(tmzv_module_dim(m), 5);
        let mut r = ptr::null_mut();
        assert_eq!(tmzv_module_log(m, 40, &mut r), TmzvStatus::Ok);
        assert_eq!(tmzv_report_passed(r), 1);
        tmzv_report_free(r);
        tmzv_module_free(m);

        assert_eq!(tmzv_coproduct(f, s("1,3").as_ptr(), 40, &mut r), TmzvStatus::Ok);
        let v = json(r);
        assert_eq!(tmzv_report_passed(r), 1);
        assert_eq!(v["result"]["v"], serde_json::json!(["0", "0", "0", "1", "1", "θ + 1"]));
        tmzv_report_free(r);

        assert_eq!(tmzv_verify(f, s("example13").as_ptr(), 40, &mut r), TmzvStatus::Ok);
        assert_eq!(tmzv_report_passed(r), 1);
        tmzv_report_free(r);
        tmzv_field_free(f);
    }
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tmzv.h")).unwrap();
    for name in [
        "typedef struct TmzvField TmzvField",
        "typedef struct TmzvReport TmzvReport",
        "TMZV_STATUS_REDUCIBLE = 4",
        "tmzv_last_error(void)",
        "tmzv_coproduct(",
        "tmzv_report_free(",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

/// Compile and run a C program against the header and the static library.
#[test]
fn c_smoke_program() {
    // built next to the test binary, from the same rustc run as the rlib
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().join("libtmzv_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("tmzv_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
