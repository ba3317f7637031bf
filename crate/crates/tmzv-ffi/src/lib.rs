//! C interface. Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free`. Every call returns a `TmzvStatus`; on failure the
//! message is available from `tmzv_last_error` on the same thread.
//!
//! Strings passed in are NUL-terminated UTF-8. Strings handed out stay valid until the
//! owning handle is freed (reports) or until the next failing call on the thread (errors).
//! Handle arguments must be null or live handles from this library; out-parameters must
//! point to writable storage. Nothing else is checked.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::json;
use tmzv::coproduct::{build_coproduct, z_vector};
use tmzv::decomposition::triples;
use tmzv::index::{parse_point, render_point};
use tmzv::logformula::log_paths;
use tmzv::special::{dmax_for, zeta_bruteforce};
use tmzv::suites::{self, Suite, SuiteConfig};
use tmzv::tmodule::{build_module, TModule};
use tmzv::{Error, Fq, Index, RatFunc};

/// Status codes. Zero is success.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TmzvStatus {
    Ok = 0,
    NullArgument = 1,
    Utf8 = 2,
    InvalidField = 3,
    Reducible = 4,
    Parse = 5,
    Domain = 6,
    Precision = 7,
    Budget = 8,
    CheckFailed = 9,
    Invalid = 10,
    Panic = 11,
}

/// A finite field F_q.
pub struct TmzvField {
    f: Fq,
}

/// The t-module G_{𝔰,u} with its special point.
pub struct TmzvModule {
    module: TModule,
    index: Index,
    point: Vec<RatFunc>,
}

/// A JSON report and its overall verdict.
pub struct TmzvReport {
    json: CString,
    passed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TmzvStatus {
    match e {
        Error::InvalidField(_) => TmzvStatus::InvalidField,
        Error::Reducible { .. } => TmzvStatus::Reducible,
        Error::Parse(_) => TmzvStatus::Parse,
        Error::Domain(_) | Error::Divergence { .. } => TmzvStatus::Domain,
        Error::Precision { .. } | Error::InsufficientOrder { .. } => TmzvStatus::Precision,
        Error::Budget(_) => TmzvStatus::Budget,
        Error::Check(_) => TmzvStatus::CheckFailed,
        _ => TmzvStatus::Invalid,
    }
}

enum Fail {
    Null,
    Utf8,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(body: F) -> TmzvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TmzvStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null argument");
            TmzvStatus::NullArgument
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("argument is not valid UTF-8");
            TmzvStatus::Utf8
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            TmzvStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn field_of<'a>(p: *const TmzvField) -> Result<&'a Fq, Fail> {
    p.as_ref().map(|h| &h.f).ok_or(Fail::Null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn report(value: serde_json::Value, passed: bool) -> TmzvReport {
    let mut s = serde_json::to_string_pretty(&json!({ "schema": 1, "passed": passed, "result": value })).unwrap();
    s.push('\n');
    TmzvReport { json: CString::new(s).unwrap(), passed }
}

/// Message of the last failed call on this thread; empty if none.
#[no_mangle]
pub extern "C" fn tmzv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// F_q with a built-in modulus (q ∈ {4, 8, 9} or prime).
#[no_mangle]
pub unsafe extern "C" fn tmzv_field_new(q: u32, out: *mut *mut TmzvField) -> TmzvStatus {
    guard(|| put(out, TmzvField { f: Fq::from_q(q)? }))
}

/// F_p[x]/(m) with `len` modulus coefficients, constant term first. Reducible moduli are
/// rejected with the factor in the error message.
#[no_mangle]
pub unsafe extern "C" fn tmzv_field_with_modulus(
    p: u32,
    coeffs: *const u32,
    len: usize,
    out: *mut *mut TmzvField,
) -> TmzvStatus {
    guard(|| {
        if coeffs.is_null() {
            return Err(Fail::Null);
        }
        let m = std::slice::from_raw_parts(coeffs, len);
        put(out, TmzvField { f: Fq::with_modulus(p, m)? })
    })
}

/// Field size q, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tmzv_field_q(field: *const TmzvField) -> u32 {
    field.as_ref().map_or(0, |h| h.f.q())
}

#[no_mangle]
pub unsafe extern "C" fn tmzv_field_free(field: *mut TmzvField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// ζ_A(𝔰) by brute force at precision `prec`; `index` is like "1,3".
#[no_mangle]
pub unsafe extern "C" fn tmzv_mzv(
    field: *const TmzvField,
    index: *const c_char,
    prec: i64,
    out: *mut *mut TmzvReport,
) -> TmzvStatus {
    guard(|| {
        let f = field_of(field)?;
        let s = Index::parse(text(index)?)?;
        let z = zeta_bruteforce(f, &s, dmax_for(&s, prec), prec, 22.0)?;
        let v = json!({ "index": s.entries(), "value": z.value.to_json(), "dmax": z.dmax, "certificate": z.certificate });
        put(out, report(v, true))
    })
}

/// The t-module G_{𝔰,u}; `point` is a comma-separated tuple like "θ^2,1".
#[no_mangle]
pub unsafe extern "C" fn tmzv_module_new(
    field: *const TmzvField,
    index: *const c_char,
    point: *const c_char,
    out: *mut *mut TmzvModule,
) -> TmzvStatus {
    guard(|| {
        let f = field_of(field)?;
        let s = Index::parse(text(index)?)?;
        let u = parse_point(f, text(point)?)?;
        let (module, _) = build_module(f, &s, &u)?;
        put(out, TmzvModule { module, index: s, point: u })
    })
}

/// Dimension of the module, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tmzv_module_dim(module: *const TmzvModule) -> usize {
    module.as_ref().map_or(0, |m| m.module.dim())
}

/// Log of the special point three ways and Exp back; passes when all agree to `prec`.
#[no_mangle]
pub unsafe extern "C" fn tmzv_module_log(module: *const TmzvModule, prec: i64, out: *mut *mut TmzvReport) -> TmzvStatus {
    guard(|| {
        let m = module.as_ref().ok_or(Fail::Null)?;
        let f = m.module.field();
        let lp = log_paths(f, &m.index, &m.point, prec)?;
        let passed = lp.agreement.iter().all(|&a| a >= prec) && lp.exp_back >= prec;
        let v = json!({
            "index": m.index.entries(),
            "point": render_point(&m.point),
            "y": lp.theorem.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "agreement": lp.agreement,
            "exp_agreement": lp.exp_back,
        });
        put(out, report(v, passed))
    })
}

#[no_mangle]
pub unsafe extern "C" fn tmzv_module_free(module: *mut TmzvModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Fiber coproduct of 𝔰 and its logarithmic vector Z_𝔰, checked against the closed form.
#[no_mangle]
pub unsafe extern "C" fn tmzv_coproduct(
    field: *const TmzvField,
    index: *const c_char,
    prec: i64,
    out: *mut *mut TmzvReport,
) -> TmzvStatus {
    guard(|| {
        let f = field_of(field)?;
        let s = Index::parse(text(index)?)?;
        let cop = build_coproduct(f, &triples(f, &s)?)?;
        let rep = z_vector(f, &cop, prec)?;
        let passed = rep.passed && cop.pi_is_morphism();
        let v = json!({
            "index": s.entries(),
            "rho": cop.rho_entries(),
            "v": render_point(&cop.special_point()),
            "Z": rep.z,
            "agreement_digits": rep.agreement_digits,
        });
        put(out, report(v, passed))
    })
}

/// Run one verification suite by name ("interp", "example13", …). A null field runs
/// q = 2 and 3.
#[no_mangle]
pub unsafe extern "C" fn tmzv_verify(
    field: *const TmzvField,
    suite: *const c_char,
    prec: i64,
    out: *mut *mut TmzvReport,
) -> TmzvStatus {
    guard(|| {
        let name = text(suite)?;
        let which = Suite::parse(name).ok_or_else(|| Error::Parse(format!("unknown suite {name:?}")))?;
        let mut cfg = SuiteConfig { prec, ..SuiteConfig::default() };
        if let Some(h) = field.as_ref() {
            cfg.fields = vec![h.f.clone()];
        }
        let rep = suites::run(which, &cfg);
        put(out, report(serde_json::to_value(&rep).unwrap(), rep.passed))
    })
}

/// The report as JSON; owned by the report.
#[no_mangle]
pub unsafe extern "C" fn tmzv_report_json(report: *const TmzvReport) -> *const c_char {
    report.as_ref().map_or(std::ptr::null(), |r| r.json.as_ptr())
}

/// 1 if every check in the report passed, 0 otherwise (or for null).
#[no_mangle]
pub unsafe extern "C" fn tmzv_report_passed(report: *const TmzvReport) -> i32 {
    report.as_ref().map_or(0, |r| r.passed as i32)
}

#[no_mangle]
pub unsafe extern "C" fn tmzv_report_free(report: *mut TmzvReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
