//! C interface to `paritybias`.
//!
//! Every function returns a [`PbStatus`]. On failure a message is available
//! from [`pb_last_error_message`] on the same thread. Series are opaque
//! handles released with [`pb_series_free`]; strings returned through out
//! parameters are released with [`pb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use paritybias::genfunc::{build_series, FamilyId, FamilyParams};
use paritybias::inequality::{verify_theorem, TheoremId, TheoremSpec};
use paritybias::oracle::{BiasSpec, ConstraintSpec, Oracle, OracleCaps};
use paritybias::{Error, FormalSeries};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParameter = 3,
    CapExceeded = 4,
    Domain = 5,
    Coverage = 6,
    TierDisagreement = 7,
    NonInvertible = 8,
    DivergentProduct = 9,
    BeyondTruncation = 10,
    Unsupported = 11,
    Overflow = 12,
    Panic = 13,
}

/// Opaque truncated power series.
pub struct PbSeries {
    inner: FormalSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(PbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::NonInvertible(_) => PbStatus::NonInvertible,
            Error::DivergentProduct(_) => PbStatus::DivergentProduct,
            Error::BeyondTruncation { .. } => PbStatus::BeyondTruncation,
            Error::Parameter(_) => PbStatus::InvalidParameter,
            Error::CapExceeded { .. } => PbStatus::CapExceeded,
            Error::UnsupportedMode(_) => PbStatus::Unsupported,
            Error::Domain(_) => PbStatus::Domain,
            Error::Coverage { .. } => PbStatus::Coverage,
            Error::TierDisagreement(_) => PbStatus::TierDisagreement,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PbStatus::NullPointer, format!("{what} is null"))
}

fn run(body: impl FnOnce() -> Result<(), Failure>) -> PbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            PbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PbStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(PbStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn series_ref<'a>(p: *const PbSeries, what: &str) -> Result<&'a FormalSeries, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| null(what))
}

unsafe fn put_series(out: *mut *mut PbSeries, s: FormalSeries) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(PbSeries { inner: s }));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).map_err(|_| Failure(PbStatus::Domain, "string contains NUL".into()))?.into_raw();
    Ok(())
}

fn optional_m(m: u32) -> Option<u32> {
    (m != 0).then_some(m)
}

fn caps() -> Result<OracleCaps, Failure> {
    Ok(OracleCaps::from_env()?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread (empty after a success).
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn pb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a named generating function truncated at `order`. Pass `m = 0`
/// for families without a parameter.
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_build(
    family: *const c_char,
    m: u32,
    order: usize,
    out: *mut *mut PbSeries,
) -> PbStatus {
    run(|| {
        let f: FamilyId = read_str(family, "family")?.parse()?;
        let s = build_series(f, FamilyParams { m: optional_m(m) }, order)?;
        put_series(out, s)
    })
}

/// Series with the given `len` coefficients, truncated at `len - 1`.
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_from_i64(coeffs: *const i64, len: usize, out: *mut *mut PbSeries) -> PbStatus {
    run(|| {
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        if len == 0 {
            return Err(Failure(PbStatus::InvalidParameter, "at least one coefficient is required".into()));
        }
        let slice = std::slice::from_raw_parts(coeffs, len);
        put_series(out, FormalSeries::make(slice.iter().copied(), len - 1))
    })
}

/// `a * b` at the smaller of the two orders.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_mul(a: *const PbSeries, b: *const PbSeries, out: *mut *mut PbSeries) -> PbStatus {
    run(|| {
        let r = series_ref(a, "a")? * series_ref(b, "b")?;
        put_series(out, r)
    })
}

/// `a - b` at the smaller of the two orders.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_sub(a: *const PbSeries, b: *const PbSeries, out: *mut *mut PbSeries) -> PbStatus {
    run(|| {
        let r = series_ref(a, "a")? - series_ref(b, "b")?;
        put_series(out, r)
    })
}

/// `1 / a`; the constant term must be 1 or -1.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_reciprocal(a: *const PbSeries, out: *mut *mut PbSeries) -> PbStatus {
    run(|| {
        let r = series_ref(a, "a")?.reciprocal()?;
        put_series(out, r)
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_order(s: *const PbSeries, out: *mut usize) -> PbStatus {
    run(|| {
        let order = series_ref(s, "series")?.order();
        if out.is_null() {
            return Err(null("out"));
        }
        *out = order;
        Ok(())
    })
}

/// Coefficient of `q^n` as a decimal string.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_coefficient(s: *const PbSeries, n: usize, out: *mut *mut c_char) -> PbStatus {
    run(|| {
        let c = series_ref(s, "series")?.coefficient(n)?.to_string();
        put_string(out, c)
    })
}

/// Coefficient of `q^n`; fails with `OVERFLOW` when it does not fit.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_series_coefficient_i64(s: *const PbSeries, n: usize, out: *mut i64) -> PbStatus {
    run(|| {
        let c = series_ref(s, "series")?.coefficient(n)?;
        let v =
            i64::try_from(c).map_err(|_| Failure(PbStatus::Overflow, format!("coefficient {c} exceeds 64 bits")))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = v;
        Ok(())
    })
}

/// Releases a series handle. Null is ignored.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pb_series_free(s: *mut PbSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Verifies a theorem by id (`m = 0` when it takes no parameter) on its
/// claimed range up to `max_n`. Writes whether it holds and the full report
/// as JSON.
///
/// # Safety
/// `theorem` must be a NUL-terminated string; `holds` and `report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_verify_theorem(
    theorem: *const c_char,
    m: u32,
    max_n: usize,
    order: usize,
    holds: *mut bool,
    report_json: *mut *mut c_char,
) -> PbStatus {
    run(|| {
        let id: TheoremId = read_str(theorem, "theorem")?.parse()?;
        let spec = TheoremSpec::new(id, optional_m(m))?;
        let report = verify_theorem(&spec, max_n, order, caps()?)?;
        if holds.is_null() {
            return Err(null("holds"));
        }
        let json = serde_json::to_string(&report).map_err(|e| Failure(PbStatus::Domain, e.to_string()))?;
        put_string(report_json, json)?;
        *holds = report.holds;
        Ok(())
    })
}

/// Number of partitions of `n` with all parts `>= min_part`, none in
/// `forbidden`, and strictly more parts `= j` than `= k` modulo `m`, as a
/// decimal string. Uses the dynamic-programming oracle.
///
/// # Safety
/// `forbidden` must point to `forbidden_len` values (or be null with length 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_count_bias(
    n: usize,
    min_part: u32,
    forbidden: *const u32,
    forbidden_len: usize,
    j: u32,
    k: u32,
    m: u32,
    out: *mut *mut c_char,
) -> PbStatus {
    run(|| {
        let parts: &[u32] = match (forbidden.is_null(), forbidden_len) {
            (_, 0) => &[],
            (true, _) => return Err(null("forbidden")),
            (false, len) => std::slice::from_raw_parts(forbidden, len),
        };
        let c = ConstraintSpec::ordinary().with_min_part(min_part).forbid(parts.iter().copied());
        let count = Oracle::new(caps()?).count_bias_dp(n, &c, BiasSpec::new(j, k, m)?)?;
        put_string(out, count.to_string())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
