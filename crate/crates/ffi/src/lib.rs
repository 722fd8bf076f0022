//! C ABI over the birat engines.
//!
//! Instances live behind an opaque `BiratInstance` handle. Every fallible call
//! returns a `BiratStatus`; on failure a message is kept per thread and can be
//! read with `birat_last_error_message`. Strings handed out by the library must
//! be released with `birat_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use birat::darboux::{darboux_for_instance, IndexConstraintQuery};
use birat::instance::{Instance, InstanceError};
use birat::sequence::{berlekamp_massey, default_max_terms, emit, run_orbit, OrbitTable};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiratStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownInstance = 3,
    InvalidInstance = 4,
    Computation = 5,
    /// The exact engine hit its term ceiling; partial results were written.
    Truncated = 6,
    BufferTooSmall = 7,
    Unavailable = 8,
    Panic = 9,
}

/// Opaque handle to a loaded instance.
pub struct BiratInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn fail(status: BiratStatus, msg: impl Into<String>) -> BiratStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> BiratStatus) -> BiratStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == BiratStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(BiratStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, BiratStatus> {
    if p.is_null() {
        return Err(fail(BiratStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(BiratStatus::InvalidUtf8, "argument is not UTF-8"))
}

fn instance_status(e: &InstanceError) -> BiratStatus {
    match e {
        InstanceError::Unknown(_) | InstanceError::Io { .. } => BiratStatus::UnknownInstance,
        _ => BiratStatus::InvalidInstance,
    }
}

fn hand_out(s: String, out: *mut *mut c_char) -> BiratStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            BiratStatus::Ok
        }
        Err(_) => fail(BiratStatus::Computation, "output contains a NUL byte"),
    }
}

fn store(inst: Result<Instance, InstanceError>, out: *mut *mut BiratInstance) -> BiratStatus {
    match inst {
        Ok(i) => {
            unsafe { *out = Box::into_raw(Box::new(BiratInstance { inner: i })) };
            BiratStatus::Ok
        }
        Err(e) => fail(instance_status(&e), e.to_string()),
    }
}

/// Loads a built-in instance (`khk-euler`, `dp1-ercolani`, `inflated-qrt`) or an
/// instance file path. `params` is NULL or a comma separated list such as
/// `"gamma=1,a=2"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string, `params` NULL or NUL-terminated, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn birat_instance_load(
    spec: *const c_char,
    params: *const c_char,
    out: *mut *mut BiratInstance,
) -> BiratStatus {
    guard(|| {
        if out.is_null() {
            return fail(BiratStatus::NullPointer, "null output pointer");
        }
        let spec = match text(spec) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let params = if params.is_null() {
            ""
        } else {
            match text(params) {
                Ok(s) => s,
                Err(s) => return s,
            }
        };
        let mut pairs = Vec::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => pairs.push((k.trim(), v.trim())),
                None => {
                    return fail(
                        BiratStatus::InvalidInstance,
                        format!("parameter {item:?} is not NAME=VALUE"),
                    )
                }
            }
        }
        store(Instance::load_with(spec, &pairs), out)
    })
}

/// Parses an instance document held in memory.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn birat_instance_from_json(
    json: *const c_char,
    out: *mut *mut BiratInstance,
) -> BiratStatus {
    guard(|| {
        if out.is_null() {
            return fail(BiratStatus::NullPointer, "null output pointer");
        }
        match text(json) {
            Ok(s) => store(Instance::from_json(s), out),
            Err(s) => s,
        }
    })
}

/// Releases an instance; NULL is ignored.
///
/// # Safety
/// `inst` must come from a load call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn birat_instance_free(inst: *mut BiratInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of blow-up charts, i.e. index columns in orbit tables.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn birat_chart_count(inst: *const BiratInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.charts.len())
}

/// Default horizon of the instance.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn birat_default_nmax(inst: *const BiratInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.nmax)
}

unsafe fn orbit(inst: *const BiratInstance, nmax: usize) -> Result<OrbitTable, BiratStatus> {
    let Some(i) = inst.as_ref().map(|i| &i.inner) else {
        return Err(fail(BiratStatus::NullPointer, "null instance"));
    };
    run_orbit(&i.map, &i.seed, &i.charts, nmax, Some(default_max_terms()))
        .map_err(|e| fail(BiratStatus::Computation, e.to_string()))
}

/// Degrees `d(0..=nmax)` of the orbit of the instance seed from the exact engine.
/// Writes at most `len` values and the count written to `written`; returns
/// `Truncated` when the term ceiling stopped the run early.
///
/// # Safety
/// `out` must point to `len` writable values and `written` be valid.
#[no_mangle]
pub unsafe extern "C" fn birat_degrees(
    inst: *const BiratInstance,
    nmax: usize,
    out: *mut u64,
    len: usize,
    written: *mut usize,
) -> BiratStatus {
    guard(|| {
        if out.is_null() || written.is_null() {
            return fail(BiratStatus::NullPointer, "null output pointer");
        }
        if len < nmax + 1 {
            return fail(
                BiratStatus::BufferTooSmall,
                format!("need room for {} values", nmax + 1),
            );
        }
        let t = match orbit(inst, nmax) {
            Ok(x) => x,
            Err(s) => return s,
        };
        let d = t.degrees();
        for (k, v) in d.iter().enumerate() {
            *out.add(k) = u64::from(*v);
        }
        *written = d.len();
        match &t.truncated {
            Some(why) => fail(BiratStatus::Truncated, why.clone()),
            None => BiratStatus::Ok,
        }
    })
}

/// Degrees `d(0..=nmax)` from the affine index recursion, if the instance has one.
///
/// # Safety
/// `out` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn birat_affine_degrees(
    inst: *const BiratInstance,
    nmax: usize,
    out: *mut i64,
    len: usize,
) -> BiratStatus {
    guard(|| {
        let Some(i) = inst.as_ref().map(|i| &i.inner) else {
            return fail(BiratStatus::NullPointer, "null instance");
        };
        if out.is_null() {
            return fail(BiratStatus::NullPointer, "null output pointer");
        }
        if len < nmax + 1 {
            return fail(
                BiratStatus::BufferTooSmall,
                format!("need room for {} values", nmax + 1),
            );
        }
        let Some(sys) = &i.affine else {
            return fail(BiratStatus::Unavailable, "instance has no affine system");
        };
        let res = run_orbit(&i.map, &i.seed, &i.charts, 0, None)
            .and_then(|t| t.state(0, sys.labels()))
            .and_then(|s| sys.run(&s, nmax));
        let rows = match res {
            Ok(r) => r,
            Err(e) => return fail(BiratStatus::Computation, e.to_string()),
        };
        for (k, r) in rows.iter().enumerate() {
            let v = r[0].to_integer();
            match i64::try_from(v) {
                Ok(x) => *out.add(k) = x,
                Err(_) => return fail(BiratStatus::Computation, "degree exceeds 64 bits"),
            }
        }
        BiratStatus::Ok
    })
}

/// Orbit table as CSV with header `n,d,<chart names>`.
///
/// # Safety
/// `out` must be valid; release the string with `birat_string_free`.
#[no_mangle]
pub unsafe extern "C" fn birat_orbit_csv(
    inst: *const BiratInstance,
    nmax: usize,
    out: *mut *mut c_char,
) -> BiratStatus {
    table_string(inst, nmax, out, emit::to_csv)
}

/// Orbit table as JSON.
///
/// # Safety
/// `out` must be valid; release the string with `birat_string_free`.
#[no_mangle]
pub unsafe extern "C" fn birat_orbit_json(
    inst: *const BiratInstance,
    nmax: usize,
    out: *mut *mut c_char,
) -> BiratStatus {
    table_string(inst, nmax, out, |t| {
        serde_json::to_string(t).expect("plain data serializes")
    })
}

unsafe fn table_string(
    inst: *const BiratInstance,
    nmax: usize,
    out: *mut *mut c_char,
    render: impl FnOnce(&OrbitTable) -> String,
) -> BiratStatus {
    guard(|| {
        if out.is_null() {
            return fail(BiratStatus::NullPointer, "null output pointer");
        }
        let t = match orbit(inst, nmax) {
            Ok(x) => x,
            Err(s) => return s,
        };
        let s = hand_out(render(&t), out);
        match (&t.truncated, s) {
            (Some(why), BiratStatus::Ok) => fail(BiratStatus::Truncated, why.clone()),
            _ => s,
        }
    })
}

/// Minimal recurrence of the exact degree sequence, with characteristic
/// polynomial and closed form, as JSON.
///
/// # Safety
/// `out` must be valid; release the string with `birat_string_free`.
#[no_mangle]
pub unsafe extern "C" fn birat_recurrence_json(
    inst: *const BiratInstance,
    nmax: usize,
    out: *mut *mut c_char,
) -> BiratStatus {
    guard(|| {
        if out.is_null() {
            return fail(BiratStatus::NullPointer, "null output pointer");
        }
        let t = match orbit(inst, nmax) {
            Ok(x) => x,
            Err(s) => return s,
        };
        let seq = t.degrees_rational();
        let rec = berlekamp_massey(&seq);
        hand_out(
            emit::RecurrenceReport::new("degree sequence", &seq, &rec).to_json(),
            out,
        )
    })
}

/// Polynomials of `degree` meeting the instance's index bounds (all of them when
/// `bounded` is false) and the pull-back action on them, as JSON.
///
/// # Safety
/// `out` must be valid; release the string with `birat_string_free`.
#[no_mangle]
pub unsafe extern "C" fn birat_darboux_json(
    inst: *const BiratInstance,
    degree: u32,
    bounded: bool,
    out: *mut *mut c_char,
) -> BiratStatus {
    guard(|| {
        let Some(i) = inst.as_ref().map(|i| &i.inner) else {
            return fail(BiratStatus::NullPointer, "null instance");
        };
        if out.is_null() {
            return fail(BiratStatus::NullPointer, "null output pointer");
        }
        let q = if bounded {
            match IndexConstraintQuery::for_instance(i, degree) {
                Ok(q) => q,
                Err(e) => return fail(BiratStatus::Computation, e.to_string()),
            }
        } else {
            IndexConstraintQuery::unconstrained(degree)
        };
        match darboux_for_instance(i, &q) {
            Ok((_, r)) => hand_out(serde_json::to_string(&r).expect("plain data serializes"), out),
            Err(e) => fail(BiratStatus::Computation, e.to_string()),
        }
    })
}

/// Releases a string returned by the library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn birat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn birat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn birat_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
