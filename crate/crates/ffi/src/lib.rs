//! C ABI over `ncur-core`.
//!
//! Theories are opaque handles. Results are returned as JSON strings
//! owned by the caller and released with [`ncur_string_free`]. Every
//! function returns an [`NcurStatus`]; on failure [`ncur_last_error`]
//! describes the error.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ncur_core::contextuality::{build_scenario, nc_polytope, violation_report, Route};
use ncur_core::orbit::{check, Group, Mode};
use ncur_core::rational::{parse_rational, parse_rational_list};
use ncur_core::report::{default_eta, report_json};
use ncur_core::theories::{contains_state, make_theory, RepVector, TheorySpec};
use ncur_core::uncertainty::{parse_axes, ur_support};
use ncur_core::Error;

/// Opaque theory handle.
pub struct NcurTheory {
    inner: TheorySpec,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcurStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownTheory = 3,
    InvalidArgument = 4,
    Parse = 5,
    StateOutsideTheory = 6,
    MeasurementUnavailable = 7,
    Infeasible = 8,
    Unsupported = 9,
    Internal = 10,
    Panic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NcurStatus {
    match e {
        Error::UnknownTheory(_) => NcurStatus::UnknownTheory,
        Error::Parse(_) => NcurStatus::Parse,
        Error::InvalidParameter(_) | Error::DimensionMismatch { .. } | Error::MalformedEquivalence(_) => {
            NcurStatus::InvalidArgument
        }
        Error::StateOutsideTheory => NcurStatus::StateOutsideTheory,
        Error::YUnavailable(_) => NcurStatus::MeasurementUnavailable,
        Error::Infeasible | Error::Unbounded => NcurStatus::Infeasible,
        Error::Unsupported(_) => NcurStatus::Unsupported,
        Error::Contract(_) | Error::MixedRadicals(..) => NcurStatus::Internal,
    }
}

struct Failure(NcurStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> NcurStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NcurStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NcurStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(NcurStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(NcurStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn theory<'a>(p: *const NcurTheory) -> FfiResult<&'a TheorySpec> {
    p.as_ref().map(|t| &t.inner).ok_or_else(|| Failure(NcurStatus::NullPointer, "theory is null".into()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure(NcurStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Failure(NcurStatus::Internal, "output contains nul".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Builds a theory by name: `qubit`, `stabilizer`, `depolarized:p/q`,
/// `gbit` or `simplicial`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncur_theory_new(name: *const c_char, out: *mut *mut NcurTheory) -> NcurStatus {
    guard(|| {
        let name = text(name, "name")?;
        if out.is_null() {
            return Err(Failure(NcurStatus::NullPointer, "output pointer is null".into()));
        }
        let inner = make_theory(name, None)?;
        *out = Box::into_raw(Box::new(NcurTheory { inner }));
        Ok(())
    })
}

/// Builds a theory from its JSON serialization.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncur_theory_from_json(json: *const c_char, out: *mut *mut NcurTheory) -> NcurStatus {
    guard(|| {
        let json = text(json, "json")?;
        if out.is_null() {
            return Err(Failure(NcurStatus::NullPointer, "output pointer is null".into()));
        }
        let inner = TheorySpec::from_json(json)?;
        *out = Box::into_raw(Box::new(NcurTheory { inner }));
        Ok(())
    })
}

/// Releases a theory. Null is ignored.
///
/// # Safety
/// `theory` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ncur_theory_free(theory: *mut NcurTheory) {
    if !theory.is_null() {
        drop(Box::from_raw(theory));
    }
}

/// # Safety
/// `theory` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncur_theory_json(theory_ptr: *const NcurTheory, out: *mut *mut c_char) -> NcurStatus {
    guard(|| put_string(out, theory(theory_ptr)?.to_json()))
}

/// Whether `state` (`"sx,sy,sz"` rationals) lies in the theory's state space.
///
/// # Safety
/// Pointers must be valid; `state` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ncur_theory_contains(
    theory_ptr: *const NcurTheory,
    state: *const c_char,
    out: *mut bool,
) -> NcurStatus {
    guard(|| {
        let t = theory(theory_ptr)?;
        let s = RepVector::parse_state(text(state, "state")?)?;
        if out.is_null() {
            return Err(Failure(NcurStatus::NullPointer, "output pointer is null".into()));
        }
        *out = contains_state(t, &s)?;
        Ok(())
    })
}

/// Support of the body projected onto `axes` (`"xz"` or `"xyz"`) in
/// `direction`, as surd JSON `{"a","b","k"}`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ncur_support(
    theory_ptr: *const NcurTheory,
    axes: *const c_char,
    direction: *const c_char,
    out: *mut *mut c_char,
) -> NcurStatus {
    guard(|| {
        let t = theory(theory_ptr)?;
        let axes = parse_axes(text(axes, "axes")?)?;
        let d = parse_rational_list(text(direction, "direction")?)?;
        put_string(out, json(&ur_support(t, &axes, &d)?))
    })
}

/// Orbit realizability of `state` under `group` (`"a12"` or `"a13"`), as
/// witness or refutation JSON. `geometric` nonzero allows A₁³ questions
/// without a Y measurement.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ncur_orbit_check(
    theory_ptr: *const NcurTheory,
    state: *const c_char,
    group: *const c_char,
    geometric: i32,
    out: *mut *mut c_char,
) -> NcurStatus {
    guard(|| {
        let t = theory(theory_ptr)?;
        let s = RepVector::parse_state(text(state, "state")?)?;
        let g: Group = text(group, "group")?.parse()?;
        let mode = if geometric != 0 { Mode::Geometric } else { Mode::Operational };
        put_string(out, json(&check(t, &s, g, mode)?))
    })
}

/// Violation report JSON for the theory under `group`.
///
/// # Safety
/// Pointers must be valid; `group` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ncur_violation_report(
    theory_ptr: *const NcurTheory,
    group: *const c_char,
    out: *mut *mut c_char,
) -> NcurStatus {
    guard(|| {
        let t = theory(theory_ptr)?;
        let g: Group = text(group, "group")?.parse()?;
        put_string(out, json(&violation_report(t, g)?))
    })
}

/// Noncontextual bound report JSON for `n` measurements via `route`
/// (`"lp"`, `"fm"` or `"appendixb"`).
///
/// # Safety
/// `route` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ncur_nc_bound(n: u32, route: *const c_char, out: *mut *mut c_char) -> NcurStatus {
    guard(|| {
        let route: Route = text(route, "route")?.parse()?;
        let scenario = build_scenario(n as usize)?;
        put_string(out, json(&nc_polytope(&scenario, route)?))
    })
}

/// The all-theories report. `eta` may be null for the default.
///
/// # Safety
/// `eta` must be null or NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ncur_report(eta: *const c_char, out: *mut *mut c_char) -> NcurStatus {
    guard(|| {
        let eta = if eta.is_null() { default_eta() } else { parse_rational(text(eta, "eta")?)? };
        put_string(out, report_json(&eta)?)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ncur_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn ncur_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ncur_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
