//! C ABI for the cluster-torsor toolkit.
//!
//! Seeds are passed as opaque handles. Every call returns a [`CtStatus`];
//! results come back through out-pointers as JSON strings owned by the
//! caller, to be released with [`ct_string_free`]. After a non-OK status the
//! message is available from [`ct_last_error`] until the next failing call
//! on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cluster_torsor::atlas::picard_group;
use cluster_torsor::scattering::complete_to_order;
use cluster_torsor::theta::{generic_endpoint, theta};
use cluster_torsor::torsor::{trial_rng, verify_utor, FiberSpec};
use cluster_torsor::Seed;
use serde_json::json;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    NullPointer = 3,
    Panic = 4,
}

/// Opaque seed handle.
pub struct CtSeed {
    seed: Seed,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<CtStatus, (CtStatus, String)>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CtStatus::Panic
        }
    }
}

fn invalid(e: cluster_torsor::Error) -> (CtStatus, String) {
    (CtStatus::InvalidInput, e.to_string())
}

fn null(name: &str) -> (CtStatus, String) {
    (CtStatus::NullPointer, format!("{name} is null"))
}

unsafe fn seed_ref<'a>(handle: *const CtSeed) -> Result<&'a Seed, (CtStatus, String)> {
    handle.as_ref().map(|h| &h.seed).ok_or_else(|| null("seed"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (CtStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (CtStatus::Panic, "interior NUL in output".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn slice<'a, T>(data: *const T, len: usize) -> Result<&'a [T], (CtStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null("array"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

/// Message of the last failing call on this thread, or NULL. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn ct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a seed from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_seed_from_json(json: *const c_char, out: *mut *mut CtSeed) -> CtStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| (CtStatus::InvalidInput, "json is not UTF-8".to_string()))?;
        let seed = Seed::from_json(text).map_err(invalid)?;
        *out = Box::into_raw(Box::new(CtSeed { seed }));
        Ok(CtStatus::Ok)
    })
}

/// Releases a seed handle. NULL is ignored.
///
/// # Safety
/// `seed` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ct_seed_free(seed: *mut CtSeed) {
    if !seed.is_null() {
        drop(Box::from_raw(seed));
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the seed as JSON.
///
/// # Safety
/// `seed` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_seed_to_json(seed: *const CtSeed, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let seed = seed_ref(seed)?;
        write_string(out, seed.to_json())?;
        Ok(CtStatus::Ok)
    })
}

/// Checks the seed axioms; the list of violations is written to `out`.
/// Returns `VerificationFailed` when there is at least one.
///
/// # Safety
/// `seed` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_seed_validate(seed: *const CtSeed, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let seed = seed_ref(seed)?;
        let violations: Vec<String> = seed.validate().iter().map(ToString::to_string).collect();
        let status = if violations.is_empty() { CtStatus::Ok } else { CtStatus::VerificationFailed };
        write_string(out, json!({ "violations": violations }).to_string())?;
        Ok(status)
    })
}

/// Mutates along `path` (index labels) and returns a new handle.
///
/// # Safety
/// `seed` must be a live handle; `path` must hold `len` entries; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_seed_mutate(seed: *const CtSeed, path: *const usize, len: usize, out: *mut *mut CtSeed) -> CtStatus {
    guard(|| {
        let seed = seed_ref(seed)?;
        let path = slice(path, len)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let end = seed.mutate_path(path).map_err(invalid)?;
        *out = Box::into_raw(Box::new(CtSeed { seed: end }));
        Ok(CtStatus::Ok)
    })
}

/// The Picard group of the partially compactified `X`-space, e.g. `"Z/2"`.
///
/// # Safety
/// `seed` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_picard_group(seed: *const CtSeed, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let seed = seed_ref(seed)?;
        seed.ensure_valid().map_err(invalid)?;
        write_string(out, picard_group(seed).to_string())?;
        Ok(CtStatus::Ok)
    })
}

/// Randomized torsor identity checks at the default fiber point; writes the
/// JSON report.
///
/// # Safety
/// `seed` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_verify_utor(seed: *const CtSeed, trials: usize, rng_seed: u64, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let seed = seed_ref(seed)?;
        seed.ensure_valid().map_err(invalid)?;
        let spec = FiberSpec::generic(seed);
        let report = verify_utor(seed, trials, &spec, &mut trial_rng(rng_seed), false).map_err(invalid)?;
        let status = if report.pass { CtStatus::Ok } else { CtStatus::VerificationFailed };
        write_string(out, report.to_json())?;
        Ok(status)
    })
}

/// The theta function of the principal exponent `q`, rendered as text.
///
/// # Safety
/// `seed` must be a live handle; `q` must hold `len` entries; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ct_theta(seed: *const CtSeed, q: *const i64, len: usize, order: u32, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let seed = seed_ref(seed)?;
        let q = slice(q, len)?;
        seed.ensure_valid().map_err(invalid)?;
        let d = complete_to_order(seed, order).map_err(invalid)?;
        let endpoint = generic_endpoint(&d, [1, 1], 0);
        let t = theta(seed, &d, q, &endpoint).map_err(invalid)?;
        let value = json!({"value": t.value.to_string(), "exact": t.exact, "broken_lines": t.broken_lines});
        write_string(out, value.to_string())?;
        Ok(CtStatus::Ok)
    })
}
