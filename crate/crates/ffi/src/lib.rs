//! C ABI over the fhplab core.
//!
//! Families are opaque `FhpFamily` handles created by the `fhp_family_*`
//! constructors and released with `fhp_family_free`. Every fallible call
//! returns an `FhpStatus`; on failure `fhp_last_error` describes the problem
//! for the calling thread. Strings handed out by the library must be released
//! with `fhp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fhplab::constructs;
use fhplab::fraclp::{intersection_number, transversal_report};
use fhplab::io::{emit_family, parse_family_str};
use fhplab::rational::parse_q;
use fhplab::setfam::{check_fhp_instance, cons_k, max_intersecting};
use fhplab::{Error, SetFamily};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FhpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Cap = 4,
    Overflow = 5,
    Panic = 6,
}

/// Opaque handle to a set family.
pub struct FhpFamily {
    inner: SetFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FhpStatus {
    match e {
        Error::Parse(_) | Error::Formula(_) => FhpStatus::Parse,
        Error::Cap { .. } => FhpStatus::Cap,
        Error::Overflow(_) => FhpStatus::Overflow,
        _ => FhpStatus::InvalidArgument,
    }
}

// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (FhpStatus, String)>) -> FhpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FhpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FhpStatus::Panic
        }
    }
}

fn fail(e: Error) -> (FhpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (FhpStatus, String) {
    (FhpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FhpStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (FhpStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn family<'a>(f: *const FhpFamily) -> Result<&'a SetFamily, (FhpStatus, String)> {
    f.as_ref().map(|h| &h.inner).ok_or_else(|| null("family"))
}

unsafe fn put_family(out: *mut *mut FhpFamily, fam: SetFamily) {
    *out = Box::into_raw(Box::new(FhpFamily { inner: fam }));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (FhpStatus, String)> {
    let c = CString::new(s).map_err(|_| (FhpStatus::Panic, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fhp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fhp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a family file (`{"ground": n, "sets": [[..], ..]}`).
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fhp_family_from_json(json: *const c_char, out: *mut *mut FhpFamily) -> FhpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let parsed = parse_family_str(text).map_err(fail)?;
        put_family(out, parsed.family);
        Ok(())
    })
}

/// Builds a family from concatenated member lists: member i holds
/// `lengths[i]` consecutive entries of `elements`.
///
/// # Safety
/// `elements` must hold the sum of `lengths` entries and `lengths` must hold
/// `members` entries; either may be null when empty.
#[no_mangle]
pub unsafe extern "C" fn fhp_family_from_lists(
    ground: usize,
    elements: *const usize,
    lengths: *const usize,
    members: usize,
    out: *mut *mut FhpFamily,
) -> FhpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if members > 0 && lengths.is_null() {
            return Err(null("lengths"));
        }
        let lens: &[usize] = if members == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(lengths, members)
        };
        let total = lens
            .iter()
            .try_fold(0usize, |a, &b| a.checked_add(b))
            .ok_or_else(|| fail(Error::Overflow("member lengths".into())))?;
        if total > 0 && elements.is_null() {
            return Err(null("elements"));
        }
        let flat: &[usize] = if total == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(elements, total)
        };
        let mut sets = Vec::with_capacity(members);
        let mut at = 0;
        for &len in lens {
            sets.push(flat[at..at + len].to_vec());
            at += len;
        }
        put_family(out, SetFamily::new(ground, &sets).map_err(fail)?);
        Ok(())
    })
}

/// The grid family S_{i,j} = {f : f(i) = j} over functions [k] -> [m].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fhp_family_tp2_grid(k: usize, m: usize, out: *mut *mut FhpFamily) -> FhpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let fam = constructs::build_tp2_grid(k, m, constructs::DEFAULT_CAP).map_err(fail)?;
        put_family(out, fam);
        Ok(())
    })
}

/// Releases a family; null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fhp_family_free(f: *mut FhpFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of members and ground-set size.
///
/// # Safety
/// Pointers must be valid; `members` and `ground` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fhp_family_shape(f: *const FhpFamily, members: *mut usize, ground: *mut usize) -> FhpStatus {
    guard(|| {
        let fam = family(f)?;
        if members.is_null() || ground.is_null() {
            return Err(null("output"));
        }
        *members = fam.len();
        *ground = fam.ground_size();
        Ok(())
    })
}

/// Number of k-element index subsets with a common point, and C(n, k).
///
/// # Safety
/// Pointers must be valid; `count` and `total` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fhp_cons_k(f: *const FhpFamily, k: usize, count: *mut u64, total: *mut u64) -> FhpStatus {
    guard(|| {
        let fam = family(f)?;
        if count.is_null() || total.is_null() {
            return Err(null("output"));
        }
        let r = cons_k(fam, k).map_err(fail)?;
        let narrow = |v: u128| u64::try_from(v).map_err(|_| fail(Error::Overflow("cons_k count".into())));
        *count = narrow(r.cons_count)?;
        *total = narrow(r.total)?;
        Ok(())
    })
}

/// Largest number of members sharing a point, and the family size.
///
/// # Safety
/// Pointers must be valid; `depth` and `members` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fhp_max_depth(f: *const FhpFamily, depth: *mut usize, members: *mut usize) -> FhpStatus {
    guard(|| {
        let fam = family(f)?;
        if depth.is_null() || members.is_null() {
            return Err(null("output"));
        }
        *depth = max_intersecting(fam).map_err(fail)?.size;
        *members = fam.len();
        Ok(())
    })
}

/// FHP report for (k, alpha) as JSON; `alpha` is a rational such as "1/2".
///
/// # Safety
/// Pointers must be valid; release `*out_json` with `fhp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fhp_check_fhp_json(
    f: *const FhpFamily,
    k: usize,
    alpha: *const c_char,
    out_json: *mut *mut c_char,
) -> FhpStatus {
    guard(|| {
        let fam = family(f)?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let alpha = parse_q(read_str(alpha, "alpha")?).map_err(fail)?;
        let r = check_fhp_instance(fam, k, &alpha).map_err(fail)?;
        put_string(out_json, serde_json::to_string(&r).expect("report serializes"))
    })
}

/// Intersection number and fractional transversal as JSON.
///
/// # Safety
/// Pointers must be valid; release `*out_json` with `fhp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fhp_lp_json(f: *const FhpFamily, transversal_cap: usize, out_json: *mut *mut c_char) -> FhpStatus {
    guard(|| {
        let fam = family(f)?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let i = intersection_number(fam).map_err(fail)?;
        let t = transversal_report(fam, transversal_cap).map_err(fail)?;
        let v = serde_json::json!({ "intersection_number": i, "transversal": t });
        put_string(out_json, v.to_string())
    })
}

/// The family in the family-file JSON format.
///
/// # Safety
/// Pointers must be valid; release `*out_json` with `fhp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn fhp_family_to_json(f: *const FhpFamily, out_json: *mut *mut c_char) -> FhpStatus {
    guard(|| {
        let fam = family(f)?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        put_string(out_json, emit_family(fam, None))
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fhp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
