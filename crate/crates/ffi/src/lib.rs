//! C ABI over the metamorph library.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `*_free`. Fallible calls return an [`MmStatus`]; on anything but `MM_STATUS_OK`
//! the message is available from [`mm_last_error`] on the same thread.
//! Strings returned by the library are released with [`mm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metamorph::distance::{distance, jaccard_index, Budget, CostModel, Metric};
use metamorph::interchange;
use metamorph::morphology::{feature_set, validate, FeatureProfile, RobotMorphology};
use metamorph::taxonomy::{self, load_taxonomy, Taxonomy, TaxonomyFormat};

/// Opaque taxonomy handle.
pub struct MmTaxonomy(Taxonomy);

/// Opaque robot description handle.
pub struct MmMorphology(RobotMorphology);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The description violates the taxonomy or graph rules.
    Invalid = 4,
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    // interior NULs would truncate the message; replace them
    let text = message.into().replace('\0', "\u{fffd}");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("NULs replaced"));
}

fn fail(status: MmStatus, message: impl Into<String>) -> MmStatus {
    set_error(message);
    status
}

/// Runs `f`, turning a panic into `MM_STATUS_INTERNAL`.
fn guard(f: impl FnOnce() -> MmStatus) -> MmStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(MmStatus::Internal, "internal panic"))
}

/// Like [`guard`] for constructors: null on failure or panic.
fn guard_ptr<T>(f: impl FnOnce() -> Result<T, (MmStatus, String)>) -> *mut T {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => Box::into_raw(Box::new(v)),
        Ok(Err((_, message))) => {
            set_error(message);
            ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            ptr::null_mut()
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (MmStatus, String)> {
    if p.is_null() {
        return Err((MmStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (MmStatus::InvalidUtf8, e.to_string()))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err((status, message)) => return fail(status, message),
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(MmStatus::NullArgument, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Message for the last failed call on this thread; empty if none.
/// Valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn mm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The taxonomy bundled with the library. Never null.
#[no_mangle]
pub extern "C" fn mm_taxonomy_bundled() -> *mut MmTaxonomy {
    guard_ptr(|| Ok(MmTaxonomy(taxonomy::bundled())))
}

/// Parses a taxonomy from canonical JSON, or the Turtle subset when
/// `turtle` is true. Null on error.
///
/// # Safety
/// `source` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mm_taxonomy_load(source: *const c_char, turtle: bool) -> *mut MmTaxonomy {
    guard_ptr(|| {
        let s = text(source)?;
        let format = if turtle { TaxonomyFormat::TurtleSubset } else { TaxonomyFormat::CanonicalJson };
        load_taxonomy(s, format)
            .map(MmTaxonomy)
            .map_err(|e| (MmStatus::ParseError, e.to_string()))
    })
}

/// # Safety
/// `t` must come from `mm_taxonomy_*` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mm_taxonomy_free(t: *mut MmTaxonomy) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Writes whether concept `a` is subsumed by concept `b`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mm_is_subsumed_by(
    t: *const MmTaxonomy,
    a: *const c_char,
    b: *const c_char,
    out: *mut bool,
) -> MmStatus {
    guard(|| {
        non_null!(t, out);
        let (a, b) = (try_status!(text(a)), try_status!(text(b)));
        match (*t).0.is_subsumed_by(a, b) {
            Ok(v) => {
                *out = v;
                MmStatus::Ok
            }
            Err(e) => fail(MmStatus::Invalid, e.to_string()),
        }
    })
}

/// Parses one robot record in canonical JSON. Null on error.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mm_morphology_from_json(json: *const c_char) -> *mut MmMorphology {
    guard_ptr(|| {
        let s = text(json)?;
        interchange::from_json(s)
            .map(MmMorphology)
            .map_err(|e| (MmStatus::ParseError, e.to_string()))
    })
}

/// # Safety
/// `m` must come from `mm_morphology_from_json` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mm_morphology_free(m: *mut MmMorphology) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Validates `m` against `t`, writing the number of errors. Returns
/// `MM_STATUS_INVALID` with the findings as the last error when there are any.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mm_validate(t: *const MmTaxonomy, m: *const MmMorphology, error_count: *mut usize) -> MmStatus {
    guard(|| {
        non_null!(t, m, error_count);
        let report = validate(&(*t).0, &(*m).0);
        *error_count = report.errors.len();
        if report.is_valid() {
            MmStatus::Ok
        } else {
            let lines: Vec<String> = report.errors.iter().map(|f| f.to_string()).collect();
            fail(MmStatus::Invalid, lines.join("\n"))
        }
    })
}

/// Jaccard index over subdivision concepts, or over every feature when `full`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mm_jaccard_index(
    a: *const MmMorphology,
    b: *const MmMorphology,
    full: bool,
    out: *mut f64,
) -> MmStatus {
    guard(|| {
        non_null!(a, b, out);
        let profile = if full { FeatureProfile::Full } else { FeatureProfile::ConceptsOnly };
        match (feature_set(&(*a).0, profile), feature_set(&(*b).0, profile)) {
            (Ok(fa), Ok(fb)) => {
                *out = jaccard_index(&fa, &fb);
                MmStatus::Ok
            }
            (Err(e), _) | (_, Err(e)) => fail(MmStatus::Invalid, e.to_string()),
        }
    })
}

/// Unit-cost edit distance with concept labels. With `exact`, searches
/// exactly up to `max_states` generated states (0 means the default) and
/// reports through `out_exact` whether the value is optimal; otherwise
/// computes the assignment upper bound.
///
/// # Safety
/// Pointers must be valid; `out_exact` may be null.
#[no_mangle]
pub unsafe extern "C" fn mm_ged(
    a: *const MmMorphology,
    b: *const MmMorphology,
    exact: bool,
    max_states: u64,
    out_value: *mut f64,
    out_exact: *mut bool,
) -> MmStatus {
    guard(|| {
        non_null!(a, b, out_value);
        let mut budget = Budget::default();
        if max_states > 0 {
            budget.max_states = max_states;
        }
        let metric = if exact { Metric::GedExact } else { Metric::GedUpperBound };
        match distance(&(*a).0, &(*b).0, metric, &CostModel::default(), budget) {
            Ok(r) => {
                *out_value = r.value;
                if !out_exact.is_null() {
                    *out_exact = r.exact;
                }
                MmStatus::Ok
            }
            Err(e) => fail(MmStatus::Invalid, e.to_string()),
        }
    })
}

/// Deterministic Graphviz DOT text, or null on error. Free with `mm_string_free`.
///
/// # Safety
/// `m` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mm_to_dot(m: *const MmMorphology) -> *mut c_char {
    if m.is_null() {
        set_error("`m` is null");
        return ptr::null_mut();
    }
    match catch_unwind(AssertUnwindSafe(|| interchange::to_dot(&(*m).0))) {
        Ok(Ok(dot)) => CString::new(dot).map_or(ptr::null_mut(), CString::into_raw),
        Ok(Err(e)) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
