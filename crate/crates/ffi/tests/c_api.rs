use std::ffi::{CStr, CString};
use std::ptr;

use metamorph_ffi::*;

fn fixture(name: &str) -> CString {
    let path = format!("{}/../core/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mm_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn subsumption_through_the_bundled_taxonomy() {
    let t = mm_taxonomy_bundled();
    assert!(!t.is_null());
    let mut out = false;
    let (torso, core) = (CString::new("Torso").unwrap(), CString::new("CoreSubdivision").unwrap());
    unsafe {
        assert_eq!(mm_is_subsumed_by(t, torso.as_ptr(), core.as_ptr(), &mut out), MmStatus::Ok);
        assert!(out);
        assert_eq!(mm_is_subsumed_by(t, core.as_ptr(), torso.as_ptr(), &mut out), MmStatus::Ok);
        assert!(!out);
        let ghost = CString::new("Ghost").unwrap();
        assert_eq!(mm_is_subsumed_by(t, ghost.as_ptr(), core.as_ptr(), &mut out), MmStatus::Invalid);
        assert!(last_error().contains("Ghost"));
        assert_eq!(mm_is_subsumed_by(t, ptr::null(), core.as_ptr(), &mut out), MmStatus::NullArgument);
        mm_taxonomy_free(t);
    }
}

#[test]
fn distances_and_dot() {
    unsafe {
        let a = mm_morphology_from_json(fixture("rover.metamorph.json").as_ptr());
        let b = mm_morphology_from_json(fixture("quadruped.metamorph.json").as_ptr());
        assert!(!a.is_null() && !b.is_null());
        let t = mm_taxonomy_bundled();
        let mut errors = usize::MAX;
        assert_eq!(mm_validate(t, a, &mut errors), MmStatus::Ok);
        assert_eq!(errors, 0);

        let (mut same, mut j) = (0.0, 0.0);
        assert_eq!(mm_jaccard_index(a, a, false, &mut same), MmStatus::Ok);
        assert_eq!(same, 1.0);
        assert_eq!(mm_jaccard_index(a, b, true, &mut j), MmStatus::Ok);
        assert!((0.0..1.0).contains(&j));

        let (mut exact_value, mut ub, mut is_exact) = (0.0, 0.0, false);
        assert_eq!(mm_ged(a, b, true, 0, &mut exact_value, &mut is_exact), MmStatus::Ok);
        assert!(is_exact);
        assert_eq!(mm_ged(a, b, false, 0, &mut ub, ptr::null_mut()), MmStatus::Ok);
        assert!(ub >= exact_value);

        let dot = mm_to_dot(a);
        assert!(CStr::from_ptr(dot).to_str().unwrap().starts_with("graph {\n"));
        mm_string_free(dot);

        mm_morphology_free(a);
        mm_morphology_free(b);
        mm_taxonomy_free(t);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        assert!(mm_morphology_from_json(fixture("malformed.metamorph.json").as_ptr()).is_null());
        assert!(last_error().contains("line"));
        let m = mm_morphology_from_json(fixture("dangling.metamorph.json").as_ptr());
        assert!(!m.is_null());
        let t = mm_taxonomy_bundled();
        let mut errors = 0;
        assert_eq!(mm_validate(t, m, &mut errors), MmStatus::Invalid);
        assert!(errors > 0);
        assert!(last_error().contains("ghost"));
        let mut v = 0.0;
        assert_eq!(mm_ged(m, m, true, 0, &mut v, ptr::null_mut()), MmStatus::Invalid);
        assert!(mm_to_dot(ptr::null()).is_null());
        mm_morphology_free(m);
        mm_taxonomy_free(t);
        mm_morphology_free(ptr::null_mut());
        mm_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_valid_c() {
    let header = format!("{}/include/metamorph.h", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["mm_taxonomy_load", "mm_is_subsumed_by", "mm_validate", "mm_jaccard_index", "mm_ged", "mm_to_dot", "mm_string_free"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // a C compiler is optional; when present the header must compile on its own
    if let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", &header]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
