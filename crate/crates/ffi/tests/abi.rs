use std::ffi::{CStr, CString};
use std::ptr;

use hilbseries_ffi::*;

fn last_error() -> String {
    let p = hs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { hs_string_free(p) };
    s
}

#[test]
fn algebra_and_module_dims() {
    let text = CString::new("field Q\ngen x:1 y:1\nrel x*y - y*x\nmodule K\nmgen e:0\nmrel e*x; e*y\n").unwrap();
    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { hs_document_parse(text.as_ptr(), &mut doc) }, HsStatus::Ok);
    assert_eq!(unsafe { hs_document_module_count(doc) }, 1);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { hs_algebra_dims(doc, 6, &mut s) }, HsStatus::Ok);
    assert_eq!(unsafe { hs_series_len(s) }, 7);
    let mut c = 0i64;
    assert_eq!(unsafe { hs_series_coeff(s, 5, &mut c) }, HsStatus::Ok);
    assert_eq!(c, 6);
    assert_eq!(unsafe { hs_series_coeff(s, 7, &mut c) }, HsStatus::OutOfRange);
    assert_eq!(take_string(unsafe { hs_series_to_string(s) }), "1 2 3 4 5 6 7");

    let name = CString::new("K").unwrap();
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { hs_module_dims(doc, name.as_ptr(), 6, &mut k) }, HsStatus::Ok);
    assert_eq!(take_string(unsafe { hs_series_to_string(k) }), "1 0 0 0 0 0 0");

    let mut ord = 0;
    assert_eq!(unsafe { hs_series_lex_compare(s, k, &mut ord) }, HsStatus::Ok);
    assert_eq!(ord, 1);

    let missing = CString::new("M").unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { hs_module_dims(doc, missing.as_ptr(), 3, &mut none) }, HsStatus::Input);
    assert!(none.is_null());
    assert!(last_error().contains("M"));

    unsafe {
        hs_series_free(s);
        hs_series_free(k);
        hs_document_free(doc);
        hs_series_free(ptr::null_mut());
        hs_document_free(ptr::null_mut());
        hs_string_free(ptr::null_mut());
    }
}

#[test]
fn status_codes() {
    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { hs_document_parse(ptr::null(), &mut doc) }, HsStatus::NullPointer);
    let bad = CString::new("field Q\ngen x:1 y:3\nrel x*x + y\n").unwrap();
    assert_eq!(unsafe { hs_document_parse(bad.as_ptr(), &mut doc) }, HsStatus::Input);
    assert!(last_error().to_lowercase().contains("homogeneous"));

    let big = [i64::MAX, i64::MAX];
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(hs_series_new(big.as_ptr(), 2, &mut a), HsStatus::Ok);
        assert_eq!(hs_series_new(big.as_ptr(), 1, &mut b), HsStatus::Ok);
        let mut ord = 0;
        assert_eq!(hs_series_lex_compare(a, b, &mut ord), HsStatus::Input);
        hs_series_free(a);
        hs_series_free(b);
    }
}

#[test]
fn run_command_json_matches_cli() {
    let dir = scratch_dir();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    std::fs::write(&a, "1,3,0\n").unwrap();
    std::fs::write(&b, "1\n2\n9\n").unwrap();
    let args: Vec<CString> =
        ["cmp", a.to_str().unwrap(), b.to_str().unwrap()].iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs: Vec<_> = args.iter().map(|a| a.as_ptr()).collect();
    let mut code = -1;
    let out = take_string(unsafe { hs_run_command_json(ptrs.as_ptr(), ptrs.len(), &mut code) });
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "hilbseries/1");
    assert_eq!(v["result"]["text"], "GREATER (lex, first difference at degree 1)");

    let (_, direct) = hilbseries::cli::run_json(["cmp", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out, direct);

    let bogus = [CString::new("bogus").unwrap()];
    let ptrs: Vec<_> = bogus.iter().map(|a| a.as_ptr()).collect();
    let out = take_string(unsafe { hs_run_command_json(ptrs.as_ptr(), 1, &mut code) });
    assert_eq!(code, 2);
    assert!(out.contains("\"exit_code\": 2"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hilbseries.h")).unwrap();
    for f in [
        "hs_version",
        "hs_last_error",
        "hs_document_parse",
        "hs_document_free",
        "hs_document_module_count",
        "hs_algebra_dims",
        "hs_module_dims",
        "hs_series_new",
        "hs_series_free",
        "hs_series_len",
        "hs_series_coeff",
        "hs_series_to_string",
        "hs_series_lex_compare",
        "hs_run_command_json",
        "hs_string_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    let version = unsafe { CStr::from_ptr(hs_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

fn scratch_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("hs-ffi-{}-{:?}", std::process::id(), std::thread::current().id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
