//! C ABI over `hilbseries`.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `hs_*_free`. Fallible calls return an [`HsStatus`]; on failure the message
//! is kept per thread and read with [`hs_last_error`]. Strings returned as
//! `char *` are owned by the caller and released with [`hs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hilbseries::freealg::{parse_presentation, Document};
use hilbseries::groebner::{algebra_dims, module_dims};
use hilbseries::series::{LexOrder, TruncatedSeries};
use hilbseries::Error;
use num_traits::ToPrimitive;

/// Status codes. The first four agree with the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    Verification = 1,
    Input = 2,
    Limit = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Overflow = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A parsed input document: algebra, modules, ideals, witnesses.
pub struct HsDocument(Document);

/// A truncated power series with integer coefficients.
pub struct HsSeries(TruncatedSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: HsStatus, msg: impl Into<String>) -> HsStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> HsStatus {
    let status = match e.exit_code() {
        1 => HsStatus::Verification,
        3 => HsStatus::Limit,
        _ => HsStatus::Input,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting panics into `HsStatus::Panic`.
fn guarded(f: impl FnOnce() -> HsStatus) -> HsStatus {
    clear_error();
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(HsStatus::Panic, "internal panic"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, HsStatus> {
    if p.is_null() {
        return Err(fail(HsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(HsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn hs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next `hs_*` call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn hs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a presentation document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_document_parse(text: *const c_char, out: *mut *mut HsDocument) -> HsStatus {
    guarded(|| {
        if out.is_null() {
            return fail(HsStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match str_arg(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_presentation(text) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(HsDocument(d)));
                HsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `doc` must be NULL or a handle from [`hs_document_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hs_document_free(doc: *mut HsDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Number of modules declared in the document.
///
/// # Safety
/// `doc` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn hs_document_module_count(doc: *const HsDocument) -> usize {
    doc.as_ref().map_or(0, |d| d.0.modules.len())
}

/// Hilbert function of the algebra in degrees 0..=n.
///
/// # Safety
/// `doc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_algebra_dims(doc: *const HsDocument, n: u32, out: *mut *mut HsSeries) -> HsStatus {
    guarded(|| {
        let (Some(d), false) = (doc.as_ref(), out.is_null()) else {
            return fail(HsStatus::NullPointer, "doc or out is null");
        };
        *out = ptr::null_mut();
        match algebra_dims(&d.0.algebra, n) {
            Ok(v) => {
                *out = Box::into_raw(Box::new(HsSeries(TruncatedSeries::new(v))));
                HsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Hilbert function of the named module in degrees 0..=n.
///
/// # Safety
/// `doc` must be a live handle, `name` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hs_module_dims(
    doc: *const HsDocument,
    name: *const c_char,
    n: u32,
    out: *mut *mut HsSeries,
) -> HsStatus {
    guarded(|| {
        let (Some(d), false) = (doc.as_ref(), out.is_null()) else {
            return fail(HsStatus::NullPointer, "doc or out is null");
        };
        *out = ptr::null_mut();
        let name = match str_arg(name, "name") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(m) = d.0.module(name) else {
            return fail(HsStatus::Input, format!("no module named `{name}`"));
        };
        match module_dims(m, n) {
            Ok((v, _)) => {
                *out = Box::into_raw(Box::new(HsSeries(TruncatedSeries::from_usize(&v))));
                HsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Build a series from `len` coefficients.
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hs_series_new(coeffs: *const i64, len: usize, out: *mut *mut HsSeries) -> HsStatus {
    guarded(|| {
        if out.is_null() || (coeffs.is_null() && len > 0) {
            return fail(HsStatus::NullPointer, "coeffs or out is null");
        }
        let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(coeffs, len) };
        *out = Box::into_raw(Box::new(HsSeries(TruncatedSeries::from_i64(slice))));
        HsStatus::Ok
    })
}

/// # Safety
/// `s` must be NULL or a live series handle.
#[no_mangle]
pub unsafe extern "C" fn hs_series_free(s: *mut HsSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of stored coefficients (truncation + 1); 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live series handle.
#[no_mangle]
pub unsafe extern "C" fn hs_series_len(s: *const HsSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.coeffs().len())
}

/// Coefficient of z^k. Fails with `HS_STATUS_OVERFLOW` if it does not fit.
///
/// # Safety
/// `s` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hs_series_coeff(s: *const HsSeries, k: usize, out: *mut i64) -> HsStatus {
    guarded(|| {
        let (Some(s), false) = (s.as_ref(), out.is_null()) else {
            return fail(HsStatus::NullPointer, "series or out is null");
        };
        let Some(c) = s.0.coeffs().get(k) else {
            return fail(HsStatus::OutOfRange, format!("degree {k} beyond truncation"));
        };
        match c.to_i64() {
            Some(v) => {
                *out = v;
                HsStatus::Ok
            }
            None => fail(HsStatus::Overflow, format!("coefficient {c} does not fit in 64 bits")),
        }
    })
}

/// Space-separated coefficients; free with [`hs_string_free`]. NULL on a
/// NULL handle.
///
/// # Safety
/// `s` must be NULL or a live series handle.
#[no_mangle]
pub unsafe extern "C" fn hs_series_to_string(s: *const HsSeries) -> *mut c_char {
    s.as_ref().map_or(ptr::null_mut(), |s| into_c_string(s.0.to_string()))
}

/// Lexicographic comparison: `*out` is -1, 0 or 1. Series must share a
/// truncation.
///
/// # Safety
/// `a`, `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hs_series_lex_compare(a: *const HsSeries, b: *const HsSeries, out: *mut i32) -> HsStatus {
    guarded(|| {
        let (Some(a), Some(b), false) = (a.as_ref(), b.as_ref(), out.is_null()) else {
            return fail(HsStatus::NullPointer, "argument is null");
        };
        match a.0.lex_compare(&b.0) {
            Ok(v) => {
                *out = match v.order {
                    LexOrder::Less => -1,
                    LexOrder::EqualUpToTruncation => 0,
                    LexOrder::Greater => 1,
                };
                HsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Run a CLI command (arguments without the program name) and return its
/// JSON document. `*exit_code`, if non-NULL, receives the CLI exit code.
/// Returns NULL only on invalid arguments; free with [`hs_string_free`].
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn hs_run_command_json(
    argv: *const *const c_char,
    argc: usize,
    exit_code: *mut i32,
) -> *mut c_char {
    let mut result = ptr::null_mut();
    let status = guarded(|| {
        if argv.is_null() && argc > 0 {
            return fail(HsStatus::NullPointer, "argv is null");
        }
        let mut args = Vec::with_capacity(argc);
        for i in 0..argc {
            match str_arg(*argv.add(i), "argument") {
                Ok(a) => args.push(a.to_string()),
                Err(s) => return s,
            }
        }
        let (code, json) = hilbseries::cli::run_json(args);
        if !exit_code.is_null() {
            *exit_code = code;
        }
        result = into_c_string(json);
        HsStatus::Ok
    });
    if status != HsStatus::Ok && !exit_code.is_null() {
        *exit_code = status as i32;
    }
    result
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
