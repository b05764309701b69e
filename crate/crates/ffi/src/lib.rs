//! C ABI over the ardiac library.
//!
//! Every function returns an [`ArdiacStatus`]. On failure a message is kept
//! per thread and can be read with [`ardiac_last_error`]. Strings handed out
//! through `out` parameters are owned by the caller and must be released with
//! [`ardiac_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ardiac::eval::freeman::{FreemanError, FreemanTable};
use ardiac::eval::metrics;
use ardiac::normalizer::LetterMap;
use ardiac::{DiacritizedWord, Normalizer, ValidationProfile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdiacStatus {
    Ok = 0,
    NullArg = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EmptyGloss = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArdiacProfile {
    Lemma = 0,
    Surface = 1,
}

/// Opaque normalizer handle.
pub struct ArdiacNormalizer {
    inner: Normalizer,
}

/// Opaque Freeman class table handle.
pub struct ArdiacFreeman {
    inner: FreemanTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ArdiacStatus, String);

impl Failure {
    fn parse(e: impl std::fmt::Display) -> Failure {
        Failure(ArdiacStatus::ParseError, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ArdiacStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ArdiacStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal error");
            ArdiacStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ArdiacStatus::NullArg, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ArdiacStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn read_word(p: *const c_char, name: &str) -> Result<DiacritizedWord, Failure> {
    ardiac::parse_arabic(read_str(p, name)?).map_err(Failure::parse)
}

fn check_out<T>(p: *mut T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(ArdiacStatus::NullArg, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(ArdiacStatus::Internal, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ardiac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ardiac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Arabic script to HSB.
///
/// # Safety
/// `arabic` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_to_hsb(arabic: *const c_char, out: *mut *mut c_char) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        let w = read_word(arabic, "arabic")?;
        write_string(out, ardiac::to_hsb(&w).into_string())
    })
}

/// HSB to Arabic script.
///
/// # Safety
/// `hsb` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_from_hsb(hsb: *const c_char, out: *mut *mut c_char) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        let w = ardiac::from_hsb(read_str(hsb, "hsb")?).map_err(Failure::parse)?;
        write_string(out, w.render())
    })
}

/// Remove all diacritic marks from any text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_strip_diacritics(text: *const c_char, out: *mut *mut c_char) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        write_string(out, ardiac::script::strip_marks_str(read_str(text, "text")?))
    })
}

/// Validate a word. `out_count` receives the number of violations and
/// `out_report` (if not NULL) one `code<TAB>position<TAB>message` line each.
///
/// # Safety
/// `word` must be a NUL-terminated string; non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_validate(
    word: *const c_char,
    profile: ArdiacProfile,
    out_count: *mut usize,
    out_report: *mut *mut c_char,
) -> ArdiacStatus {
    guard(|| {
        check_out(out_count, "out_count")?;
        let w = read_word(word, "word")?;
        let profile = match profile {
            ArdiacProfile::Lemma => ValidationProfile::Lemma,
            ArdiacProfile::Surface => ValidationProfile::Surface,
        };
        let violations = ardiac::validate(&w, profile);
        *out_count = violations.len();
        if !out_report.is_null() {
            write_string(out_report, ardiac::validator::report(&violations))?;
        }
        Ok(())
    })
}

/// Normalizer with the bundled foreign-letter map. Free with [`ardiac_normalizer_free`].
#[no_mangle]
pub extern "C" fn ardiac_normalizer_new() -> *mut ArdiacNormalizer {
    Box::into_raw(Box::new(ArdiacNormalizer {
        inner: Normalizer::bundled().clone(),
    }))
}

/// Normalizer with a custom foreign-letter map (TSV of `U+XXXX<TAB>U+XXXX`).
///
/// # Safety
/// `tsv` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_normalizer_from_tsv(
    tsv: *const c_char,
    out: *mut *mut ArdiacNormalizer,
) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        let map = LetterMap::from_tsv(read_str(tsv, "tsv")?).map_err(Failure::parse)?;
        *out = Box::into_raw(Box::new(ArdiacNormalizer {
            inner: Normalizer::new(map),
        }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not have been freed already. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ardiac_normalizer_free(h: *mut ArdiacNormalizer) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Repair a word. `out_trace` (if not NULL) receives the step trace, e.g. `S3@0,S6@2`.
///
/// # Safety
/// `h` must be a live handle; `word` a NUL-terminated string; non-NULL out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_normalize(
    h: *const ArdiacNormalizer,
    word: *const c_char,
    out_word: *mut *mut c_char,
    out_trace: *mut *mut c_char,
) -> ArdiacStatus {
    guard(|| {
        if h.is_null() {
            return Err(Failure(ArdiacStatus::NullArg, "normalizer is null".into()));
        }
        check_out(out_word, "out_word")?;
        let w = read_word(word, "word")?;
        let r = (*h).inner.normalize(&w);
        if !out_trace.is_null() {
            write_string(out_trace, r.trace.to_string())?;
        }
        write_string(out_word, r.word.render())
    })
}

/// Codepoint edit distance.
///
/// # Safety
/// Both words must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_edit_distance(
    prediction: *const c_char,
    reference: *const c_char,
    out: *mut usize,
) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        let (p, r) = (read_word(prediction, "prediction")?, read_word(reference, "reference")?);
        *out = metrics::edit_distance(&p, &r);
        Ok(())
    })
}

/// # Safety
/// Both words must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_exact_match(
    prediction: *const c_char,
    reference: *const c_char,
    out: *mut bool,
) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        let (p, r) = (read_word(prediction, "prediction")?, read_word(reference, "reference")?);
        *out = metrics::exact_match(&p, &r);
        Ok(())
    })
}

/// Error class label such as `diac-only` or `letter-sub(j↔γ)`.
///
/// # Safety
/// Both words must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_classify_error(
    prediction: *const c_char,
    reference: *const c_char,
    out: *mut *mut c_char,
) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        let (p, r) = (read_word(prediction, "prediction")?, read_word(reference, "reference")?);
        write_string(out, metrics::classify_error(&p, &r).to_string())
    })
}

/// Spelling check of a lemma against its undiacritized input. `out_label`
/// (if not NULL) receives the transformation label.
///
/// # Safety
/// Both strings must be NUL-terminated; non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_check_integrity(
    input: *const c_char,
    lemma: *const c_char,
    out_ok: *mut bool,
    out_label: *mut *mut c_char,
) -> ArdiacStatus {
    guard(|| {
        check_out(out_ok, "out_ok")?;
        let input = read_str(input, "input")?;
        let lemma = read_word(lemma, "lemma")?;
        let report = ardiac::check_integrity(input, &lemma);
        *out_ok = report.ok;
        if !out_label.is_null() {
            write_string(out_label, report.label())?;
        }
        Ok(())
    })
}

/// Freeman table with the bundled classes. Free with [`ardiac_freeman_free`].
#[no_mangle]
pub extern "C" fn ardiac_freeman_new() -> *mut ArdiacFreeman {
    Box::into_raw(Box::new(ArdiacFreeman {
        inner: FreemanTable::bundled().clone(),
    }))
}

/// Freeman table from a class TSV.
///
/// # Safety
/// `tsv` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_freeman_from_tsv(tsv: *const c_char, out: *mut *mut ArdiacFreeman) -> ArdiacStatus {
    guard(|| {
        check_out(out, "out")?;
        let table = FreemanTable::from_tsv(read_str(tsv, "tsv")?).map_err(Failure::parse)?;
        *out = Box::into_raw(Box::new(ArdiacFreeman { inner: table }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not have been freed already. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ardiac_freeman_free(h: *mut ArdiacFreeman) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Similarity in [0, 1] between an undiacritized Arabic name and a Latin gloss.
///
/// # Safety
/// `h` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ardiac_freeman_similarity(
    h: *const ArdiacFreeman,
    arabic: *const c_char,
    gloss: *const c_char,
    out: *mut f64,
) -> ArdiacStatus {
    guard(|| {
        if h.is_null() {
            return Err(Failure(ArdiacStatus::NullArg, "freeman table is null".into()));
        }
        check_out(out, "out")?;
        let (arabic, gloss) = (read_str(arabic, "arabic")?, read_str(gloss, "gloss")?);
        *out = (*h).inner.similarity(arabic, gloss).map_err(|e| match e {
            FreemanError::EmptyGloss(_) => Failure(ArdiacStatus::EmptyGloss, e.to_string()),
        })?;
        Ok(())
    })
}
