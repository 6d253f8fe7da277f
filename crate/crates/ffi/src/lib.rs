//! C ABI over the `stackyfan` command layer.
//!
//! Every entry point takes a subcommand name (as on the command line) and a
//! JSON document, and produces an opaque [`SfResult`] holding the JSON payload
//! and diagnostics. Strings returned by the library are owned by the handle
//! they came from, or by the calling thread for [`sf_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stackyfan::cli::{self, Command, CommandResult, Options, Status};
use stackyfan::hodge::PositivityConvention;

/// Status codes. The first three agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    InvalidInput = 2,
    MathFailure = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    UnknownCommand = 6,
    Panic = 7,
}

/// Positivity convention for polarized Hodge structures.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfConvention {
    ConjugateFirst = 0,
    ConjugateSecond = 1,
}

/// Options shared by all subcommands.
pub struct SfOptions {
    inner: Options,
}

/// Outcome of one call.
pub struct SfResult {
    status: SfStatus,
    json: CString,
    diagnostics: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn to_cstring(s: String) -> CString {
    CString::new(s.replace('\0', "\\u0000")).expect("interior NULs removed")
}

fn set_last_error(message: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(to_cstring(message.into())));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SfStatus, message: impl Into<String>) -> SfStatus {
    set_last_error(message);
    status
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, SfStatus> {
    if p.is_null() {
        return Err(fail(SfStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(SfStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn status_of(s: Status) -> SfStatus {
    match s {
        Status::Ok => SfStatus::Ok,
        Status::InvalidInput => SfStatus::InvalidInput,
        Status::MathFailure => SfStatus::MathFailure,
    }
}

fn wrap(r: CommandResult) -> SfResult {
    SfResult {
        status: status_of(r.status),
        json: to_cstring(r.payload_text()),
        diagnostics: r.diagnostics.into_iter().map(to_cstring).collect(),
    }
}

/// Runs `command` on the JSON text `input`. `options` may be null.
///
/// On return `*out` holds a result handle whenever the command was dispatched,
/// including mathematical failures; it is null for argument errors, which are
/// described by [`sf_last_error`]. The return value equals the result status.
///
/// # Safety
/// `command` and `input` must be null or valid NUL-terminated strings,
/// `options` null or a live handle, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_run(
    command: *const c_char,
    input: *const c_char,
    options: *const SfOptions,
    out: *mut *mut SfResult,
) -> SfStatus {
    if out.is_null() {
        return fail(SfStatus::NullArgument, "out is null");
    }
    *out = ptr::null_mut();
    clear_last_error();
    let name = match read_str(command, "command") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let text = match read_str(input, "input") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let Some(cmd) = Command::from_name(name) else {
        return fail(SfStatus::UnknownCommand, format!("unknown command {name:?}"));
    };
    let default = Options::default();
    let opts = options.as_ref().map_or(&default, |o| &o.inner);
    match catch_unwind(AssertUnwindSafe(|| cli::execute_text(cmd, text, opts))) {
        Ok(r) => {
            let result = wrap(r);
            let status = result.status;
            if let Some(d) = result.diagnostics.first() {
                set_last_error(d.to_string_lossy().into_owned());
            }
            *out = Box::into_raw(Box::new(result));
            status
        }
        Err(_) => fail(SfStatus::Panic, format!("internal error while running {name}")),
    }
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_result_status(result: *const SfResult) -> SfStatus {
    result.as_ref().map_or(SfStatus::NullArgument, |r| r.status)
}

/// JSON payload; valid until the handle is freed.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_result_json(result: *const SfResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_result_diagnostic_count(result: *const SfResult) -> usize {
    result.as_ref().map_or(0, |r| r.diagnostics.len())
}

/// The `index`-th diagnostic, or null when out of range.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_result_diagnostic(result: *const SfResult, index: usize) -> *const c_char {
    result.as_ref().and_then(|r| r.diagnostics.get(index)).map_or(ptr::null(), |d| d.as_ptr())
}

/// # Safety
/// `result` must be null or a handle from [`sf_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_result_free(result: *mut SfResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

#[no_mangle]
pub extern "C" fn sf_options_new() -> *mut SfOptions {
    Box::into_raw(Box::new(SfOptions { inner: Options::default() }))
}

/// # Safety
/// `options` must be null or a handle from [`sf_options_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_options_free(options: *mut SfOptions) {
    if !options.is_null() {
        drop(Box::from_raw(options));
    }
}

/// Highest degree for cohomology and homology commands.
///
/// # Safety
/// `options` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_options_set_max_degree(options: *mut SfOptions, degree: usize) -> SfStatus {
    match options.as_mut() {
        Some(o) => {
            o.inner.max_degree = Some(degree);
            SfStatus::Ok
        }
        None => fail(SfStatus::NullArgument, "options is null"),
    }
}

/// # Safety
/// `options` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_options_set_convention(options: *mut SfOptions, convention: SfConvention) -> SfStatus {
    match options.as_mut() {
        Some(o) => {
            o.inner.convention = match convention {
                SfConvention::ConjugateFirst => PositivityConvention::ConjugateFirst,
                SfConvention::ConjugateSecond => PositivityConvention::ConjugateSecond,
            };
            SfStatus::Ok
        }
        None => fail(SfStatus::NullArgument, "options is null"),
    }
}

/// Sample points for nilpotent-orbit checks, in command-line syntax
/// (`"1,2,4"`, or `"1:2,2:4"` for several coordinates).
///
/// # Safety
/// `options` must be null or a live handle; `samples` null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sf_options_set_y_samples(options: *mut SfOptions, samples: *const c_char) -> SfStatus {
    let Some(o) = options.as_mut() else {
        return fail(SfStatus::NullArgument, "options is null");
    };
    let text = match read_str(samples, "samples") {
        Ok(s) => s,
        Err(s) => return s,
    };
    match cli::parse_y_sample_list(text) {
        Ok(y) => {
            o.inner.y_samples = Some(y);
            SfStatus::Ok
        }
        Err(e) => fail(SfStatus::InvalidInput, e),
    }
}

/// Message for the most recent failure on this thread, or null.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
