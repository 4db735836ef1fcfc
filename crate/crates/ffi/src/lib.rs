//! C ABI over the tdho core: expression parsing/evaluation/derivatives
//! and full check runs driven by a JSON configuration.
//!
//! Conventions:
//! - every fallible function returns an integer status code
//!   (`TDHO_OK` = 0); on failure `tdho_last_error_message` returns a
//!   thread-local, NUL-terminated description valid until the next
//!   failing call on the same thread,
//! - objects are returned through opaque handles that must be released
//!   with the matching `_free` function,
//! - strings returned through out-parameters are owned by the caller
//!   and must be released with `tdho_string_free`.
//!
//! The canonical header lives in `include/tdho.h`.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::path::Path;

use tdho::config::{RawConfig, RunConfig};
use tdho::expr::ExprAst;
use tdho::runner::{run, OutputFormat};

pub const TDHO_OK: c_int = 0;
/// Null pointer or otherwise unusable argument.
pub const TDHO_ERR_INVALID_ARGUMENT: c_int = 1;
/// Expression or configuration failed to parse / validate.
pub const TDHO_ERR_PARSE: c_int = 2;
/// Evaluation hit a domain error (division by zero, log of a
/// non-positive value, ...).
pub const TDHO_ERR_EVAL: c_int = 3;
/// The run aborted (integration failure, I/O, ...).
pub const TDHO_ERR_RUN: c_int = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Message for the most recent failure on this thread. Never null;
/// empty before the first failure. The pointer is invalidated by the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tdho_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque parsed expression.
pub struct TdhoExpr(ExprAst);

/// Opaque validated run configuration.
pub struct TdhoConfig(RunConfig);

unsafe fn cstr_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, c_int> {
    if ptr.is_null() {
        set_error(&format!("{name} is null"));
        return Err(TDHO_ERR_INVALID_ARGUMENT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{name} is not valid UTF-8"));
        TDHO_ERR_INVALID_ARGUMENT
    })
}

fn check_out<T>(ptr: *mut T, name: &str) -> Result<(), c_int> {
    if ptr.is_null() {
        set_error(&format!("{name} is null"));
        Err(TDHO_ERR_INVALID_ARGUMENT)
    } else {
        Ok(())
    }
}

/// Parse an expression of the variable `t`. On success stores a new
/// handle in `*out`.
///
/// # Safety
/// `source` must be a valid NUL-terminated string; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdho_expr_parse(
    source: *const c_char,
    out: *mut *mut TdhoExpr,
) -> c_int {
    let src = match cstr_arg(source, "source") {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Err(code) = check_out(out, "out") {
        return code;
    }
    match tdho::expr::parse(src) {
        Ok(ast) => {
            *out = Box::into_raw(Box::new(TdhoExpr(ast)));
            TDHO_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            TDHO_ERR_PARSE
        }
    }
}

/// Evaluate the expression at time `t` into `*value`.
///
/// # Safety
/// `expr` must be a live handle from this library; `value` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdho_expr_eval(
    expr: *const TdhoExpr,
    t: c_double,
    value: *mut c_double,
) -> c_int {
    if expr.is_null() {
        set_error("expr is null");
        return TDHO_ERR_INVALID_ARGUMENT;
    }
    if let Err(code) = check_out(value, "value") {
        return code;
    }
    match (*expr).0.eval(t) {
        Ok(v) => {
            *value = v;
            TDHO_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            TDHO_ERR_EVAL
        }
    }
}

/// Symbolic derivative with respect to `t`, as a new handle in `*out`.
///
/// # Safety
/// `expr` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdho_expr_diff(
    expr: *const TdhoExpr,
    out: *mut *mut TdhoExpr,
) -> c_int {
    if expr.is_null() {
        set_error("expr is null");
        return TDHO_ERR_INVALID_ARGUMENT;
    }
    if let Err(code) = check_out(out, "out") {
        return code;
    }
    let d = (*expr).0.differentiate();
    *out = Box::into_raw(Box::new(TdhoExpr(d)));
    TDHO_OK
}

/// Render the expression; the result re-parses to an equivalent
/// expression. Caller frees with `tdho_string_free`.
///
/// # Safety
/// `expr` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdho_expr_to_string(
    expr: *const TdhoExpr,
    out: *mut *mut c_char,
) -> c_int {
    if expr.is_null() {
        set_error("expr is null");
        return TDHO_ERR_INVALID_ARGUMENT;
    }
    if let Err(code) = check_out(out, "out") {
        return code;
    }
    let rendered = (*expr).0.to_string();
    match CString::new(rendered) {
        Ok(s) => {
            *out = s.into_raw();
            TDHO_OK
        }
        Err(_) => {
            set_error("rendered expression contains NUL");
            TDHO_ERR_INVALID_ARGUMENT
        }
    }
}

/// Release an expression handle. Null is a no-op.
///
/// # Safety
/// `expr` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn tdho_expr_free(expr: *mut TdhoExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Parse and validate a JSON run configuration (same schema as the
/// CLI). On success stores a new handle in `*out`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn tdho_config_parse(
    json: *const c_char,
    out: *mut *mut TdhoConfig,
) -> c_int {
    let src = match cstr_arg(json, "json") {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Err(code) = check_out(out, "out") {
        return code;
    }
    let raw: RawConfig = match serde_json::from_str(src) {
        Ok(r) => r,
        Err(e) => {
            set_error(&format!("configuration: {e}"));
            return TDHO_ERR_PARSE;
        }
    };
    match RunConfig::from_raw(raw) {
        Ok(cfg) => {
            *out = Box::into_raw(Box::new(TdhoConfig(cfg)));
            TDHO_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            TDHO_ERR_PARSE
        }
    }
}

/// Release a configuration handle. Null is a no-op.
///
/// # Safety
/// `config` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn tdho_config_free(config: *mut TdhoConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Execute the configured checks and store the run report as a JSON
/// string in `*report_json` (caller frees with `tdho_string_free`).
/// `out_dir` may be null; when given, time series and the report are
/// also written there as JSON files. Returns `TDHO_OK` whenever the
/// run executed, whether or not the checks passed; read `overall_pass`
/// in the report for the verdict.
///
/// # Safety
/// `config` must be a live handle; `out_dir` must be null or a valid
/// NUL-terminated path; `report_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tdho_run(
    config: *const TdhoConfig,
    out_dir: *const c_char,
    report_json: *mut *mut c_char,
) -> c_int {
    if config.is_null() {
        set_error("config is null");
        return TDHO_ERR_INVALID_ARGUMENT;
    }
    if let Err(code) = check_out(report_json, "report_json") {
        return code;
    }
    let dir = if out_dir.is_null() {
        None
    } else {
        match cstr_arg(out_dir, "out_dir") {
            Ok(s) => Some(s.to_string()),
            Err(code) => return code,
        }
    };
    let report = match run(
        &(*config).0,
        dir.as_deref().map(Path::new),
        OutputFormat::Json,
    ) {
        Ok(r) => r,
        Err(e) => {
            set_error(&e.to_string());
            return TDHO_ERR_RUN;
        }
    };
    let body = match serde_json::to_string_pretty(&report) {
        Ok(b) => b,
        Err(e) => {
            set_error(&format!("report serialization: {e}"));
            return TDHO_ERR_RUN;
        }
    };
    match CString::new(body) {
        Ok(s) => {
            *report_json = s.into_raw();
            TDHO_OK
        }
        Err(_) => {
            set_error("report contains NUL");
            TDHO_ERR_RUN
        }
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string obtained from this library and not
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn tdho_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
