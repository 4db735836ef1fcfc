//! Exercises the C ABI exactly as a C caller would: through raw
//! pointers and status codes.

use std::ffi::{CStr, CString};
use std::ptr;

use tdho_ffi::*;

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(tdho_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn expr_parse_eval_diff_roundtrip() {
    unsafe {
        let src = CString::new("sin(t) * exp(-t/2)").unwrap();
        let mut expr: *mut TdhoExpr = ptr::null_mut();
        assert_eq!(tdho_expr_parse(src.as_ptr(), &mut expr), TDHO_OK);
        assert!(!expr.is_null());

        let mut v = 0.0;
        assert_eq!(tdho_expr_eval(expr, 1.0, &mut v), TDHO_OK);
        let expected = 1.0f64.sin() * (-0.5f64).exp();
        assert!((v - expected).abs() < 1e-15);

        let mut deriv: *mut TdhoExpr = ptr::null_mut();
        assert_eq!(tdho_expr_diff(expr, &mut deriv), TDHO_OK);
        let mut dv = 0.0;
        assert_eq!(tdho_expr_eval(deriv, 1.0, &mut dv), TDHO_OK);
        let d_expected = 1.0f64.cos() * (-0.5f64).exp() - 0.5 * expected;
        assert!((dv - d_expected).abs() < 1e-12);

        let mut rendered: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(tdho_expr_to_string(expr, &mut rendered), TDHO_OK);
        let text = CStr::from_ptr(rendered).to_str().unwrap().to_string();
        tdho_string_free(rendered);

        let reparsed_src = CString::new(text).unwrap();
        let mut reparsed: *mut TdhoExpr = ptr::null_mut();
        assert_eq!(tdho_expr_parse(reparsed_src.as_ptr(), &mut reparsed), TDHO_OK);
        let mut rv = 0.0;
        assert_eq!(tdho_expr_eval(reparsed, 1.0, &mut rv), TDHO_OK);
        assert_eq!(rv, v);

        tdho_expr_free(expr);
        tdho_expr_free(deriv);
        tdho_expr_free(reparsed);
    }
}

#[test]
fn parse_error_reports_message() {
    unsafe {
        let src = CString::new("sin(").unwrap();
        let mut expr: *mut TdhoExpr = ptr::null_mut();
        assert_eq!(tdho_expr_parse(src.as_ptr(), &mut expr), TDHO_ERR_PARSE);
        assert!(expr.is_null());
        assert!(!last_error().is_empty());
    }
}

#[test]
fn eval_domain_error() {
    unsafe {
        let src = CString::new("1 / t").unwrap();
        let mut expr: *mut TdhoExpr = ptr::null_mut();
        assert_eq!(tdho_expr_parse(src.as_ptr(), &mut expr), TDHO_OK);
        let mut v = 0.0;
        assert_eq!(tdho_expr_eval(expr, 0.0, &mut v), TDHO_ERR_EVAL);
        assert!(!last_error().is_empty());
        tdho_expr_free(expr);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut expr: *mut TdhoExpr = ptr::null_mut();
        assert_eq!(
            tdho_expr_parse(ptr::null(), &mut expr),
            TDHO_ERR_INVALID_ARGUMENT
        );
        let src = CString::new("t").unwrap();
        assert_eq!(
            tdho_expr_parse(src.as_ptr(), ptr::null_mut()),
            TDHO_ERR_INVALID_ARGUMENT
        );
        let mut v = 0.0;
        assert_eq!(tdho_expr_eval(ptr::null(), 0.0, &mut v), TDHO_ERR_INVALID_ARGUMENT);
        tdho_expr_free(ptr::null_mut()); // no-op
        tdho_string_free(ptr::null_mut()); // no-op
        tdho_config_free(ptr::null_mut()); // no-op
    }
}

#[test]
fn config_parse_and_run() {
    unsafe {
        let json = CString::new(
            r#"{"omega_sq": "1", "force": "sin(t)", "t0": 0, "t1": 10, "samples": 501}"#,
        )
        .unwrap();
        let mut config: *mut TdhoConfig = ptr::null_mut();
        assert_eq!(tdho_config_parse(json.as_ptr(), &mut config), TDHO_OK);

        let mut report: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(tdho_run(config, ptr::null(), &mut report), TDHO_OK);
        let body = CStr::from_ptr(report).to_str().unwrap();
        let parsed: serde_json::Value = serde_json::from_str(body).unwrap();
        assert_eq!(parsed["overall_pass"], serde_json::Value::Bool(true));
        assert!(parsed["checks"].as_array().unwrap().len() > 3);
        tdho_string_free(report);
        tdho_config_free(config);
    }
}

#[test]
fn invalid_config_is_rejected() {
    unsafe {
        let json = CString::new(r#"{"omega_sq": "1 +", "force": "0", "t0": 0, "t1": 1}"#).unwrap();
        let mut config: *mut TdhoConfig = ptr::null_mut();
        assert_eq!(tdho_config_parse(json.as_ptr(), &mut config), TDHO_ERR_PARSE);
        assert!(last_error().contains("omega_sq"));
    }
}

#[test]
fn run_writes_output_directory() {
    unsafe {
        let dir = std::env::temp_dir().join(format!("tdho-ffi-{}", std::process::id()));
        let json = CString::new(
            r#"{"omega_sq": "1", "force": "0", "t0": 0, "t1": 5, "samples": 201}"#,
        )
        .unwrap();
        let mut config: *mut TdhoConfig = ptr::null_mut();
        assert_eq!(tdho_config_parse(json.as_ptr(), &mut config), TDHO_OK);
        let out_dir = CString::new(dir.to_str().unwrap()).unwrap();
        let mut report: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(tdho_run(config, out_dir.as_ptr(), &mut report), TDHO_OK);
        tdho_string_free(report);
        tdho_config_free(config);
        assert!(dir.join("report.json").exists());
        assert!(dir.join("series.json").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
