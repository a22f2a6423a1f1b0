//! Exercises the C ABI from Rust: status codes, null handling, ownership,
//! and numeric results through the exported symbols.

use std::ffi::CString;
use std::ptr;

use groverian_ffi::{
    groverian_grover_success, groverian_last_error, groverian_measure, groverian_pmax_closed,
    groverian_pmax_numeric, groverian_state_free, groverian_state_from_amplitudes,
    groverian_state_load, groverian_state_qubits, GroverianState, GroverianStatus,
};

unsafe fn load(spec: &str) -> *mut GroverianState {
    let spec = CString::new(spec).unwrap();
    let mut state: *mut GroverianState = ptr::null_mut();
    let status = groverian_state_load(spec.as_ptr(), &mut state);
    assert_eq!(status, GroverianStatus::Ok, "loading {spec:?}");
    assert!(!state.is_null());
    state
}

unsafe fn last_error() -> String {
    let needed = groverian_last_error(ptr::null_mut(), 0);
    let mut buf = vec![0u8; needed + 1];
    groverian_last_error(buf.as_mut_ptr().cast(), buf.len());
    String::from_utf8(buf[..needed].to_vec()).unwrap()
}

#[test]
fn ghz_round_trip_through_the_abi() {
    unsafe {
        let state = load("ghz:3");
        assert_eq!(groverian_state_qubits(state), 3);

        let mut pmax = 0.0;
        let mut g = 0.0;
        let status = groverian_pmax_numeric(state, 7, 0, &mut pmax, &mut g);
        assert_eq!(status, GroverianStatus::Ok);
        assert!((pmax - 0.5).abs() < 1e-6);
        assert!((g - 0.5f64.sqrt()).abs() < 1e-6);

        let mut closed = 0.0;
        assert_eq!(
            groverian_pmax_closed(state, false, &mut closed),
            GroverianStatus::Ok
        );
        assert!((closed - 1.0).abs() < 1e-12);

        groverian_state_free(state);
    }
}

#[test]
fn closed_form_gating_and_conjectural_escape() {
    unsafe {
        let state = load("ghz:4");
        let mut closed = 0.0;
        assert_eq!(
            groverian_pmax_closed(state, false, &mut closed),
            GroverianStatus::Unsupported
        );
        assert!(last_error().contains("conjectural"), "{}", last_error());
        assert_eq!(
            groverian_pmax_closed(state, true, &mut closed),
            GroverianStatus::Ok
        );
        assert!((closed - 0.5).abs() < 1e-12);
        groverian_state_free(state);

        let w3 = load("w:3");
        assert_eq!(groverian_pmax_closed(w3, false, &mut closed), GroverianStatus::Ok);
        assert!((closed - 0.75).abs() < 1e-12);
        groverian_state_free(w3);
    }
}

#[test]
fn complex_input_is_unsupported_for_the_closed_form() {
    unsafe {
        let h = 0.5f64.sqrt();
        let res = [h, 0.0, 0.0, 0.0];
        let ims = [0.0, h, 0.0, 0.0];
        let mut state: *mut GroverianState = ptr::null_mut();
        assert_eq!(
            groverian_state_from_amplitudes(2, res.as_ptr(), ims.as_ptr(), 4, &mut state),
            GroverianStatus::Ok
        );
        let mut closed = 0.0;
        assert_eq!(
            groverian_pmax_closed(state, false, &mut closed),
            GroverianStatus::Unsupported
        );
        groverian_state_free(state);
    }
}

#[test]
fn real_amplitude_constructor_and_search() {
    unsafe {
        let h = 0.5;
        let res = [h, h, h, h];
        let mut state: *mut GroverianState = ptr::null_mut();
        assert_eq!(
            groverian_state_from_amplitudes(2, res.as_ptr(), ptr::null(), 4, &mut state),
            GroverianStatus::Ok
        );
        let mut success = 0.0;
        // One iteration on a 4-dimensional uniform state is exact.
        assert_eq!(
            groverian_grover_success(state, 2, 1, &mut success),
            GroverianStatus::Ok
        );
        assert!((success - 1.0).abs() < 1e-12);
        // Negative count selects the optimal iteration number.
        assert_eq!(
            groverian_grover_success(state, 2, -1, &mut success),
            GroverianStatus::Ok
        );
        assert!((success - 1.0).abs() < 1e-12);
        groverian_state_free(state);
    }
}

#[test]
fn uniform3_two_iterations_match_the_exact_fraction() {
    unsafe {
        let state = load("uniform:3");
        let mut success = 0.0;
        assert_eq!(
            groverian_grover_success(state, 0, 2, &mut success),
            GroverianStatus::Ok
        );
        assert!((success - 121.0 / 128.0).abs() < 1e-12);
        groverian_state_free(state);
    }
}

#[test]
fn error_paths_set_status_and_message() {
    unsafe {
        // Bad spec
        let spec = CString::new("foo:9").unwrap();
        let mut state: *mut GroverianState = ptr::null_mut();
        assert_eq!(
            groverian_state_load(spec.as_ptr(), &mut state),
            GroverianStatus::InvalidArgument
        );
        assert!(last_error().contains("foo:9"));

        // Null pointers
        assert_eq!(
            groverian_state_load(ptr::null(), &mut state),
            GroverianStatus::NullPointer
        );
        assert_eq!(
            groverian_state_load(spec.as_ptr(), ptr::null_mut()),
            GroverianStatus::NullPointer
        );
        assert_eq!(groverian_state_qubits(ptr::null()), -1);
        let mut out = 0.0;
        assert_eq!(
            groverian_pmax_numeric(ptr::null(), 0, 0, &mut out, ptr::null_mut()),
            GroverianStatus::NullPointer
        );
        assert_eq!(
            groverian_measure(0.5, ptr::null_mut()),
            GroverianStatus::NullPointer
        );

        // Out-of-range values
        assert_eq!(groverian_measure(1.5, &mut out), GroverianStatus::InvalidArgument);
        let ghz = load("ghz:2");
        assert_eq!(
            groverian_grover_success(ghz, 99, 1, &mut out),
            GroverianStatus::InvalidArgument
        );
        assert_eq!(
            groverian_grover_success(ghz, 0, 1_000_000, &mut out),
            GroverianStatus::InvalidArgument
        );
        groverian_state_free(ghz);

        // Unnormalized amplitudes
        let res = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(
            groverian_state_from_amplitudes(2, res.as_ptr(), ptr::null(), 4, &mut state),
            GroverianStatus::InvalidArgument
        );

        // Free on null is a no-op.
        groverian_state_free(ptr::null_mut());
    }
}

#[test]
fn measure_computes_the_square_root_complement() {
    unsafe {
        let mut out = 0.0;
        assert_eq!(groverian_measure(0.5, &mut out), GroverianStatus::Ok);
        assert!((out - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(groverian_measure(1.0, &mut out), GroverianStatus::Ok);
        assert_eq!(out, 0.0);
    }
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/groverian.h"
    ))
    .expect("build script generates the header");
    for symbol in [
        "GROVERIAN_STATUS_OK",
        "GROVERIAN_STATUS_UNSUPPORTED",
        "struct GroverianState",
        "groverian_state_load",
        "groverian_state_from_amplitudes",
        "groverian_state_free",
        "groverian_state_qubits",
        "groverian_pmax_numeric",
        "groverian_pmax_closed",
        "groverian_grover_success",
        "groverian_measure",
        "groverian_last_error",
        "GROVERIAN_H",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
