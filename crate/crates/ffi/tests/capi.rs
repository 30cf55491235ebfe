use std::ffi::{c_char, CStr};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use twistram_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    tw_string_free(s);
    out
}

#[test]
fn norm_and_sign() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(tw_norm_real(29, 7, &mut s), TwStatus::Ok);
        assert_eq!(take(s), "-20579");
        assert_eq!(tw_norm_real(29, 8, &mut s), TwStatus::Hypothesis);
        assert_eq!(tw_norm_real(29, 7, ptr::null_mut()), TwStatus::NullPointer);

        let mut sign = 0i8;
        assert_eq!(tw_s_sign(29, 1125, &mut sign), TwStatus::Ok);
        assert_eq!(sign, 1);
        assert_eq!(tw_s_sign(29, 4, &mut sign), TwStatus::Hypothesis);
    }
}

#[test]
fn certificate_handle() {
    unsafe {
        let mut cert = ptr::null_mut();
        assert_eq!(tw_certify(29, 11, ptr::null(), &mut cert), TwStatus::Ok);
        assert!(tw_certificate_is_complete(cert));
        let primes: Vec<String> = (0..tw_certificate_ramified_count(cert))
            .map(|i| {
                let mut s = ptr::null_mut();
                assert_eq!(tw_certificate_ramified_prime(cert, i, &mut s), TwStatus::Ok);
                take(s)
            })
            .collect();
        assert_eq!(primes, ["43", "131", "1033"]);
        let mut s = ptr::null_mut();
        assert_eq!(tw_certificate_ramified_prime(cert, 3, &mut s), TwStatus::OutOfRange);
        assert_eq!(tw_certificate_to_json(cert, &mut s), TwStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(json["norm"]["value"], "-5818889");
        tw_certificate_free(cert);
        tw_certificate_free(ptr::null_mut());
    }
}

#[test]
fn starved_budget_still_returns_handle() {
    unsafe {
        let budget = TwBudget { rho_iter_cap: 1000, wall_ms: 2000, ..tw_budget_default() };
        let mut cert = ptr::null_mut();
        assert_eq!(tw_certify(29, 61, &budget, &mut cert), TwStatus::BudgetExhausted);
        assert!(!cert.is_null());
        assert!(!tw_certificate_is_complete(cert));
        tw_certificate_free(cert);
    }
}

#[test]
fn flip_search_handle() {
    unsafe {
        let mut search = ptr::null_mut();
        assert_eq!(tw_flip_search(29, 3, 5, 2, 6, 40_000, &mut search), TwStatus::Ok);
        assert_eq!(tw_flip_search_witness_count(search), 2);
        let (mut a, mut b) = (0u64, 0u64);
        assert_eq!(tw_flip_search_witness(search, 0, &mut a, &mut b), TwStatus::Ok);
        assert_eq!((a, b), (225, 1125));
        assert_eq!(tw_flip_search_witness(search, 2, &mut a, &mut b), TwStatus::OutOfRange);
        let mut s = ptr::null_mut();
        assert_eq!(tw_flip_search_to_json(search, &mut s), TwStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(json["witnesses"][1]["n_next"], 5625);
        tw_flip_search_free(search);

        assert_eq!(tw_flip_search(29, 3, 7, 2, 6, 40_000, &mut search), TwStatus::Hypothesis);
    }
}

fn static_lib() -> Option<PathBuf> {
    // tests/<name>-<hash> lives in <target>/<profile>/deps
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libtwistram_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_compiles_and_links() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = crate_dir.join("include");
    let source = crate_dir.join("tests").join("c").join("smoke.c");
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));

    let syntax = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&source)
        .status()
        .expect("cc not available");
    assert!(syntax.success());

    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; link step skipped");
        return;
    };
    let exe = out_dir.join("twistram_smoke");
    let build = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(build.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "43 131 1033\n");
}
