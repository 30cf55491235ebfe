//! C ABI for `twistram`.
//!
//! Fallible calls return a [`TwStatus`] and write results through
//! out-pointers. Strings returned to the caller are released with
//! [`tw_string_free`]; handles with their matching `*_free`. Panics never
//! cross the boundary and surface as [`TwStatus::Panic`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use twistram::cyclonorm::{norm_real, s_seq, signum};
use twistram::flipsearch::{find_flips, localize, FlipSearch};
use twistram::poly_core::FactorBudget;
use twistram::ramify::{certify, RamificationCertificate, Status};
use twistram::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Input violates a mathematical precondition (even `t`, even `d`, bad `(p, q)`).
    Hypothesis = 3,
    /// The result was produced but the factorization or search budget ran out.
    BudgetExhausted = 4,
    OutOfRange = 5,
    Internal = 6,
    Panic = 7,
}

/// Factorization limits; see [`tw_budget_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwBudget {
    pub trial_bound: u64,
    pub rho_iter_cap: u64,
    pub wall_ms: u64,
    pub seed: u64,
}

impl From<TwBudget> for FactorBudget {
    fn from(b: TwBudget) -> Self {
        FactorBudget { trial_bound: b.trial_bound, rho_iter_cap: b.rho_iter_cap, wall_ms: b.wall_ms, seed: b.seed }
    }
}

/// Opaque ramification certificate.
pub struct TwCertificate(RamificationCertificate);

/// Opaque flip search result with localized witnesses.
pub struct TwFlipSearch(FlipSearch);

fn status_of(e: &Error) -> TwStatus {
    match e {
        Error::InvalidTwist(_)
        | Error::EvenSurgery(_)
        | Error::EvenIndex(_)
        | Error::DegenerateRealSubfield(_)
        | Error::Hypotheses(_) => TwStatus::Hypothesis,
        Error::BadModulus(_) | Error::EmptyRange { .. } | Error::FactorZero | Error::ZeroPolynomial => {
            TwStatus::InvalidArgument
        }
        _ => TwStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> TwStatus) -> TwStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TwStatus::Panic)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> TwStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TwStatus::Ok
        }
        Err(_) => TwStatus::Internal,
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

#[no_mangle]
pub extern "C" fn tw_budget_default() -> TwBudget {
    let b = FactorBudget::default();
    TwBudget { trial_bound: b.trial_bound, rho_iter_cap: b.rho_iter_cap, wall_ms: b.wall_ms, seed: b.seed }
}

/// Static, NUL-terminated description of `status`. Never free it.
#[no_mangle]
pub extern "C" fn tw_status_message(status: TwStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        TwStatus::Ok => c"ok",
        TwStatus::NullPointer => c"null pointer argument",
        TwStatus::InvalidArgument => c"invalid argument",
        TwStatus::Hypothesis => c"hypotheses violated",
        TwStatus::BudgetExhausted => c"budget exhausted; result is incomplete",
        TwStatus::OutOfRange => c"index out of range",
        TwStatus::Internal => c"internal error",
        TwStatus::Panic => c"panic caught at the C boundary",
    };
    msg.as_ptr()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Signed norm `N_d` as a decimal string.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_norm_real(t: u64, d: u64, out: *mut *mut c_char) -> TwStatus {
    if out.is_null() {
        return TwStatus::NullPointer;
    }
    guard(|| match norm_real(t, d) {
        Ok(n) => put_string(out, n.value.to_string()),
        Err(e) => status_of(&e),
    })
}

/// Sign of `s_n` (`1` or `-1`) for odd `n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_s_sign(t: u64, n: u64, out: *mut i8) -> TwStatus {
    if out.is_null() {
        return TwStatus::NullPointer;
    }
    guard(|| match s_seq(t, n) {
        Ok(r) => {
            *out = signum(&r.s);
            TwStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Certify the `(d, 0)` surgery on `K_t`. A null `budget` means the default.
/// On `TW_STATUS_BUDGET_EXHAUSTED` the handle is still written.
///
/// # Safety
/// `budget` must be null or readable; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_certify(
    t: u64,
    d: u64,
    budget: *const TwBudget,
    out: *mut *mut TwCertificate,
) -> TwStatus {
    if out.is_null() {
        return TwStatus::NullPointer;
    }
    let budget: FactorBudget = if budget.is_null() { FactorBudget::default() } else { (*budget).into() };
    guard(|| match certify(t, d, &budget) {
        Ok(c) => {
            let status = if c.status == Status::Complete { TwStatus::Ok } else { TwStatus::BudgetExhausted };
            *out = Box::into_raw(Box::new(TwCertificate(c)));
            status
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `cert` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tw_certificate_is_complete(cert: *const TwCertificate) -> bool {
    !cert.is_null() && (*cert).0.status == Status::Complete
}

/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tw_certificate_ramified_count(cert: *const TwCertificate) -> usize {
    if cert.is_null() {
        0
    } else {
        (*cert).0.ramified.len()
    }
}

/// Decimal string of the `index`-th certified prime, ascending.
///
/// # Safety
/// `cert` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_certificate_ramified_prime(
    cert: *const TwCertificate,
    index: usize,
    out: *mut *mut c_char,
) -> TwStatus {
    if cert.is_null() || out.is_null() {
        return TwStatus::NullPointer;
    }
    let cert = &*cert;
    match cert.0.ramified.get(index) {
        Some(r) => put_string(out, r.l.to_string()),
        None => TwStatus::OutOfRange,
    }
}

/// # Safety
/// `cert` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_certificate_to_json(cert: *const TwCertificate, out: *mut *mut c_char) -> TwStatus {
    if cert.is_null() || out.is_null() {
        return TwStatus::NullPointer;
    }
    guard(|| put_string(out, to_json(&(*cert).0)))
}

/// # Safety
/// `cert` must be null or a handle from [`tw_certify`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_certificate_free(cert: *mut TwCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Walk `n = p^u q^v` for sign flips of `s_n` and localize each witness,
/// computing exact norms only below `digit_cap` digits. On
/// `TW_STATUS_BUDGET_EXHAUSTED` the handle is still written.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_flip_search(
    t: u64,
    p: u64,
    q: u64,
    max_flips: usize,
    exponent_cap: u32,
    digit_cap: u64,
    out: *mut *mut TwFlipSearch,
) -> TwStatus {
    if out.is_null() {
        return TwStatus::NullPointer;
    }
    guard(|| {
        let run = || -> Result<FlipSearch, Error> {
            let mut s = find_flips(t, p, q, max_flips, exponent_cap)?;
            s.witnesses = s
                .witnesses
                .iter()
                .map(|w| localize(t, p, q, w, digit_cap))
                .collect::<Result<_, _>>()?;
            Ok(s)
        };
        match run() {
            Ok(s) => {
                let status = if s.budget_exhausted { TwStatus::BudgetExhausted } else { TwStatus::Ok };
                *out = Box::into_raw(Box::new(TwFlipSearch(s)));
                status
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `search` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tw_flip_search_witness_count(search: *const TwFlipSearch) -> usize {
    if search.is_null() {
        0
    } else {
        (*search).0.witnesses.len()
    }
}

/// Endpoints of the `index`-th witness.
///
/// # Safety
/// `search` must be a live handle; `n_prev` and `n_next` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_flip_search_witness(
    search: *const TwFlipSearch,
    index: usize,
    n_prev: *mut u64,
    n_next: *mut u64,
) -> TwStatus {
    if search.is_null() || n_prev.is_null() || n_next.is_null() {
        return TwStatus::NullPointer;
    }
    let search = &*search;
    match search.0.witnesses.get(index) {
        Some(w) => {
            *n_prev = w.n_prev;
            *n_next = w.n_next;
            TwStatus::Ok
        }
        None => TwStatus::OutOfRange,
    }
}

/// # Safety
/// `search` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tw_flip_search_to_json(search: *const TwFlipSearch, out: *mut *mut c_char) -> TwStatus {
    if search.is_null() || out.is_null() {
        return TwStatus::NullPointer;
    }
    guard(|| put_string(out, to_json(&(*search).0)))
}

/// # Safety
/// `search` must be null or a handle from [`tw_flip_search`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tw_flip_search_free(search: *mut TwFlipSearch) {
    if !search.is_null() {
        drop(Box::from_raw(search));
    }
}
