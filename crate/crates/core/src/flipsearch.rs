//! Sign changes of `s_n` along chains `n = p^u q^v`.
//!
//! When `n_prev | n_next` and `s_{n_prev}`, `s_{n_next}` differ in sign, some
//! divisor `d` of `n_next` outside `n_prev` has `|N_d| != 1 (mod pq)`.
//! [`localize`] lists those divisors with whatever is affordable to compute.

use std::fmt;

use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclonorm::{elem_poly, norm_digits_estimate, norm_real_fast, s_seq, signum};
use crate::error::{Error, Result};
use crate::poly_core::arith::{divisors, is_prime_u64};
use crate::poly_core::real_cyclotomic_mod;
use crate::poly_core::resultant::{reduce_coeffs, resultant_mod_raw};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InvalidTwist { t: u64 },
    NotOddPrime { value: u64 },
    NotDistinct { p: u64 },
    PqNotDividingHalf { pq: u64, half: u64 },
    TwistNotMinusOne { t: u64, pq: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidTwist { t } => write!(f, "t = {t} is not odd and >= 3"),
            Violation::NotOddPrime { value } => write!(f, "{value} is not an odd prime"),
            Violation::NotDistinct { p } => write!(f, "p = q = {p}"),
            Violation::PqNotDividingHalf { pq, half } => write!(f, "{pq} ∤ {half}"),
            Violation::TwistNotMinusOne { t, pq } => write!(f, "{t} ≢ -1 (mod {pq})"),
        }
    }
}

/// Empty when `(t, p, q)` satisfies every hypothesis.
pub fn validate_hypotheses(t: u64, p: u64, q: u64) -> Vec<Violation> {
    let mut out = Vec::new();
    if t < 3 || t % 2 == 0 {
        out.push(Violation::InvalidTwist { t });
    }
    for value in [p, q] {
        if value == 2 || !is_prime_u64(value) {
            out.push(Violation::NotOddPrime { value });
        }
    }
    if p == q {
        out.push(Violation::NotDistinct { p });
    }
    let pq = p.saturating_mul(q);
    let half = (t + 1) / 2;
    if pq == 0 || half % pq != 0 {
        out.push(Violation::PqNotDividingHalf { pq, half });
    }
    if pq == 0 || (t + 1) % pq != 0 {
        out.push(Violation::TwistNotMinusOne { t, pq });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPoint {
    pub n: u64,
    pub u: u32,
    pub v: u32,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidacy {
    Candidate,
    NotCandidate,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedDivisor {
    pub d: u64,
    pub norm_mod_pq: u64,
    /// Present only when the exact norm was computed.
    pub norm_sign: Option<i8>,
    /// Exact digit count when `norm_sign` is present, otherwise an estimate.
    pub norm_digits: u64,
    pub candidate: Candidacy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipWitness {
    pub n_prev: u64,
    pub n_next: u64,
    pub sign_prev: i8,
    pub sign_next: i8,
    pub localized: Vec<LocalizedDivisor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSearch {
    pub t: u64,
    pub p: u64,
    pub q: u64,
    pub chain: Vec<ChainPoint>,
    pub witnesses: Vec<FlipWitness>,
    pub budget_exhausted: bool,
}

fn hypotheses_ok(t: u64, p: u64, q: u64) -> Result<()> {
    let v = validate_hypotheses(t, p, q);
    if v.is_empty() {
        Ok(())
    } else {
        let msg = v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        Err(Error::Hypotheses(msg))
    }
}

/// Exponents start at 1, or at 2 with step 2 for a prime that is 3 mod 4.
fn exponent_schedule(prime: u64, cap: u32) -> impl Iterator<Item = u32> {
    let (start, step) = if prime % 4 == 3 { (2, 2) } else { (1, 1) };
    (start..=cap).step_by(step)
}

/// Walk `v` upward with `u` fixed, moving to the next `u` when `v` reaches
/// the cap, and record a witness at each sign change inside a chain.
pub fn find_flips(t: u64, p: u64, q: u64, max_flips: usize, exponent_cap: u32) -> Result<FlipSearch> {
    hypotheses_ok(t, p, q)?;
    let mut search = FlipSearch {
        t,
        p,
        q,
        chain: Vec::new(),
        witnesses: Vec::new(),
        budget_exhausted: false,
    };
    if max_flips == 0 {
        return Ok(search);
    }
    for u in exponent_schedule(p, exponent_cap) {
        let mut prev: Option<ChainPoint> = None;
        for v in exponent_schedule(q, exponent_cap) {
            let Some(n) = p.checked_pow(u).and_then(|a| q.checked_pow(v).and_then(|b| a.checked_mul(b)))
            else {
                break;
            };
            let sign = signum(&s_seq(t, n)?.s);
            let point = ChainPoint { n, u, v, sign };
            search.chain.push(point);
            if let Some(pp) = prev {
                if pp.sign != sign {
                    search.witnesses.push(FlipWitness {
                        n_prev: pp.n,
                        n_next: n,
                        sign_prev: pp.sign,
                        sign_next: sign,
                        localized: Vec::new(),
                    });
                    if search.witnesses.len() >= max_flips {
                        return Ok(search);
                    }
                }
            }
            prev = Some(point);
        }
    }
    search.budget_exhausted = true;
    Ok(search)
}

fn candidacy(residue: u64, sign: Option<i8>, pq: u64) -> Candidacy {
    match sign {
        Some(s) => {
            let abs_residue = if s < 0 { (pq - residue) % pq } else { residue };
            if abs_residue == 1 {
                Candidacy::NotCandidate
            } else {
                Candidacy::Candidate
            }
        }
        None if residue == 1 || residue == pq - 1 => Candidacy::Indeterminate,
        None => Candidacy::Candidate,
    }
}

fn localize_one(t: u64, d: u64, pq: u64, digit_cap: u64) -> Result<LocalizedDivisor> {
    let psi = real_cyclotomic_mod(d, pq)?;
    let e = reduce_coeffs(elem_poly(t)?.coeffs(), pq);
    let norm_mod_pq = resultant_mod_raw(&psi, &e, pq);
    let estimate = norm_digits_estimate(t, d);
    let (norm_sign, norm_digits) = if estimate <= digit_cap as f64 {
        let exact = norm_real_fast(t, d)?;
        let check = u64::try_from(exact.mod_floor(&pq.into())).unwrap();
        if check != norm_mod_pq {
            return Err(Error::Hypotheses(format!(
                "norm residue mismatch at d = {d}: {check} vs {norm_mod_pq}"
            )));
        }
        (Some(signum(&exact)), exact.abs().to_string().len() as u64)
    } else {
        (None, estimate.ceil() as u64)
    };
    Ok(LocalizedDivisor {
        d,
        norm_mod_pq,
        norm_sign,
        norm_digits,
        candidate: candidacy(norm_mod_pq, norm_sign, pq),
    })
}

/// Fill `witness.localized` with every divisor of `n_next` not dividing
/// `n_prev`, ascending. Exact norms are computed only up to `digit_cap`
/// estimated digits.
pub fn localize(t: u64, p: u64, q: u64, witness: &FlipWitness, digit_cap: u64) -> Result<FlipWitness> {
    hypotheses_ok(t, p, q)?;
    let pq = p * q;
    let ds: Vec<u64> = divisors(witness.n_next)
        .into_iter()
        .filter(|d| witness.n_prev % d != 0)
        .collect();
    let localized = ds
        .into_par_iter()
        .map(|d| localize_one(t, d, pq, digit_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlipWitness { localized, ..witness.clone() })
}
