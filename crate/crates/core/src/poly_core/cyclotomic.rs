//! Cyclotomic polynomials and minimal polynomials of `2cos(2pi/d)`.
//!
//! `Phi_d(x) = Phi_rad(x^(d/rad))` where `rad` is the squarefree kernel of `d`,
//! so only squarefree indices go through exact division, and those are cached.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::arith::{divisors, euler_phi, radical};
use super::intpoly::IntPoly;
use crate::error::{Error, Result};

fn squarefree_cache() -> &'static Mutex<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn squarefree_cyclotomic(n: u64) -> IntPoly {
    if let Some(p) = squarefree_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut acc = IntPoly::x_pow_minus_one(n as usize);
    for e in divisors(n) {
        if e < n {
            acc = acc
                .div_exact(&squarefree_cyclotomic(e))
                .expect("cyclotomic factors divide x^n - 1");
        }
    }
    squarefree_cache().lock().unwrap().insert(n, acc.clone());
    acc
}

/// The `d`-th cyclotomic polynomial. `d = 0` is treated as `1`.
pub fn cyclotomic(d: u64) -> IntPoly {
    let d = d.max(1);
    let rad = radical(d);
    squarefree_cyclotomic(rad).substitute_power((d / rad) as usize)
}

/// Coefficients of `V_j(y) = x^j + x^-j` as a polynomial in `y = x + 1/x`,
/// visited as `(degree, coefficient)`; `j >= 1`.
///
/// `V_j(y) = sum_i (-1)^i j/(j-i) C(j-i, i) y^(j-2i)`, generated by the ratio of
/// consecutive terms so each step is an exact small-integer update.
fn for_each_v_coeff(j: usize, mut visit: impl FnMut(usize, &BigInt)) {
    let mut term = BigInt::one();
    let mut i = 0usize;
    loop {
        visit(j - 2 * i, &term);
        if 2 * (i + 1) > j {
            break;
        }
        let num = (j - 2 * i) as u64 * (j - 2 * i - 1) as u64;
        let den = (i + 1) as u64 * (j - i - 1) as u64;
        term *= num;
        let (q, r) = term.div_rem(&BigInt::from(den));
        debug_assert!(r.is_zero());
        term = -q;
        i += 1;
    }
}

/// Nonzero `c_(n+j)` of the palindromic `Phi_d`, `n = phi(d)/2`.
fn half_terms(d: u64) -> Vec<(usize, BigInt)> {
    let phi = cyclotomic(d);
    let n = (euler_phi(d) / 2) as usize;
    phi.coeffs()[n..]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, c.clone()))
        .collect()
}

fn check_real_index(d: u64) -> Result<()> {
    if d < 3 {
        return Err(Error::DegenerateRealSubfield(d));
    }
    Ok(())
}

/// `Psi_d`, the minimal polynomial of `2cos(2pi/d)`, for `d >= 3`.
pub fn real_cyclotomic(d: u64) -> Result<IntPoly> {
    check_real_index(d)?;
    let n = (euler_phi(d) / 2) as usize;
    let mut out = vec![BigInt::zero(); n + 1];
    for (j, c) in half_terms(d) {
        if j == 0 {
            out[0] += &c;
        } else {
            for_each_v_coeff(j, |k, v| out[k] += &c * v);
        }
    }
    Ok(IntPoly::new(out))
}

/// Coefficients of `Psi_d` reduced into `[0, m)`, low degree first. The full
/// integer polynomial is never materialised, so this stays cheap in memory
/// for `d` where `Psi_d` itself would be enormous.
pub fn real_cyclotomic_mod(d: u64, m: u64) -> Result<Vec<u64>> {
    check_real_index(d)?;
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    let n = (euler_phi(d) / 2) as usize;
    let mb = BigInt::from(m);
    let mut out = vec![0u64; n + 1];
    let add = |slot: &mut u64, v: BigInt| {
        let r = u64::try_from(v.mod_floor(&mb)).unwrap();
        *slot = ((*slot as u128 + r as u128) % m as u128) as u64;
    };
    for (j, c) in half_terms(d) {
        if j == 0 {
            add(&mut out[0], c);
        } else {
            let c_mod = c.mod_floor(&mb);
            for_each_v_coeff(j, |k, v| add(&mut out[k], v.mod_floor(&mb) * &c_mod));
        }
    }
    Ok(out)
}

/// `x^n p(x + 1/x)` with `n = deg p`; inverts the passage from `Phi_d` to `Psi_d`.
pub fn unfold_real(p: &IntPoly) -> IntPoly {
    let Some(n) = p.degree() else {
        return IntPoly::zero();
    };
    let mut out = vec![BigInt::zero(); 2 * n + 1];
    for (k, c) in p.coeffs().iter().enumerate() {
        // x^(n-k) (x^2 + 1)^k
        let mut binom = BigInt::one();
        for i in 0..=k {
            out[n - k + 2 * i] += c * &binom;
            binom = binom * (k - i) / (i + 1);
        }
    }
    IntPoly::new(out)
}
