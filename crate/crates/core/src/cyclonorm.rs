//! Norms from the real cyclotomic field and the companion sequence `s_n`.
//!
//! With `h = (t+1)/2` and `r = 2t+1`, the real associate of `Delta(zeta_d^2)` is
//! `E_t(2cos(2pi/d))` where `E_t(x) = h(x^2 - 2) - t`. Its norm is
//! `N_d = Res(Psi_d, E_t)`. The sequence `s_n` satisfies
//! `a_{m+1} = t a_m - h^2 a_{m-1}` with `s_{2m+1} = a_m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly_core::arith::{divisors, euler_phi, gcd, radical};
use crate::poly_core::{cyclotomic, real_cyclotomic, resultant, IntPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormVia {
    Resultant,
    TrivialD1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormRecord {
    pub t: u64,
    pub d: u64,
    #[serde(with = "crate::serde_big")]
    pub value: BigInt,
    pub via: NormVia,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SRecord {
    pub t: u64,
    pub n: u64,
    #[serde(with = "crate::serde_big")]
    pub s: BigInt,
}

fn check_twist(t: u64) -> Result<()> {
    if t < 3 || t % 2 == 0 {
        return Err(Error::InvalidTwist(t as i64));
    }
    Ok(())
}

fn check_surgery(d: u64) -> Result<()> {
    if d == 0 || d % 2 == 0 {
        return Err(Error::EvenSurgery(d));
    }
    Ok(())
}

/// `E_t(x) = ((t+1)/2)(x^2 - 2) - t`
pub fn elem_poly(t: u64) -> Result<IntPoly> {
    check_twist(t)?;
    let h = BigInt::from((t + 1) / 2);
    Ok(IntPoly::new(vec![-BigInt::from(2 * t + 1), BigInt::zero(), h]))
}

pub fn norm_real(t: u64, d: u64) -> Result<NormRecord> {
    check_twist(t)?;
    check_surgery(d)?;
    if d == 1 {
        return Ok(NormRecord { t, d, value: BigInt::one(), via: NormVia::TrivialD1 });
    }
    let value = resultant(&real_cyclotomic(d)?, &elem_poly(t)?)?;
    Ok(NormRecord { t, d, value, via: NormVia::Resultant })
}

/// `Res(Phi_d, Delta(x^2)) == N_d^2`.
pub fn norm_square_check(t: u64, d: u64) -> Result<bool> {
    let norm = norm_real(t, d)?.value;
    let delta = crate::knotpoly::alexander(t)?.substitute_power(2);
    let full = resultant(&cyclotomic(d), &delta)?;
    Ok(full == &norm * &norm)
}

type Mat2 = [[BigInt; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_pow(m: &Mat2, mut k: u64) -> Mat2 {
    let mut acc: Mat2 = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// `s_n` for odd `n`, by powering the companion matrix of the recurrence.
pub fn s_seq(t: u64, n: u64) -> Result<SRecord> {
    check_twist(t)?;
    if n % 2 == 0 {
        return Err(Error::EvenIndex(n));
    }
    let m = (n - 1) / 2;
    let a0 = BigInt::one();
    let a1 = BigInt::from((3 * t + 1) / 2);
    let s = if m == 0 {
        a0
    } else {
        let h = BigInt::from((t + 1) / 2);
        let comp: Mat2 = [[BigInt::from(t), -(&h * &h)], [BigInt::one(), BigInt::zero()]];
        let p = mat_pow(&comp, m - 1);
        &p[0][0] * &a1 + &p[0][1] * &a0
    };
    Ok(SRecord { t, n, s })
}

/// `prod_{d | n} N_d`, multiplied in ascending order of `d`.
pub fn omega(t: u64, n: u64) -> Result<BigInt> {
    check_twist(t)?;
    if n % 2 == 0 {
        return Err(Error::EvenIndex(n));
    }
    let norms: Vec<BigInt> = divisors(n)
        .into_par_iter()
        .map(|d| norm_real(t, d).map(|r| r.value))
        .collect::<Result<_>>()?;
    Ok(norms.iter().fold(BigInt::one(), |acc, v| acc * v))
}

/// `(a + b*beta) / h^e` in `Q[beta] / (beta^2 - r/h)`.
#[derive(Clone, Debug)]
struct Quad {
    a: BigInt,
    b: BigInt,
    e: u64,
}

struct QuadRing {
    h: BigInt,
    r: BigInt,
    h_pows: Vec<BigInt>,
}

impl QuadRing {
    fn h_pow(&mut self, e: u64) -> BigInt {
        while self.h_pows.len() as u64 <= e {
            let next = self.h_pows.last().unwrap() * &self.h;
            self.h_pows.push(next);
        }
        self.h_pows[e as usize].clone()
    }

    fn normalize(&self, mut x: Quad) -> Quad {
        while x.e > 0 {
            let (qa, ra) = x.a.div_rem(&self.h);
            if !ra.is_zero() {
                break;
            }
            let (qb, rb) = x.b.div_rem(&self.h);
            if !rb.is_zero() {
                break;
            }
            x = Quad { a: qa, b: qb, e: x.e - 1 };
        }
        x
    }

    fn mul(&self, x: &Quad, y: &Quad) -> Quad {
        let a = &self.h * &x.a * &y.a + &self.r * &x.b * &y.b;
        let b = &self.h * (&x.a * &y.b + &y.a * &x.b);
        self.normalize(Quad { a, b, e: x.e + y.e + 1 })
    }

    fn add_int(&mut self, x: Quad, c: &BigInt) -> Quad {
        let a = x.a + c * self.h_pow(x.e);
        Quad { a, ..x }
    }

    fn sub_beta(&mut self, x: Quad) -> Quad {
        let b = x.b - self.h_pow(x.e);
        Quad { b, ..x }
    }

    /// `V_k(beta)` where `V_k(x + 1/x) = x^k + x^-k`.
    fn lucas(&mut self, k: u64) -> Quad {
        let two = BigInt::from(2);
        let mut lo = Quad { a: two.clone(), b: BigInt::zero(), e: 0 };
        let mut hi = Quad { a: BigInt::zero(), b: BigInt::one(), e: 0 };
        if k == 0 {
            return lo;
        }
        for bit in (0..64 - k.leading_zeros()).rev() {
            let cross = self.mul(&lo, &hi);
            let cross = self.sub_beta(cross);
            if (k >> bit) & 1 == 1 {
                let sq = self.mul(&hi, &hi);
                hi = self.add_int(sq, &-&two);
                lo = cross;
            } else {
                let sq = self.mul(&lo, &lo);
                lo = self.add_int(sq, &-&two);
                hi = cross;
            }
        }
        lo
    }
}

/// `N_d` without forming `Psi_d`: evaluate `Psi_d = Psi_rad o V_(d/rad)` at a
/// root `beta` of `E_t` in `Q(beta)`, then take the norm to `Q`.
pub fn norm_real_fast(t: u64, d: u64) -> Result<BigInt> {
    check_twist(t)?;
    check_surgery(d)?;
    if d == 1 {
        return Ok(BigInt::one());
    }
    let rad = radical(d);
    let psi_rad = real_cyclotomic(rad)?;
    let h = BigInt::from((t + 1) / 2);
    let r = BigInt::from(2 * t + 1);
    let mut ring = QuadRing { h: h.clone(), r: r.clone(), h_pows: vec![BigInt::one()] };
    let v = ring.lucas(d / rad);

    let mut acc = Quad { a: BigInt::zero(), b: BigInt::zero(), e: 0 };
    for c in psi_rad.coeffs().iter().rev() {
        acc = ring.mul(&acc, &v);
        acc = ring.add_int(acc, c);
    }
    // N = h^n Psi(beta) Psi(-beta) = (h A^2 - r B^2) h^(n - 2e - 1)
    let n = euler_phi(d) / 2;
    let core = &h * &acc.a * &acc.a - &r * &acc.b * &acc.b;
    let shift = n as i64 - 2 * acc.e as i64 - 1;
    if shift >= 0 {
        Ok(core * Pow::pow(&h, shift as u64))
    } else {
        let (q, rem) = core.div_rem(&Pow::pow(&h, (-shift) as u64));
        if !rem.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }
}

/// Approximate number of decimal digits of `|N_d|`.
pub fn norm_digits_estimate(t: u64, d: u64) -> f64 {
    let h = ((t + 1) / 2) as f64;
    let t = t as f64;
    (1..=(d.saturating_sub(1)) / 2)
        .filter(|&k| gcd(k, d) == 1)
        .map(|k| {
            let c = (4.0 * std::f64::consts::PI * k as f64 / d as f64).cos();
            (2.0 * h * c - t).abs().log10()
        })
        .sum()
}

/// `+1`, `-1` or `0`.
pub fn signum(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn elem_polys() {
        assert_eq!(elem_poly(29).unwrap(), IntPoly::from_i64s(&[-59, 0, 15]));
        assert_eq!(elem_poly(3).unwrap(), IntPoly::from_i64s(&[-7, 0, 2]));
        for t in [3u64, 5, 29, 101] {
            assert_eq!(elem_poly(t).unwrap().eval(&b(2)), b(1));
        }
    }

    #[test]
    fn small_norms() {
        assert_eq!(norm_real(29, 1).unwrap().via, NormVia::TrivialD1);
        assert_eq!(norm_real(29, 3).unwrap().value, b(-44));
        assert_eq!(norm_real(29, 5).unwrap().value, b(1051));
        assert_eq!(norm_real(29, 11).unwrap().value, b(-5818889));
        assert_eq!(norm_real(29, 4), Err(Error::EvenSurgery(4)));
    }

    #[test]
    fn squares() {
        assert!(norm_square_check(29, 3).unwrap());
        assert!(norm_square_check(29, 5).unwrap());
        assert!(norm_square_check(3, 5).unwrap());
    }

    #[test]
    fn s_values() {
        assert_eq!(s_seq(29, 1).unwrap().s, b(1));
        assert_eq!(s_seq(29, 3).unwrap().s, b(44));
        assert_eq!(s_seq(29, 5).unwrap().s, b(1051));
        assert_eq!(s_seq(29, 4), Err(Error::EvenIndex(4)));
    }

    #[test]
    fn s_matches_naive_iteration() {
        for t in [3u64, 7, 29] {
            let h = b(((t + 1) / 2) as i64);
            let (mut prev, mut cur) = (b(1), b(((3 * t + 1) / 2) as i64));
            for m in 1..60u64 {
                assert_eq!(s_seq(t, 2 * m + 1).unwrap().s, cur);
                let next = b(t as i64) * &cur - &h * &h * &prev;
                prev = std::mem::replace(&mut cur, next);
            }
        }
    }

    #[test]
    fn omegas() {
        assert_eq!(omega(29, 1).unwrap(), b(1));
        assert_eq!(omega(29, 3).unwrap(), b(-44));
        assert!(omega(29, 45).unwrap().is_negative());
    }

    #[test]
    fn fast_norm_agrees() {
        for t in [3u64, 29] {
            for d in (3..=99).step_by(2) {
                assert_eq!(norm_real_fast(t, d).unwrap(), norm_real(t, d).unwrap().value, "t={t} d={d}");
            }
        }
    }

    #[test]
    fn digit_estimate() {
        let est = norm_digits_estimate(29, 11);
        assert!((est - 6.765).abs() < 0.01, "{est}");
    }
}
