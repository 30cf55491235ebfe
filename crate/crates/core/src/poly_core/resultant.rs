//! Resultants over Z and over Z/mZ.
//!
//! Convention: `Res(f, g)` is the determinant of the Sylvester matrix with the
//! coefficients of `f` in the first `deg g` rows, so that
//! `Res(f, g) = lc(f)^deg g * prod_{f(a)=0} g(a)` and
//! `Res(g, f) = (-1)^(deg f * deg g) Res(f, g)`.
//!
//! [`resultant`] performs one pseudo-division step of the larger operand by the
//! smaller one (evaluated Horner-style so that the cost is linear in the
//! larger degree) and finishes with a fraction-free Bareiss determinant.
//! [`sylvester_resultant`] is the plain Bareiss determinant of the full
//! Sylvester matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::arith::{crt, factor_small, inv_mod, mul_mod, pow_mod};
use super::intpoly::IntPoly;
use crate::error::{Error, Result};

fn neg_one_pow(e: usize) -> BigInt {
    if e % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn big_pow(base: &BigInt, e: usize) -> BigInt {
    Pow::pow(base, e)
}

/// Fraction-free Gaussian elimination (Bareiss). Consumes the matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn sylvester_matrix(f: &IntPoly, g: &IntPoly) -> Vec<Vec<BigInt>> {
    let n = f.degree().unwrap();
    let k = g.degree().unwrap();
    let size = n + k;
    let mut rows = Vec::with_capacity(size);
    for (poly, deg, count) in [(f, n, k), (g, k, n)] {
        for i in 0..count {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in poly.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            debug_assert_eq!(poly.coeffs().len(), deg + 1);
            rows.push(row);
        }
    }
    rows
}

/// Resultant as the Bareiss determinant of the full Sylvester matrix.
pub fn sylvester_resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(bareiss_determinant(sylvester_matrix(f, g)))
}

/// `lc(divisor)^e * (dividend mod divisor)` with `e = deg dividend - deg divisor + 1`.
///
/// Horner evaluation in `Q[x]/(divisor)` with a running power of the leading
/// coefficient: `O(deg dividend * deg divisor)` coefficient operations instead
/// of the quadratic cost of schoolbook pseudo-division.
pub fn pseudo_rem(dividend: &IntPoly, divisor: &IntPoly) -> (IntPoly, usize) {
    let nb = dividend.degree().expect("nonzero dividend");
    let ka = divisor.degree().expect("nonzero divisor");
    assert!(nb >= ka && ka >= 1);
    let e = nb - ka + 1;
    let lc = divisor.leading().unwrap().clone();
    let a = divisor.coeffs();

    let mut lc_pows = Vec::with_capacity(e + 1);
    lc_pows.push(BigInt::one());
    for j in 1..=e {
        let next = &lc_pows[j - 1] * &lc;
        lc_pows.push(next);
    }

    let mut acc = vec![BigInt::zero(); ka];
    let mut reductions = 0usize;
    for (j, b) in dividend.coeffs().iter().enumerate().rev() {
        if j + ka <= nb {
            let top = std::mem::take(&mut acc[ka - 1]);
            for i in (1..ka).rev() {
                let shifted = std::mem::take(&mut acc[i - 1]);
                acc[i] = shifted * &lc - &top * &a[i];
            }
            acc[0] = -(&top * &a[0]);
            reductions += 1;
        } else {
            debug_assert!(acc[ka - 1].is_zero());
            acc.rotate_right(1);
        }
        if !b.is_zero() {
            acc[0] += b * &lc_pows[reductions];
        }
    }
    debug_assert_eq!(reductions, e);
    (IntPoly::new(acc), e)
}

/// `Res(a, b)` for `deg b >= deg a >= 1`, via one pseudo-remainder step.
fn reduce_then_bareiss(a: &IntPoly, b: &IntPoly) -> BigInt {
    let ka = a.degree().unwrap();
    let nb = b.degree().unwrap();
    let (prem, e) = pseudo_rem(b, a);
    let Some(dr) = prem.degree() else {
        return BigInt::zero();
    };
    let lc = a.leading().unwrap();
    // Res(a, b) = lc^(nb - dr) Res(a, rho); Res(a, prem) = lc^(e*ka) Res(a, rho)
    let res_prem = if dr == 0 {
        big_pow(&prem.coeffs()[0], ka)
    } else {
        bareiss_determinant(sylvester_matrix(a, &prem))
    };
    let up = nb - dr;
    let down = e * ka;
    if up >= down {
        res_prem * big_pow(lc, up - down)
    } else {
        let (q, r) = res_prem.div_rem(&big_pow(lc, down - up));
        debug_assert!(r.is_zero());
        q
    }
}

/// Exact resultant over Z.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    let (Some(n), Some(k)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    if n == 0 {
        return Ok(big_pow(&f.coeffs()[0], k));
    }
    if k == 0 {
        return Ok(big_pow(&g.coeffs()[0], n));
    }
    if n >= k {
        Ok(neg_one_pow(n * k) * reduce_then_bareiss(g, f))
    } else {
        Ok(reduce_then_bareiss(f, g))
    }
}

/// Residue of `Res(f, g)` modulo `m`.
///
/// The leading coefficient of `f` must survive reduction mod `m`; `g` may
/// lose degree (its formal degree over Z is used throughout).
pub fn resultant_mod(f: &IntPoly, g: &IntPoly, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fr = reduce_coeffs(f.coeffs(), m);
    if *fr.last().unwrap() == 0 {
        return Err(Error::DegreeCollapse { modulus: m });
    }
    let gr = reduce_coeffs(g.coeffs(), m);
    Ok(resultant_mod_raw(&fr, &gr, m))
}

pub(crate) fn reduce_coeffs(coeffs: &[BigInt], m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    coeffs
        .iter()
        .map(|c| {
            let r = c.mod_floor(&mb);
            u64::try_from(r).expect("reduced below modulus")
        })
        .collect()
}

/// Resultant of residue polynomials with formal degrees `len - 1`.
pub(crate) fn resultant_mod_raw(f: &[u64], g: &[u64], m: u64) -> u64 {
    let parts: Vec<(u64, u64)> = factor_small(m)
        .into_iter()
        .map(|(p, e)| {
            let q = p.pow(e);
            let fq: Vec<u64> = f.iter().map(|c| c % q).collect();
            let gq: Vec<u64> = g.iter().map(|c| c % q).collect();
            let r = if e == 1 {
                res_formal_field(fq, gq, p)
            } else {
                res_local_ring(&fq, &gq, p, q)
            };
            (r, q)
        })
        .collect();
    crt(&parts)
}

fn actual_degree(p: &[u64]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

fn sign_mod(odd: bool, x: u64, p: u64) -> u64 {
    if odd && x != 0 {
        p - x
    } else {
        x
    }
}

/// Resultant over the prime field `F_p` with formal degrees.
fn res_formal_field(f: Vec<u64>, g: Vec<u64>, p: u64) -> u64 {
    let n = f.len() - 1;
    let k = g.len() - 1;
    let (nf, ng) = (actual_degree(&f), actual_degree(&g));
    let (Some(na), Some(ka)) = (nf, ng) else {
        // An identically zero operand kills the determinant unless the other
        // block of the Sylvester matrix is empty.
        return match (nf, ng) {
            (None, Some(_)) if k == 0 => pow_mod(g[0], n as u64, p),
            (Some(_), None) if n == 0 => pow_mod(f[0], k as u64, p),
            (None, None) if n == 0 && k == 0 => 1,
            _ => 0,
        };
    };
    let mut acc = 1u64;
    if na < n {
        // Res_{n,k} = (-1)^{k(n-na)} g_k^{n-na} Res_{na,k}
        acc = mul_mod(acc, pow_mod(g[k], (n - na) as u64, p), p);
        acc = sign_mod(k * (n - na) % 2 == 1, acc, p);
    }
    if ka < k {
        // Res_{na,k} = f_na^{k-ka} Res_{na,ka}
        acc = mul_mod(acc, pow_mod(f[na], (k - ka) as u64, p), p);
    }
    if acc == 0 {
        return 0;
    }
    let mut f = f[..=na].to_vec();
    let mut g = g[..=ka].to_vec();
    loop {
        let n = f.len() - 1;
        let k = g.len() - 1;
        if k == 0 {
            return mul_mod(acc, pow_mod(g[0], n as u64, p), p);
        }
        if n == 0 {
            return mul_mod(acc, pow_mod(f[0], k as u64, p), p);
        }
        if n < k {
            acc = sign_mod(n * k % 2 == 1, acc, p);
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        let r = poly_rem_field(&f, &g, p);
        let Some(dr) = actual_degree(&r) else {
            return 0;
        };
        acc = mul_mod(acc, pow_mod(g[k], (n - dr) as u64, p), p);
        acc = sign_mod(n * k % 2 == 1, acc, p);
        f = std::mem::replace(&mut g, r[..=dr].to_vec());
    }
}

fn poly_rem_field(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let k = g.len() - 1;
    let inv = inv_mod(g[k], p).expect("nonzero leading coefficient in a field");
    let mut r = f.to_vec();
    for i in (k..r.len()).rev() {
        let top = r[i];
        if top == 0 {
            continue;
        }
        let q = mul_mod(top, inv, p);
        for (j, &c) in g.iter().enumerate() {
            let sub = mul_mod(q, c, p);
            let slot = &mut r[i - k + j];
            *slot = (*slot + p - sub) % p;
        }
    }
    r.truncate(k);
    r
}

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Sylvester determinant over `Z/p^e`, pivoting on minimal p-adic valuation.
fn res_local_ring(f: &[u64], g: &[u64], p: u64, q: u64) -> u64 {
    let n = f.len() - 1;
    let k = g.len() - 1;
    let size = n + k;
    if size == 0 {
        return 1 % q;
    }
    let mut m = vec![vec![0u64; size]; size];
    for i in 0..k {
        for (j, &c) in f.iter().rev().enumerate() {
            m[i][i + j] = c;
        }
    }
    for i in 0..n {
        for (j, &c) in g.iter().rev().enumerate() {
            m[k + i][i + j] = c;
        }
    }
    let mut det = 1u64;
    for col in 0..size {
        let pivot_row = (col..size)
            .filter(|&r| m[r][col] != 0)
            .min_by_key(|&r| valuation(m[r][col], p));
        let Some(pr) = pivot_row else {
            return 0;
        };
        if pr != col {
            m.swap(pr, col);
            det = (q - det) % q;
        }
        let pivot = m[col][col];
        det = mul_mod(det, pivot, q);
        let v = valuation(pivot, p);
        let pv = p.pow(v);
        let unit_inv = inv_mod(pivot / pv, q).expect("unit part");
        for r in col + 1..size {
            let a = m[r][col];
            if a == 0 {
                continue;
            }
            let factor = mul_mod(a / pv, unit_inv, q);
            for c in col..size {
                let sub = mul_mod(factor, m[col][c], q);
                m[r][c] = (m[r][c] + q - sub) % q;
            }
        }
    }
    det
}
