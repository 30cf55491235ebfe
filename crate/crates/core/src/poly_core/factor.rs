//! Integer factorization: trial division, Miller-Rabin, Brent's variant of
//! Pollard rho. Anything left unsplit within budget is carried as a cofactor.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::arith::{euler_phi, factor_small, gcd, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Limits for [`factorize`]. The seed fixes every random choice, so results
/// are reproducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_iter_cap: u64,
    pub wall_ms: u64,
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iter_cap: 1 << 26,
            wall_ms: 60_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::serde_big")]
    pub prime: BigInt,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// Ascending by prime.
    pub factors: Vec<PrimePower>,
    #[serde(with = "crate::serde_big::option")]
    pub cofactor: Option<BigInt>,
    pub complete: bool,
    pub sign: i8,
}

impl Factorization {
    /// `sign * prod p^e * cofactor`
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for f in &self.factors {
            acc *= num_traits::pow(f.prime.clone(), f.multiplicity as usize);
        }
        if let Some(c) = &self.cofactor {
            acc *= c;
        }
        acc
    }

    pub fn multiplicity_of(&self, prime: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|f| &f.prime == prime)
            .map_or(0, |f| f.multiplicity)
    }
}

/// Exact square root, or [`Error::NotPerfectSquare`].
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.sign() == Sign::Minus {
        return Err(Error::NegativeSquareRoot(n.to_string()));
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Ok(r)
    } else {
        Err(Error::NotPerfectSquare(n.to_string()))
    }
}

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn deterministic_bound() -> BigUint {
    // The first 13 primes are a complete witness set below this value.
    "3317044064679887385961981".parse().unwrap()
}

fn mr_round(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u32, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if &x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

fn probable_prime_with(n: &BigUint, rng: &mut ChaCha8Rng) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        if let Some(&p) = SMALL_PRIMES.iter().find(|&&p| small % p == 0) {
            return small == p;
        }
        return probable_prime_u64(small);
    }
    if SMALL_PRIMES.iter().any(|&p| (n % p).is_zero()) {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap() as u32;
    let d = &n_minus_1 >> s;
    if *n < deterministic_bound() {
        return SMALL_PRIMES
            .iter()
            .all(|&a| mr_round(n, &n_minus_1, &d, s, &BigUint::from(a)));
    }
    let two = BigUint::from(2u32);
    (0..64).all(|_| {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        mr_round(n, &n_minus_1, &d, s, &a)
    })
}

fn probable_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin: deterministic below about 3.3e24, 64 random rounds above.
pub fn is_probable_prime(n: &BigInt) -> bool {
    match n.to_biguint() {
        Some(u) => probable_prime_with(&u, &mut ChaCha8Rng::seed_from_u64(0)),
        None => false,
    }
}

struct Limits {
    iter_cap: u64,
    deadline: Instant,
}

impl Limits {
    fn expired(&self) -> bool {
        Instant::now() >= self.deadline
    }
}

const BATCH: u64 = 128;

fn rho_u64(n: u64, rng: &mut ChaCha8Rng, limits: &Limits) -> Option<u64> {
    let mut spent = 0u64;
    while spent < limits.iter_cap && !limits.expired() {
        let c = rng.gen_range(1..n);
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let mut y = rng.gen_range(0..n);
        let (mut x, mut ys) = (y, y);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        while g == 1 && spent < limits.iter_cap {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            spent += r;
            r *= 2;
            if limits.expired() {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n && g > 1 {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, rng: &mut ChaCha8Rng, limits: &Limits) -> Option<BigUint> {
    let one = BigUint::one();
    let mut spent = 0u64;
    while spent < limits.iter_cap && !limits.expired() {
        let c = rng.gen_biguint_range(&one, n);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = rng.gen_biguint_below(n);
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        while g.is_one() && spent < limits.iter_cap {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = q * diff(&x, &y) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            spent += r;
            r *= 2;
            if limits.expired() {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && !g.is_one() {
            return Some(g);
        }
    }
    None
}

/// Montgomery arithmetic modulo an odd `n < 2^127`, with `R = 2^128`.
struct Mont128 {
    n: u128,
    n_neg_inv: u128,
    r2: u128,
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

impl Mont128 {
    fn new(n: u128) -> Self {
        debug_assert!(n % 2 == 1 && n < 1 << 127);
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let mut r = (u128::MAX % n + 1) % n;
        for _ in 0..128 {
            r <<= 1;
            if r >= n {
                r -= n;
            }
        }
        Mont128 { n, n_neg_inv: inv.wrapping_neg(), r2: r }
    }

    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.n_neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let carry = lo.overflowing_add(ml).1 as u128;
        let t = hi + mh + carry;
        if t >= self.n {
            t - self.n
        } else {
            t
        }
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn rho_u128(n: u128, rng: &mut ChaCha8Rng, limits: &Limits) -> Option<u128> {
    let mont = Mont128::new(n);
    let mut spent = 0u64;
    while spent < limits.iter_cap && !limits.expired() {
        let c = mont.to_mont(rng.gen_range(1..n));
        let f = |x: u128| mont.add(mont.mul(x, x), c);
        let mut y = mont.to_mont(rng.gen_range(0..n));
        let (mut x, mut ys) = (y, y);
        let (mut g, mut r, mut q) = (1u128, 1u64, mont.to_mont(1));
        while g == 1 && spent < limits.iter_cap {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = gcd_u128(q, n);
                k += BATCH;
            }
            spent += r;
            r *= 2;
            if limits.expired() {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n && g > 1 {
            return Some(g);
        }
    }
    None
}

fn split(n: &BigUint, rng: &mut ChaCha8Rng, limits: &Limits) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        return Some(r);
    }
    if let Some(small) = n.to_u64() {
        return rho_u64(small, rng, limits).map(BigUint::from);
    }
    match n.to_u128() {
        Some(mid) if n.bits() < 127 && mid % 2 == 1 => rho_u128(mid, rng, limits).map(BigUint::from),
        _ => rho_big(n, rng, limits),
    }
}

/// Strip small factors by trial division up to `bound` (or `sqrt(n)`).
fn trial_divide(mut n: BigUint, bound: u64, out: &mut Vec<(BigUint, u32)>) -> BigUint {
    let mut p = 2u64;
    while p <= bound {
        if let Some(small) = n.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
        }
        let pb = p as u32;
        if (&n % pb).is_zero() {
            let mut e = 0;
            while (&n % pb).is_zero() {
                n /= pb;
                e += 1;
            }
            out.push((BigUint::from(p), e));
        }
        if p > u32::MAX as u64 {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    n
}

/// Factor `n` within `budget`. Pieces that resist splitting are multiplied
/// into the cofactor and the result is marked incomplete.
pub fn factorize(n: &BigInt, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::FactorZero);
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let limits = Limits {
        iter_cap: budget.rho_iter_cap,
        deadline: Instant::now() + Duration::from_millis(budget.wall_ms),
    };

    let mut found: Vec<(BigUint, u32)> = Vec::new();
    let rest = trial_divide(n.magnitude().clone(), budget.trial_bound, &mut found);
    let trial_bound_sq = BigUint::from(budget.trial_bound) * budget.trial_bound;

    let mut cofactor = BigUint::one();
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if m < trial_bound_sq || probable_prime_with(&m, &mut rng) {
            // Below bound^2 every survivor of trial division is prime.
            found.push((m, 1));
            continue;
        }
        match split(&m, &mut rng, &limits) {
            Some(f) => {
                let other = &m / &f;
                stack.push(f);
                stack.push(other);
            }
            None => cofactor *= m,
        }
    }

    found.sort();
    let mut factors: Vec<PrimePower> = Vec::new();
    for (p, e) in found {
        let p = BigInt::from(p);
        match factors.last_mut() {
            Some(last) if last.prime == p => last.multiplicity += e,
            _ => factors.push(PrimePower { prime: p, multiplicity: e }),
        }
    }
    let complete = cofactor.is_one();
    Ok(Factorization {
        factors,
        cofactor: (!complete).then(|| BigInt::from(cofactor)),
        complete,
        sign,
    })
}

/// Least `k >= 1` with `l^k = 1 (mod d)`.
pub fn mult_order(l: &BigInt, d: u64) -> Result<u64> {
    let not_coprime = || Error::NotCoprime { l: l.to_string(), d };
    if d == 0 {
        return Err(not_coprime());
    }
    if d == 1 {
        return Ok(1);
    }
    let a = u64::try_from(l.mod_floor(&BigInt::from(d))).unwrap();
    if gcd(a, d) != 1 {
        return Err(not_coprime());
    }
    if d <= 1_000_000 {
        let mut ord = euler_phi(d);
        for (q, _) in factor_small(ord) {
            while ord % q == 0 && pow_mod(a, ord / q, d) == 1 {
                ord /= q;
            }
        }
        return Ok(ord);
    }
    let mut x = a;
    for k in 1..=d {
        if x == 1 {
            return Ok(k);
        }
        x = mul_mod(x, a, d);
    }
    unreachable!("order of a unit divides phi(d) < d")
}
