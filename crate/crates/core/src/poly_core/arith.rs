//! Machine-word number theory: modular arithmetic, small factorizations,
//! divisors and Euler's totient.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization by trial division. Intended for surgery coefficients
/// and moduli, which are small.
pub fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_small(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factor_small(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> u64 {
    factor_small(n).into_iter().map(|(p, _)| p).product()
}

pub fn is_prime_power(n: u64) -> bool {
    factor_small(n).len() == 1
}

pub fn is_prime_u64(n: u64) -> bool {
    n >= 2 && factor_small(n) == [(n, 1)]
}

/// Combine `x = r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut modulus: u128 = 1;
    for &(r, m) in residues {
        let m128 = m as u128;
        // x + modulus * k = r (mod m)
        let diff = (r as u128 + m128 - (x % m128)) % m128;
        let inv = inv_mod((modulus % m128) as u64, m).expect("pairwise coprime moduli") as u128;
        let k = diff * inv % m128;
        x += modulus * k;
        modulus *= m128;
    }
    x as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        assert_eq!(factor_small(28125), vec![(3, 2), (5, 5)]);
        assert_eq!(factor_small(97), vec![(97, 1)]);
        assert_eq!(factor_small(1), vec![]);
        assert_eq!(divisors(45), vec![1, 3, 5, 9, 15, 45]);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(euler_phi(28125), 15000);
        assert_eq!(radical(28125), 15);
        assert!(is_prime_power(49));
        assert!(!is_prime_power(45));
    }

    #[test]
    fn modular() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(3, 9), None);
        assert_eq!(pow_mod(13, 2, 7), 1);
        assert_eq!(crt(&[(2, 3), (3, 5)]), 8);
    }
}
