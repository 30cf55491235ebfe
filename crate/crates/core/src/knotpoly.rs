//! Character-variety polynomials of twist knots.
//!
//! `h_t(R, Y) = Phi_t(R) Phi_{-t-1}(R) (Y - R) - 1`, `f_t(R, Z) = h_t(R, Z^2 - 2)`
//! and `g_t(R, Z) = Z^2 f_t(R, Z + 1/Z)`, together with the Alexander
//! polynomial and a Newton-polygon irreducibility certificate for `g_t(R, Z^m)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly_core::IntPoly;

/// Name of the second variable of a [`BiPoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var2 {
    Y,
    Z,
}

impl Var2 {
    fn as_str(self) -> &'static str {
        match self {
            Var2::Y => "Y",
            Var2::Z => "Z",
        }
    }
}

/// Sparse polynomial in `R` and a second variable. Keys are `(deg_R, deg_2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
    var2: Var2,
}

impl BiPoly {
    pub fn zero(var2: Var2) -> Self {
        BiPoly { terms: BTreeMap::new(), var2 }
    }

    pub fn var2(&self) -> Var2 {
        self.var2
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(max deg_R, max deg_2)`; `(0, 0)` for the zero polynomial.
    pub fn bidegree(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    /// Coefficient of `R^i` as a polynomial in the second variable.
    pub fn r_coeff(&self, i: u32) -> IntPoly {
        let mut c = Vec::new();
        for (&(ri, j), v) in self.terms.range((i, 0)..=(i, u32::MAX)) {
            debug_assert_eq!(ri, i);
            let j = j as usize;
            if c.len() <= j {
                c.resize(j + 1, BigInt::zero());
            }
            c[j] = v.clone();
        }
        IntPoly::new(c)
    }

    /// Specialise the second variable, leaving a polynomial in `R`.
    pub fn eval_var2(&self, v: &BigInt) -> IntPoly {
        let (dr, _) = self.bidegree();
        let coeffs = (0..=dr).map(|i| self.r_coeff(i).eval(v)).collect();
        IntPoly::new(coeffs)
    }

    /// Specialise `R`, leaving a polynomial in the second variable.
    pub fn eval_r(&self, r: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero();
        let (dr, _) = self.bidegree();
        for i in (0..=dr).rev() {
            out = &(&out * &IntPoly::constant(r.clone())) + &self.r_coeff(i);
        }
        out
    }

    /// Replace the second variable by `q(Z)`.
    pub fn substitute_var2(&self, q: &IntPoly, var2: Var2) -> BiPoly {
        let (_, d2) = self.bidegree();
        let mut powers = vec![IntPoly::one()];
        for k in 1..=d2 as usize {
            let next = &powers[k - 1] * q;
            powers.push(next);
        }
        let mut out = BiPoly::zero(var2);
        for (&(i, j), c) in &self.terms {
            for (k, a) in powers[j as usize].coeffs().iter().enumerate() {
                out.add_term(i, k as u32, &(c * a));
            }
        }
        out
    }

    /// `Z^D p(R, Z + 1/Z)` with `D` the degree in the second variable, so that
    /// every Laurent exponent `D - j + (2k - j')` is nonnegative.
    pub fn laurent_symmetrize(&self) -> BiPoly {
        let (_, d2) = self.bidegree();
        let mut out = BiPoly::zero(Var2::Z);
        for (&(i, j), c) in &self.terms {
            // Z^(D-j) (Z^2 + 1)^j
            let mut binom = BigInt::one();
            for k in 0..=j {
                out.add_term(i, d2 - j + 2 * k, &(c * &binom));
                binom = binom * (j - k) / (k + 1);
            }
        }
        out
    }

    /// `p(R, Z^m)`
    pub fn stretch_var2(&self, m: u32) -> BiPoly {
        let mut out = BiPoly::zero(self.var2);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j * m, c);
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let v = self.var2.as_str();
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut mono = String::new();
            for (name, e) in [("R", i), (v, j)] {
                match e {
                    0 => {}
                    1 => mono.push_str(name),
                    _ => mono.push_str(&format!("{name}^{e}")),
                }
            }
            if mono.is_empty() || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            f.write_str(&mono)?;
        }
        Ok(())
    }
}

/// `Phi_i` from the `sigma`/`tau` recurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebPhi {
    pub index: i64,
    pub poly: IntPoly,
}

fn sigma(k: i64) -> IntPoly {
    let n = k.unsigned_abs();
    let u = IntPoly::from_i64s(&[0, 1]);
    let (mut prev, mut cur) = (IntPoly::zero(), IntPoly::one());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(&u * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    if k < 0 {
        -&cur
    } else {
        cur
    }
}

/// `Phi_{2i} = sigma_i`, `Phi_{2i-1} = sigma_i - sigma_{i-1}`.
pub fn cheb_phi(i: i64) -> ChebPhi {
    let poly = if i.is_even() {
        sigma(i / 2)
    } else {
        let k = (i + 1).div_euclid(2);
        &sigma(k) - &sigma(k - 1)
    };
    ChebPhi { index: i, poly }
}

fn check_twist(t: u64) -> Result<()> {
    if t < 3 || t % 2 == 0 {
        return Err(Error::InvalidTwist(t as i64));
    }
    Ok(())
}

fn half(t: u64) -> BigInt {
    BigInt::from((t + 1) / 2)
}

pub fn h_poly(t: u64) -> Result<BiPoly> {
    check_twist(t)?;
    let ti = t as i64;
    let p = &cheb_phi(ti).poly * &cheb_phi(-ti - 1).poly;
    let pr = &p * &IntPoly::from_i64s(&[0, 1]);
    let mut h = BiPoly::zero(Var2::Y);
    for (i, c) in p.coeffs().iter().enumerate() {
        h.add_term(i as u32, 1, c);
    }
    for (i, c) in pr.coeffs().iter().enumerate() {
        h.add_term(i as u32, 0, &-c);
    }
    h.add_term(0, 0, &-BigInt::one());
    Ok(h)
}

pub fn f_poly(t: u64) -> Result<BiPoly> {
    Ok(h_poly(t)?.substitute_var2(&IntPoly::from_i64s(&[-2, 0, 1]), Var2::Z))
}

pub fn g_poly(t: u64) -> Result<BiPoly> {
    Ok(f_poly(t)?.laurent_symmetrize())
}

/// `((t+1)/2) x^2 - t x + (t+1)/2`
pub fn alexander(t: u64) -> Result<IntPoly> {
    check_twist(t)?;
    let h = half(t);
    Ok(IntPoly::new(vec![h.clone(), -BigInt::from(t), h]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub t: u64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }
}

/// Structural checks on `f_t`. Failures are recorded, never raised.
pub fn validate_structure(t: u64) -> Result<ValidationReport> {
    let f = f_poly(t)?;
    let mut report = ValidationReport { t, checks: Vec::new() };
    let t32 = t as u32;

    let bideg = f.bidegree();
    report.push("bidegree", bideg == (t32, 2), format!("{bideg:?}"));

    let odd: Vec<_> = f.terms().filter(|((_, j), _)| j % 2 == 1).map(|(k, _)| k).collect();
    report.push("even_z_powers", odd.is_empty(), format!("odd terms: {odd:?}"));

    let lead = f.r_coeff(t32);
    report.push("monic_in_r", lead == IntPoly::one(), lead.display_var("Z"));

    let second = f.r_coeff(t32 - 1);
    let want_second = IntPoly::from_i64s(&[1, 0, -1]);
    report.push("second_coefficient", second == want_second, second.display_var("Z"));

    let constant = f.r_coeff(0);
    let want_constant = if t % 4 == 1 {
        IntPoly::from_i64s(&[1, 0, -1])
    } else {
        IntPoly::from_i64s(&[-1])
    };
    report.push("constant_term", constant == want_constant, constant.display_var("Z"));

    // x^2 f_t(2, x + 1/x) + Delta(x^2)
    let two = BigInt::from(2);
    let f2 = f.eval_r(&two);
    let mut lhs = BiPoly::zero(Var2::Z);
    for (j, c) in f2.coeffs().iter().enumerate() {
        lhs.add_term(0, j as u32, c);
    }
    let lhs = lhs.laurent_symmetrize().r_coeff(0);
    let identity = &lhs + &alexander(t)?.substitute_power(2);
    report.push(
        "alexander_identity",
        identity.is_zero() && f2.degree() == Some(2),
        format!("residual {}", identity.display_var("x")),
    );

    let bad: Vec<i64> = (-2 * t as i64..=2 * t as i64)
        .filter(|&i| i != 0)
        .filter(|&i| {
            let want = if i % 2 == 0 { BigInt::from(i / 2) } else { BigInt::one() };
            cheb_phi(i).poly.eval(&two) != want
        })
        .collect();
    report.push("phi_at_two", bad.is_empty(), format!("mismatches at {bad:?}"));

    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonCertificate {
    pub t: u64,
    pub m: u64,
    /// Hull vertices `(Z exponent, R exponent)`, counter-clockwise from the
    /// lexicographically smallest.
    pub vertices: Vec<(i64, i64)>,
    pub gcd: i64,
    pub certified: bool,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Convex hull by monotone chain, strict vertices only.
pub fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Newton polygon of `g_t(R, Z^m)`: certified when the gcd of all vertex
/// coordinates is 1. The three top vertices are checked against
/// `(0, t-1), (2m, t), (4m, t-1)`.
pub fn newton_certificate(t: u64, m: u64) -> Result<NewtonCertificate> {
    check_twist(t)?;
    let m = m.max(1);
    let g = g_poly(t)?.stretch_var2(m as u32);
    let pts: Vec<(i64, i64)> = g.terms().map(|((i, j), _)| (j as i64, i as i64)).collect();
    let vertices = convex_hull(pts);

    let (ti, mi) = (t as i64, m as i64);
    let mut top: Vec<_> = vertices.iter().copied().filter(|v| v.1 >= ti - 1).collect();
    top.sort_unstable();
    let want = vec![(0, ti - 1), (2 * mi, ti), (4 * mi, ti - 1)];
    if top != want {
        return Err(Error::NewtonTopMismatch { t, m, found: format!("{top:?}") });
    }

    let gcd = vertices.iter().fold(0i64, |acc, &(a, b)| acc.gcd(&a).gcd(&b));
    Ok(NewtonCertificate { t, m, vertices, gcd, certified: gcd == 1 })
}

pub fn newton_cert(t: u64, m: u64) -> Result<bool> {
    Ok(newton_certificate(t, m)?.certified)
}
