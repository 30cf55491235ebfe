//! Ramified residue characteristics for `(d, 0)` surgery.
//!
//! A prime `l` dividing `N_d` is certified when it appears to an odd power,
//! does not divide `2d`, `t` or `(t+1)/2`, and satisfies `l = -1 (mod d)`.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclonorm::{norm_real, NormRecord};
use crate::error::{Error, Result};
use crate::poly_core::arith::is_prime_power;
use crate::poly_core::{factorize, mult_order, FactorBudget, Factorization};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedPrime {
    #[serde(with = "crate::serde_big")]
    pub l: BigInt,
    pub multiplicity: u32,
    pub l_mod_d: u64,
    pub order_mod_d: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    DividesTwoD,
    DividesTOrHalf,
    EvenMultiplicity,
    OneModD,
    OrderAnomaly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedPrime {
    #[serde(with = "crate::serde_big")]
    pub l: BigInt,
    pub reason: ExclusionReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationCertificate {
    pub t: u64,
    pub d: u64,
    pub norm: NormRecord,
    pub factorization: Factorization,
    pub ramified: Vec<RamifiedPrime>,
    pub excluded: Vec<ExcludedPrime>,
    pub status: Status,
    pub d_is_prime_power: bool,
}

impl RamificationCertificate {
    pub fn ramified_primes(&self) -> Vec<BigInt> {
        self.ramified.iter().map(|r| r.l.clone()).collect()
    }
}

fn residue(l: &BigInt, d: u64) -> u64 {
    u64::try_from(l.mod_floor(&BigInt::from(d))).unwrap()
}

fn divides(l: &BigInt, n: u64) -> bool {
    BigInt::from(n).is_multiple_of(l)
}

pub fn certify(t: u64, d: u64, budget: &FactorBudget) -> Result<RamificationCertificate> {
    if d % 2 == 0 {
        return Err(Error::EvenSurgery(d));
    }
    if d < 3 {
        return Err(Error::DegenerateRealSubfield(d));
    }
    let norm = norm_real(t, d)?;
    let factorization = factorize(&norm.value, budget)?;
    let half = (t + 1) / 2;

    let mut ramified = Vec::new();
    let mut excluded = Vec::new();
    for f in &factorization.factors {
        let l = &f.prime;
        let reason = if divides(l, 2 * d) {
            Some(ExclusionReason::DividesTwoD)
        } else if divides(l, t) || divides(l, half) {
            Some(ExclusionReason::DividesTOrHalf)
        } else if f.multiplicity % 2 == 0 {
            Some(ExclusionReason::EvenMultiplicity)
        } else {
            let rem = residue(l, d);
            if rem == 1 {
                Some(ExclusionReason::OneModD)
            } else if rem != d - 1 {
                Some(ExclusionReason::OrderAnomaly)
            } else {
                None
            }
        };
        match reason {
            Some(reason) => excluded.push(ExcludedPrime { l: l.clone(), reason }),
            None => ramified.push(RamifiedPrime {
                l: l.clone(),
                multiplicity: f.multiplicity,
                l_mod_d: residue(l, d),
                order_mod_d: mult_order(l, d)?,
            }),
        }
    }

    let status = if factorization.complete { Status::Complete } else { Status::Incomplete };
    Ok(RamificationCertificate {
        t,
        d,
        norm,
        factorization,
        ramified,
        excluded,
        status,
        d_is_prime_power: is_prime_power(d),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderAnomaly {
    #[serde(with = "crate::serde_big")]
    pub l: BigInt,
    pub order: u64,
}

/// Prime factors coprime to `2 d t (t+1)` whose order mod `d` is not 1 or 2.
pub fn order_sanity(t: u64, d: u64, factorization: &Factorization) -> Vec<OrderAnomaly> {
    let guard = BigInt::from(2u64 * d) * BigInt::from(t) * BigInt::from(t + 1);
    factorization
        .factors
        .iter()
        .filter(|f| f.prime.gcd(&guard) == BigInt::from(1))
        .filter_map(|f| {
            let order = mult_order(&f.prime, d).ok()?;
            (order > 2).then(|| OrderAnomaly { l: f.prime.clone(), order })
        })
        .collect()
}

/// One row of [`table`]: a certificate, or the error raised for that `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableRow {
    Certified(Box<RamificationCertificate>),
    Failed { d: u64, error: String },
}

impl TableRow {
    pub fn d(&self) -> u64 {
        match self {
            TableRow::Certified(c) => c.d,
            TableRow::Failed { d, .. } => *d,
        }
    }
}

/// Certificates for every odd `d` in `[max(d_min, 3), d_max]`, ascending.
pub fn table(t: u64, d_min: u64, d_max: u64, budget: &FactorBudget) -> Result<Vec<TableRow>> {
    if d_min > d_max {
        return Err(Error::EmptyRange { d_min, d_max });
    }
    let ds: Vec<u64> = (d_min.max(3)..=d_max).filter(|d| d % 2 == 1).collect();
    Ok(ds
        .into_par_iter()
        .map(|d| match certify(t, d, budget) {
            Ok(c) => TableRow::Certified(Box::new(c)),
            Err(e) => TableRow::Failed { d, error: e.to_string() },
        })
        .collect())
}

fn joined(c: &RamificationCertificate, sep: &str) -> String {
    c.ramified.iter().map(|r| r.l.to_string()).collect::<Vec<_>>().join(sep)
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Complete => "complete",
        Status::Incomplete => "incomplete",
    }
}

/// `d,primes,status` with a header line; primes are `;`-joined ascending.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("d,primes,status\n");
    for row in rows {
        match row {
            TableRow::Certified(c) => {
                out.push_str(&format!("{},{},{}\n", c.d, joined(c, ";"), status_str(c.status)))
            }
            TableRow::Failed { d, .. } => out.push_str(&format!("{d},,error\n")),
        }
    }
    out
}

pub fn table_text(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for row in rows {
        match row {
            TableRow::Certified(c) => {
                let primes = if c.ramified.is_empty() { "∅".to_string() } else { joined(c, ", ") };
                let flag = match c.status {
                    Status::Complete => "",
                    Status::Incomplete => "  (incomplete)",
                };
                out.push_str(&format!("{:>4}  {primes}{flag}\n", c.d));
            }
            TableRow::Failed { d, error } => out.push_str(&format!("{d:>4}  error: {error}\n")),
        }
    }
    out
}
