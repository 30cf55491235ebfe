use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use twistram::cyclonorm::{elem_poly, norm_real, norm_square_check, omega, s_seq};
use twistram::flipsearch::{find_flips, validate_hypotheses};
use twistram::knotpoly::{alexander, cheb_phi, f_poly, g_poly, newton_cert, validate_structure};
use twistram::poly_core::{
    cyclotomic, factorize, isqrt, real_cyclotomic, resultant, resultant_mod, unfold_real,
    FactorBudget, IntPoly,
};
use twistram::ramify::{certify, order_sanity, table, Status, TableRow};

fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 1..=max_deg + 1)
        .prop_map(|c| IntPoly::from_i64s(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn monic_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 0..=max_deg).prop_map(|mut c| {
        c.push(1);
        IntPoly::from_i64s(&c)
    })
}

// poly_core

#[test]
fn cyclotomic_degrees_and_products() {
    for d in 1u64..=200 {
        let phi = cyclotomic(d);
        assert_eq!(phi.degree(), Some(euler_phi(d) as usize), "d = {d}");
        let prod = (1..=d)
            .filter(|e| d % e == 0)
            .fold(IntPoly::one(), |acc, e| &acc * &cyclotomic(e));
        assert_eq!(prod, IntPoly::x_pow_minus_one(d as usize), "d = {d}");
    }
}

#[test]
fn real_cyclotomic_unfolds_to_cyclotomic() {
    for d in (3u64..=200).step_by(2) {
        let psi = real_cyclotomic(d).unwrap();
        assert!(psi.is_monic());
        assert_eq!(psi.degree(), Some((euler_phi(d) / 2) as usize));
        assert_eq!(unfold_real(&psi), cyclotomic(d), "d = {d}");
    }
}

proptest! {
    #[test]
    fn normalized_polys(c in prop::collection::vec(-5i64..=5, 0..8)) {
        let p = IntPoly::from_i64s(&c);
        match p.degree() {
            None => prop_assert!(p.coeffs().is_empty()),
            Some(n) => {
                prop_assert_eq!(n, p.coeffs().len() - 1);
                prop_assert!(!p.leading().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn resultant_swap_sign(f in small_poly(5), g in small_poly(5)) {
        let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
        let sign = if (df * dg) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        prop_assert_eq!(resultant(&f, &g).unwrap() * sign, resultant(&g, &f).unwrap());
    }

    #[test]
    fn resultant_mod_matches_reduction(f in monic_poly(6), g in small_poly(4), m in 2u64..5000) {
        let exact = resultant(&f, &g).unwrap();
        let want = exact.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        prop_assert_eq!(resultant_mod(&f, &g, m).unwrap(), want);
    }

    #[test]
    fn factorization_reassembles(hi in any::<u64>(), lo in any::<u64>(), negative in any::<bool>()) {
        let mut n: BigInt = (BigInt::from(hi) << 64u32) + BigInt::from(lo);
        if n.is_zero() {
            n = BigInt::one();
        }
        if negative {
            n = -n;
        }
        let budget = FactorBudget { rho_iter_cap: 1 << 18, wall_ms: 5_000, ..FactorBudget::default() };
        let f = factorize(&n, &budget).unwrap();
        prop_assert_eq!(f.value(), n.clone());
        prop_assert_eq!(f.sign as i32, if n.is_negative() { -1 } else { 1 });
        prop_assert_eq!(f.complete, f.cofactor.is_none());
        for p in &f.factors {
            prop_assert!(twistram::poly_core::is_probable_prime(&p.prime));
            prop_assert!(p.multiplicity >= 1);
        }
        if let Some(c) = &f.cofactor {
            prop_assert!(c > &BigInt::one());
        }
    }

    #[test]
    fn isqrt_of_squares(k in any::<u128>()) {
        let k = BigInt::from(k);
        prop_assert_eq!(isqrt(&(&k * &k)).unwrap(), k.clone());
        prop_assert!(isqrt(&(&k * &k + 1u32)).is_err() || k.is_zero());
    }

    #[test]
    fn factorization_is_deterministic(n in 2u64.., seed in any::<u64>()) {
        let budget = FactorBudget { seed, ..FactorBudget::default() };
        let n = BigInt::from(n);
        prop_assert_eq!(factorize(&n, &budget).unwrap(), factorize(&n, &budget).unwrap());
    }
}

// knotpoly

#[test]
fn cheb_phi_recurrence_symmetry_degree() {
    let u = IntPoly::from_i64s(&[0, 1]);
    for i in -100i64..=100 {
        if (-98..=98).contains(&i) {
            let lhs = cheb_phi(i + 2).poly;
            let rhs = &(&u * &cheb_phi(i).poly) - &cheb_phi(i - 2).poly;
            assert_eq!(lhs, rhs, "i = {i}");
        }
        let sign = if (i + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        assert_eq!(cheb_phi(i).poly, cheb_phi(-i).poly.scale(&sign), "i = {i}");
        if i != 0 {
            let want = ((i.unsigned_abs() - 1) / 2) as usize;
            assert_eq!(cheb_phi(i).poly.degree(), Some(want), "i = {i}");
        }
    }
}

#[test]
fn character_variety_structure() {
    let two = BigInt::from(2);
    for t in (3u64..=99).step_by(2) {
        let report = validate_structure(t).unwrap();
        assert!(report.passed(), "t = {t}: {:?}", report.checks);
        let f = f_poly(t).unwrap();
        assert_eq!(f.bidegree(), (t as u32, 2));
        assert_eq!(f.r_coeff(t as u32), IntPoly::one());
        assert_eq!(f.r_coeff(t as u32 - 1), IntPoly::from_i64s(&[1, 0, -1]));
        assert!(f.terms().all(|((_, j), _)| j % 2 == 0));

        // x^2 f_t(2, x + 1/x) + Delta(x^2), expanded directly
        let f2 = f.eval_r(&two);
        assert!(f2.degree() <= Some(2));
        let lhs = &(&IntPoly::monomial(f2.coeff(0), 2)
            + &IntPoly::from_i64s(&[0, 1, 0, 1]).scale(&f2.coeff(1)))
            + &IntPoly::from_i64s(&[1, 0, 2, 0, 1]).scale(&f2.coeff(2));
        assert!((&lhs + &alexander(t).unwrap().substitute_power(2)).is_zero(), "t = {t}");

        assert_eq!(g_poly(t).unwrap().eval_var2(&BigInt::one()), f.eval_var2(&two), "t = {t}");
    }
}

#[test]
fn newton_polygons_certify() {
    for t in (3u64..=99).step_by(2) {
        for m in 1..=t {
            assert!(newton_cert(t, m).unwrap(), "t = {t}, m = {m}");
        }
    }
}

// cyclonorm

#[test]
fn omega_matches_s() {
    for t in (3u64..=29).step_by(2) {
        for n in (1u64..=200).step_by(2) {
            let w = omega(t, n).unwrap();
            let s = s_seq(t, n).unwrap().s;
            assert_eq!(w.abs(), s.abs(), "t = {t}, n = {n}");
            if n % 4 == 1 {
                assert_eq!(w, s, "t = {t}, n = {n}");
            }
        }
    }
}

#[test]
fn residues_mod_fifteen_for_twenty_nine() {
    let m = BigInt::from(15);
    for d in (1u64..=99).step_by(2) {
        assert_eq!(norm_real(29, d).unwrap().value.mod_floor(&m), BigInt::one(), "d = {d}");
    }
    for n in (1u64..=200).step_by(2) {
        let want = if n % 4 == 1 { 1 } else { 14 };
        assert_eq!(s_seq(29, n).unwrap().s.mod_floor(&m), BigInt::from(want), "n = {n}");
    }
}

#[test]
fn norms_are_square_roots_of_full_resultants() {
    for t in [3u64, 5, 29] {
        for d in (1u64..=99).step_by(2) {
            assert!(norm_square_check(t, d).unwrap(), "t = {t}, d = {d}");
        }
    }
}

proptest! {
    #[test]
    fn norm_residues(t in (1u64..=14).prop_map(|k| 2 * k + 1), d in (1u64..=30).prop_map(|k| 2 * k + 1), m in 2u64..100_000) {
        let psi = real_cyclotomic(d).unwrap();
        let want = norm_real(t, d).unwrap().value.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        prop_assert_eq!(resultant_mod(&psi, &elem_poly(t).unwrap(), m).unwrap(), want);
    }
}

// ramify

fn quick_budget() -> FactorBudget {
    FactorBudget { rho_iter_cap: 1 << 22, wall_ms: 10_000, ..FactorBudget::default() }
}

fn table_29() -> &'static Vec<TableRow> {
    static ROWS: OnceLock<Vec<TableRow>> = OnceLock::new();
    ROWS.get_or_init(|| table(29, 5, 99, &quick_budget()).unwrap())
}

#[test]
fn certified_primes_are_minus_one_mod_d() {
    for row in table_29() {
        let TableRow::Certified(c) = row else { panic!("row failed: {row:?}") };
        for r in &c.ramified {
            assert_eq!(r.l.mod_floor(&BigInt::from(c.d)), BigInt::from(c.d - 1));
            assert_eq!(r.multiplicity % 2, 1);
            assert!(!BigInt::from(2 * c.d).is_multiple_of(&r.l));
        }
        assert_eq!(c.factorization.value().abs(), c.norm.value.abs(), "d = {}", c.d);
        assert_eq!(c.norm.value, norm_real(29, c.d).unwrap().value);
        if c.status == Status::Complete {
            assert!(order_sanity(29, c.d, &c.factorization).is_empty(), "d = {}", c.d);
        }
    }
}

#[test]
fn certified_primes_do_not_recur() {
    let mut seen: BTreeMap<BigInt, u64> = BTreeMap::new();
    for row in table_29() {
        let TableRow::Certified(c) = row else { continue };
        for l in c.ramified_primes() {
            if let Some(prev) = seen.insert(l.clone(), c.d) {
                panic!("{l} certified for d = {prev} and d = {}", c.d);
            }
        }
    }
    assert!(!seen.is_empty());
}

#[test]
fn certificates_are_deterministic() {
    for d in [11u64, 45, 47, 53] {
        let a = certify(29, d, &quick_budget()).unwrap();
        let b = certify(29, d, &quick_budget()).unwrap();
        assert_eq!(a, b, "d = {d}");
    }
}

// flipsearch

#[test]
fn chains_alternate_and_divide() {
    for (t, p, q) in [(29u64, 3u64, 5u64), (29, 5, 3)] {
        assert!(validate_hypotheses(t, p, q).is_empty());
        let s = find_flips(t, p, q, 3, 6).unwrap();
        for point in &s.chain {
            assert_eq!(point.n % 2, 1);
            assert_eq!(point.n, p.pow(point.u) * q.pow(point.v));
            if p % 4 == 3 {
                assert_eq!(point.u % 2, 0);
            }
            if q % 4 == 3 {
                assert_eq!(point.v % 2, 0);
            }
        }
        for w in &s.witnesses {
            assert_eq!(w.n_next % w.n_prev, 0);
            assert_eq!(w.sign_prev, -w.sign_next);
        }
        for pair in s.witnesses.windows(2) {
            if pair[1].n_next % pair[0].n_next == 0 {
                assert_eq!(pair[0].sign_next, pair[1].sign_prev);
            }
        }
    }
}
