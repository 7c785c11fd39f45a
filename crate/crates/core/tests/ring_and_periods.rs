use binomod::class_sums::{aks_polynomial_check, class_sum, class_sum_oracle, class_sum_profile, ClassSumQuery};
use binomod::congruence_suite::{verify_lemma21, verify_theorem12};
use binomod::intnum::{factorize, gcd_int, pow_mod, residue};
use binomod::periods::{admissible, mu, mu_exhaustive, nu, Admissibility};
use binomod::{CyclicPoly, Modulus};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

const MODULI: [u64; 9] = [2, 4, 5, 8, 9, 25, 27, 121, 1_000_003];

fn modulus() -> impl Strategy<Value = Modulus> {
    (prop::sample::select(MODULI.to_vec()), 1u32..3).prop_map(|(q, e)| Modulus::from_u64(q, e).unwrap())
}

fn poly(m: usize, md: &Modulus) -> impl Strategy<Value = CyclicPoly> {
    let md = md.clone();
    prop::collection::vec(-1000i64..1000, m)
        .prop_map(move |c| CyclicPoly::new(&md, &c.into_iter().map(BigInt::from).collect::<Vec<_>>()).unwrap())
}

fn triple() -> impl Strategy<Value = (CyclicPoly, CyclicPoly, CyclicPoly)> {
    (1usize..10, modulus()).prop_flat_map(|(m, md)| (poly(m, &md), poly(m, &md), poly(m, &md)))
}

fn small_coprime_pair() -> impl Strategy<Value = (u64, usize)> {
    (2u64..30, 1usize..10).prop_filter("gcd(q, m) = 1", |(q, m)| q.gcd(&(*m as u64)) == 1)
}

fn profile(n: u64, m: usize, a: i64, md: &Modulus) -> Vec<BigUint> {
    class_sum_profile(&BigUint::from(n), m, &BigInt::from(a), md).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn ring_is_commutative_and_associative((x, y, z) in triple()) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn coefficient_sum_is_a_homomorphism((x, y, _z) in triple()) {
        let modv = x.modulus().value().clone();
        let prod = x.mul(&y).unwrap();
        prop_assert_eq!(prod.eval_at_one(), (x.eval_at_one() * y.eval_at_one()) % modv);
    }

    #[test]
    fn powers_add((x, _y, _z) in triple(), s in 0u64..500, t in 0u64..500) {
        let lhs = x.pow_u64(s + t);
        let rhs = x.pow_u64(s).mul(&x.pow_u64(t)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn class_sum_matches_oracle(n in 0u64..2000, r in -30i64..30, m in 1usize..16, a in -50i64..50, md in modulus()) {
        let q = ClassSumQuery::new(n, r, m, a, &md);
        prop_assert_eq!(class_sum(&q).unwrap(), class_sum_oracle(&q).unwrap());
    }

    #[test]
    fn classes_add_up_to_the_full_row(n in 0u64..5000, m in 1usize..16, a in -50i64..50, md in modulus()) {
        let modv = md.value();
        let total = profile(n, m, a, &md).into_iter().fold(BigUint::zero(), |s, c| (s + c) % modv);
        prop_assert_eq!(total, pow_mod(&BigInt::from(1 + a), &BigUint::from(n), modv));
    }

    #[test]
    fn pascal_recurrence(n in 0u64..5000, m in 1usize..16, a in -50i64..50, md in modulus()) {
        let modv = md.value();
        let cur = profile(n, m, a, &md);
        let next = profile(n + 1, m, a, &md);
        let a_res = residue(&BigInt::from(a), modv);
        for r in 0..m {
            let prev = &cur[(r + m - 1) % m];
            prop_assert_eq!(&next[r], &((&cur[r] + &a_res * prev) % modv));
        }
    }

    #[test]
    fn alternating_classes_for_even_m(n in 0u64..5000, half in 1usize..8, a in -50i64..50, md in modulus()) {
        let m = 2 * half;
        let modv = md.value();
        let mut acc = BigInt::zero();
        for (r, c) in profile(n, m, a, &md).into_iter().enumerate() {
            if r % 2 == 0 { acc += BigInt::from(c) } else { acc -= BigInt::from(c) }
        }
        prop_assert_eq!(residue(&acc, modv), pow_mod(&BigInt::from(1 - a), &BigUint::from(n), modv));
    }

    #[test]
    fn shifting_r_by_m_is_invisible(n in 0u64..10_000, r in -100i64..100, m in 1usize..16, a in -50i64..50, k in -5i64..5) {
        let md = Modulus::from_u64(9, 2).unwrap();
        let base = class_sum(&ClassSumQuery::new(n, r, m, a, &md)).unwrap();
        let shifted = class_sum(&ClassSumQuery::new(n, r + k * m as i64, m, a, &md)).unwrap();
        prop_assert_eq!(base, shifted);
    }

    #[test]
    fn aks_routes_agree(a in -20i64..20, b in -20i64..20, q in prop::sample::select(vec![2u64, 3, 4, 6, 9, 10, 15, 49, 91]), m in 1usize..12, n in 1u64..400) {
        // the check itself raises an internal error if the two routes disagree
        let rep = aks_polynomial_check(&BigInt::from(a), &BigInt::from(b), &BigUint::from(q), m, &BigUint::from(n)).unwrap();
        prop_assert_eq!(rep.holds, rep.class_residues == rep.expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nu_annihilates_units((q, m) in small_coprime_pair(), a in -200i64..200) {
        let qb = BigUint::from(q);
        let nu = nu(m, &qb).unwrap();
        prop_assume!(a.unsigned_abs().gcd(&q) == 1);
        prop_assert!(pow_mod(&BigInt::from(a), &nu, &qb).is_one());
    }

    #[test]
    fn mu_is_a_minimal_period_dividing_nu((q, m) in small_coprime_pair(), a in -40i64..40) {
        let qb = BigUint::from(q);
        let ab = BigInt::from(a);
        let class = admissible(&ab, m, &qb).unwrap();
        let rep = match mu(m, &ab, &qb) {
            Ok(rep) => rep,
            Err(e) => {
                prop_assert!(e.is_precondition());
                prop_assert_eq!(class, Admissibility::Inadmissible);
                return Ok(());
            }
        };
        let period = rep.mu.clone().unwrap();
        prop_assert!((&rep.nu % &period).is_zero());

        // witness: (1+ax)^(mu+1) == 1+ax, checked on the Pascal-row route
        let md = Modulus::from_u64(q, 1).unwrap();
        let p: u64 = (&period).try_into().unwrap();
        if p < 20_000 {
            for r in 0..m as i64 {
                let at = |n: u64| class_sum_oracle(&ClassSumQuery::new(n, r, m, a, &md)).unwrap();
                prop_assert_eq!(at(p + 1), at(1), "r={}", r);
            }
        }
        // no maximal proper divisor is a period
        let base = CyclicPoly::one_plus_ax(&ab, m, &md).unwrap();
        let primes = if period.is_one() { vec![] } else { factorize(&period).unwrap().primes().cloned().collect() };
        for prime in &primes {
            let smaller = &period / prime;
            prop_assert!(base.pow(&(smaller + 1u32)) != base);
        }
        // the step-by-step scan agrees
        if p < 100_000 {
            let scanned = mu_exhaustive(m, &ab, &qb, p).unwrap();
            prop_assert_eq!(scanned, Some(p));
        }
    }

    #[test]
    fn unit_powers_collapse_when_the_constant_term_is_a_unit((q, m) in small_coprime_pair(), a in -40i64..40) {
        let qb = BigUint::from(q);
        let norm = BigInt::one() - (-BigInt::from(a)).pow(m as u32);
        prop_assume!(gcd_int(&norm, &BigInt::from(q)).is_one());
        prop_assume!(gcd_int(&BigInt::from(1 + a), &BigInt::from(q)).is_one());
        let md = Modulus::from_u64(q, 1).unwrap();
        let nu = nu(m, &qb).unwrap();
        // x - 1 and the cyclotomic part are coprime since m is a unit mod q,
        // so vanishing on both pieces means (1+ax)^nu is exactly 1
        let full = CyclicPoly::one_plus_ax(&BigInt::from(a), m, &md).unwrap().pow(&nu);
        prop_assert!(full.is_identity());
        if m >= 2 {
            let rep = verify_lemma21(&qb, m, &BigInt::from(a)).unwrap();
            prop_assert!(rep.holds);
        }
    }

    #[test]
    fn theorem12_on_larger_multiples_of_nu(
        q in prop::sample::select(vec![4u64, 5, 7, 8, 11, 16, 17, 23, 49]),
        m in 1usize..12, a in -10i64..10, l in 0u64..8, n in 1u32..5, k in 1u32..4, r in 0i64..12,
    ) {
        prop_assume!(q.gcd(&(m as u64)) == 1);
        let qb = BigUint::from(q);
        let t = nu(m, &qb).unwrap() * k;
        match verify_theorem12(&qb, m, &BigInt::from(a), l, &BigInt::from(r), n, &t) {
            Ok(rep) => prop_assert!(rep.holds, "{:?}", rep),
            Err(e) => prop_assert!(e.is_precondition(), "{}", e),
        }
    }
}

#[test]
fn nu_of_p_minus_one_is_phi() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        for alpha in 1..=4u32 {
            let pa = BigUint::from(p).pow(alpha);
            let phi = BigUint::from(p).pow(alpha - 1) * (p - 1);
            assert_eq!(nu((p - 1) as usize, &pa).unwrap(), phi, "p={p} alpha={alpha}");
        }
    }
}

#[test]
fn mu_of_zero_is_one() {
    for q in 2..40u64 {
        for m in (1..10usize).filter(|m| q.gcd(&(*m as u64)) == 1) {
            let rep = mu(m, &BigInt::zero(), &BigUint::from(q)).unwrap();
            assert_eq!(rep.mu, Some(BigUint::one()), "q={q} m={m}");
        }
    }
}
