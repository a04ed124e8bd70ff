//! Randomized property suites over the arithmetic core: each suite runs at
//! least 200 cases.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use tamagawa::abc::{raw_candidates, AbcTriple};
use tamagawa::arith::{self, StepBudget};
use tamagawa::curve::WeierstrassCurve;
use tamagawa::isogeny::{self, torsion_points, velu};
use tamagawa::reduction::{self, ReductionKind};

fn coprime_triple() -> impl Strategy<Value = AbcTriple> {
    (1u64..400, 1u64..400)
        .prop_filter_map("valid abc shape", |(x, y)| {
            let (a, b) = if x < y { (x, y) } else { (y, x) };
            if a == b || a.gcd(&b) != 1 {
                return None;
            }
            AbcTriple::new(BigUint::from(a), BigUint::from(b), BigUint::from(a + b)).ok()
        })
}

fn squarefree_twist() -> impl Strategy<Value = BigInt> {
    prop::sample::select(vec![
        1i64, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 11, -11, 13, -13, 15, -15,
    ])
    .prop_map(BigInt::from)
}

fn small_curve() -> impl Strategy<Value = WeierstrassCurve> {
    (0i64..=1, -1i64..=1, 0i64..=1, -40i64..=40, -40i64..=40)
        .prop_filter_map("nonsingular", |(a1, a2, a3, a4, a6)| {
            WeierstrassCurve::from_i64([a1, a2, a3, a4, a6]).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(220))]

    // (a) Frey discriminant identity: disc = 16 d^6 (abc)^2, exactly
    #[test]
    fn frey_discriminant_identity(t in coprime_triple(), d in squarefree_twist()) {
        let e = WeierstrassCurve::frey(&t, &d).unwrap();
        let abc = BigInt::from(t.a() * t.b() * t.c());
        prop_assert_eq!(e.discriminant(), BigInt::from(16) * d.pow(6) * &abc * &abc);
    }

    // (d) derived-triple identities: A + B = C and gcd(A, B) = 1 after the
    // swap/divide rules, plus the companion-tuple exchange identities
    #[test]
    fn derived_triple_identities(t in coprime_triple()) {
        for cand in t.derive_triples() {
            prop_assert_eq!(&cand.a + &cand.b, cand.c.clone(), "label {}", cand.label);
            prop_assert!(cand.a.gcd(&cand.b).is_one(), "label {}", cand.label);
        }
        // raw A1 on (a, 2b, e) equals raw A4 on (a, b, c); raw A3 on
        // (2a, b, d) equals raw A2 on (a, b, c) up to the ordering swap
        let (a, b, c) = (t.a().clone(), t.b().clone(), t.c().clone());
        let d = &a + &c;
        let e = &b + &c;
        let from_companion = raw_candidates(&a, &(2u32 * &b), &e);
        let a4_raw = (&a * &a, BigUint::from(4u32) * &b * &c, &e * &e);
        prop_assert_eq!(&from_companion[0].0, &a4_raw.0);
        prop_assert_eq!(&from_companion[0].1, &a4_raw.1);
        prop_assert_eq!(&from_companion[0].2, &a4_raw.2);
        let from_companion = raw_candidates(&(2u32 * &a), &b, &d);
        let mut lhs = [from_companion[2].0.clone(), from_companion[2].1.clone()];
        lhs.sort();
        let mut rhs = [&b * &b, BigUint::from(4u32) * &a * &c];
        rhs.sort();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(&from_companion[2].2, &(&d * &d));
    }

    // (e) minimal_model is idempotent and never increases |disc|
    #[test]
    fn minimal_model_idempotent(e in small_curve()) {
        let (m, tr) = e.minimal_model();
        prop_assert!(m.discriminant().abs() <= e.discriminant().abs());
        prop_assert!((e.discriminant() % m.discriminant()).is_zero());
        let (m2, tr2) = m.minimal_model();
        prop_assert_eq!(&m2, &m);
        prop_assert_eq!(tr2.u, num_rational::BigRational::one());
        prop_assert_eq!(e.j_invariant(), m.j_invariant());
        prop_assert_eq!(e.transformed(&tr).unwrap(), m);
    }

    // (f) 1728 disc = c4^3 - c6^2 on every constructed curve
    #[test]
    fn c_invariant_relation(e in small_curve()) {
        let inv = e.invariants();
        prop_assert_eq!(BigInt::from(1728) * &inv.disc, &inv.c4 * &inv.c4 * &inv.c4 - &inv.c6 * &inv.c6);
        prop_assert_eq!(BigInt::from(4) * &inv.b8, &inv.b2 * &inv.b6 - &inv.b4 * &inv.b4);
    }

    // (g) factor and is_prime agree with direct trial division below 10^6
    #[test]
    fn factor_matches_sieve_oracle(n in 1u64..1_000_000) {
        let mut m = n;
        let mut oracle = Vec::new();
        let mut d = 2u64;
        while d * d <= m {
            if m % d == 0 {
                let mut v = 0;
                while m % d == 0 { m /= d; v += 1; }
                oracle.push((BigUint::from(d), v));
            }
            d += 1;
        }
        if m > 1 {
            oracle.push((BigUint::from(m), 1));
        }
        let f = arith::factor_unbounded(&BigUint::from(n));
        prop_assert!(f.is_complete());
        prop_assert_eq!(f.factors(), &oracle[..]);
        prop_assert_eq!(f.reassemble(), BigUint::from(n));

        let naive_prime = oracle.len() == 1 && oracle[0].1 == 1 && n > 1;
        prop_assert_eq!(arith::is_prime(&BigUint::from(n)), naive_prime);

        // the radical divides n and is squarefree
        let rad = arith::radical(&[&f]).unwrap();
        prop_assert!((BigUint::from(n) % &rad).is_zero());
        let frad = arith::factor_unbounded(&rad);
        prop_assert!(frad.factors().iter().all(|(_, e)| *e == 1));
    }

    // quality and merit recomputed from scratch match the cached values
    #[test]
    fn quality_recomputation_consistent(t in coprime_triple()) {
        let fresh = AbcTriple::new(t.a().clone(), t.b().clone(), t.c().clone()).unwrap();
        prop_assert_eq!(t.quality(), fresh.quality());
        let q = t.quality();
        prop_assert_eq!(q > 1.0, t.c() > t.radical());
    }
}

proptest! {
    // Tate runs are slower; still >= 200 cases per suite.
    #![proptest_config(ProptestConfig::with_cases(200))]

    // (b) Frey curves with d = +-1: odd bad primes are multiplicative with
    // f = 1, the odd part of N is the odd part of rad(abc), and N carries at
    // most 2^8
    #[test]
    fn frey_conductor_shape(t in coprime_triple(), sign in prop::bool::ANY) {
        let d = if sign { BigInt::one() } else { -BigInt::one() };
        let e = WeierstrassCurve::frey(&t, &d).unwrap();
        let f = arith::factor_unbounded(e.discriminant().magnitude());
        let g = reduction::global_data(&e, &f).unwrap();

        let odd = |mut n: BigUint| {
            while n.is_even() { n >>= 1; }
            n
        };
        prop_assert_eq!(odd(g.conductor.clone()), odd(t.radical().clone()));
        let two = BigUint::from(2u32);
        for l in &g.locals {
            if l.p != two {
                prop_assert_eq!(l.f, 1, "odd prime {} must be multiplicative", l.p);
                prop_assert!((t.a() * t.b() * t.c() % &l.p).is_zero());
                // split-multiplicative local Tamagawa numbers are the
                // discriminant exponents
                if l.kind == ReductionKind::SplitMultiplicative {
                    let mut v = 0u64;
                    let mut dd = e.discriminant().magnitude().clone();
                    while (&dd % &l.p).is_zero() { dd /= &l.p; v += 1; }
                    prop_assert_eq!(l.c, v as u64);
                }
            } else {
                prop_assert!(l.f <= 8, "f_2 = {} exceeds 8", l.f);
            }
        }
    }

    // (c) conductor invariance under every velu step from rational torsion
    #[test]
    fn velu_preserves_conductor(e in small_curve()) {
        let f = arith::factor_unbounded(e.discriminant().magnitude());
        let g = reduction::global_data(&e, &f).unwrap();
        let tor = torsion_points(&e);
        prop_assert!(tor.points.len() <= 16);
        for (pt, order) in &tor.points {
            prop_assert_eq!(tor.points.len() as u32 % order, 0);
            let step = velu(&e, pt).unwrap();
            let fc = arith::factor_unbounded(step.codomain.discriminant().magnitude());
            let gc = reduction::global_data(&step.codomain, &fc).unwrap();
            prop_assert_eq!(&gc.conductor, &g.conductor, "kernel order {}", order);
        }
        // structure obeys Mazur's list
        let (n1, n2) = tor.structure;
        prop_assert!(n1 == 1 && (1..=10).contains(&n2) || n2 == 12 && n1 == 1
            || n1 == 2 && n2 % 2 == 0 && n2 <= 8);
    }
}
