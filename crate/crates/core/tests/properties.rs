use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use apsieve_core::arith::{is_squarefree, squarefree_decompose, QuadElem, QuadField};
use apsieve_core::curves::{rank0_points, GenusOneQuartic, SearchOptions};
use apsieve_core::oracle::{Answer, FixtureStore, Question};
use apsieve_core::search::{search_box, verify_solution, BCondition, SearchSpec};
use apsieve_core::sieve::{default_primes, replay, sieve_tuple, survives_mod_p};
use apsieve_core::tuples::{extract_tuple, mirror, progression_terms, tuple_of_terms, ATuple, Progression};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100_000))]

    #[test]
    fn squarefree_reconstruction(m in any::<i64>().prop_filter("nonzero", |m| *m != 0)) {
        let m = big(m);
        let sd = squarefree_decompose(&m).unwrap();
        prop_assert_eq!(&sd.b * &sd.y * &sd.y, m.clone());
        prop_assert!(is_squarefree(&sd.b));
        prop_assert!(sd.y.is_positive());
        prop_assert_eq!(sd.b.is_negative(), m.is_negative());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn squarefree_of_built_products(b in 1i64..10_000, y in 1i64..1_000_000, z in 1i64..1_000_000) {
        // b * (y z)^2 has square part at least y z, and exactly that when b is squarefree
        let m = big(b) * big(y) * big(y) * big(z) * big(z);
        let sd = squarefree_decompose(&m).unwrap();
        prop_assert_eq!(&sd.b * &sd.y * &sd.y, m);
        let yz = big(y) * big(z);
        prop_assert!(sd.y.is_multiple_of(&yz));
        if is_squarefree(&big(b)) {
            prop_assert_eq!(sd.b, big(b));
        }
    }
}

fn progression() -> impl Strategy<Value = (i64, i64)> {
    (-1_000_000i64..1_000_000, 1i64..100_000).prop_filter("coprime, nonzero terms", |&(n, d)| {
        n.gcd(&d) == 1 && (0..5).all(|i| n + i * d != 0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn sieve_never_eliminates_a_real_progression((n, d) in progression()) {
        let p = Progression::new(n, d, 5).unwrap();
        let (t, _) = extract_tuple(&p, u64::MAX).unwrap();
        let report = sieve_tuple(&t, &default_primes()).unwrap();
        prop_assert_eq!(report.eliminated_at(), None, "tuple {} from ({}, {})", t, n, d);
        for v in &report.verdicts {
            let cert = apsieve_core::sieve::Certificate::new(&t, v);
            prop_assert!(replay(&cert).unwrap());
        }
    }

    #[test]
    fn extract_after_realize_is_identity((n, d) in progression()) {
        let p = Progression::new(n, d, 5).unwrap();
        let (t, x) = extract_tuple(&p, u64::MAX).unwrap();
        let terms = p.terms();
        // realize: a_i x_i^2 gives back the terms, and extracting again gives the same tuple
        let realized: Vec<BigInt> = t.coeffs().iter().zip(&x).map(|(&a, xi)| big(a) * xi * xi).collect();
        prop_assert_eq!(&realized, &terms);
        let (t2, x2) = tuple_of_terms(&realized, u64::MAX).unwrap();
        prop_assert_eq!(t2, t);
        prop_assert_eq!(x2, x);
    }

    #[test]
    fn mirror_reading_agrees((n, d) in progression()) {
        let p = Progression::new(n, d, 5).unwrap();
        let (t, _) = extract_tuple(&p, u64::MAX).unwrap();
        let last = big(n) + big(d) * 4;
        let back = progression_terms(&last, &big(-d), 5);
        let (tm, _) = tuple_of_terms(&back, u64::MAX).unwrap();
        prop_assert_eq!(tm, mirror(&t));
    }
}

fn small_tuple() -> impl Strategy<Value = ATuple> {
    let alphabet = vec![-15i64, -10, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 10, 15, 30];
    proptest::collection::vec(proptest::sample::select(alphabet), 5).prop_map(|v| ATuple::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sieve_verdict_is_mirror_invariant(t in small_tuple(), p in proptest::sample::select(vec![3u64, 5, 7, 11, 13])) {
        let a = survives_mod_p(&t, p).unwrap();
        let b = survives_mod_p(&mirror(&t), p).unwrap();
        prop_assert_eq!(a.outcome, b.outcome);
    }
}

fn gaussian() -> impl Strategy<Value = QuadElem> {
    (-6i64..=6, -6i64..=6)
        .prop_filter("nonzero", |&(u, v)| u != 0 || v != 0)
        .prop_map(|(u, v)| QuadElem::from_ints(QuadField::GAUSSIAN, u, v))
}

fn quartic_over(field: QuadField) -> impl Strategy<Value = GenusOneQuartic> {
    proptest::collection::vec((-20i64..=20, -3i64..=3), 5).prop_filter_map("singular", move |cs| {
        let c: Vec<QuadElem> = cs
            .into_iter()
            .map(|(u, v)| if field.is_rational() { QuadElem::from_int(field, u) } else { QuadElem::from_ints(field, u, v) })
            .collect();
        GenusOneQuartic::new(c.try_into().unwrap()).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn gaussian_key_stable_under_square_scaling(q in quartic_over(QuadField::GAUSSIAN), l in gaussian()) {
        let key = q.canonical_key();
        prop_assert_eq!(q.scale(&(&l * &l)).canonical_key(), key.clone());
        prop_assert_eq!(q.scale(&(&l * &l).inv().unwrap()).canonical_key(), key.clone());
        prop_assert_eq!(GenusOneQuartic::from_key(&key).unwrap().canonical_key(), key.clone());
        prop_assert!(GenusOneQuartic::from_key(&key).unwrap().is_canonical());
    }

    #[test]
    fn sqrt3_key_stable_under_unit_squares(q in quartic_over(QuadField::SQRT3), k in -3i32..=3, r in 1i64..12) {
        let f = QuadField::SQRT3;
        let e = f.fundamental_unit();
        let mut s = QuadElem::from_int(f, r * r);
        for _ in 0..k.abs() {
            let e2 = &e * &e;
            s = if k > 0 { &s * &e2 } else { &s * &e2.inv().unwrap() };
        }
        let key = q.canonical_key();
        prop_assert_eq!(q.scale(&s).canonical_key(), key.clone());
        prop_assert_eq!(GenusOneQuartic::from_key(&key).unwrap().canonical_key(), key);
    }

    #[test]
    fn rational_key_stable_under_square_scaling(q in quartic_over(QuadField::RATIONAL), a in 1i64..50, b in 1i64..50) {
        let f = QuadField::RATIONAL;
        let l = QuadElem::new(f, BigRational::new(big(a), big(b)), BigRational::zero());
        let key = q.canonical_key();
        prop_assert_eq!(q.scale(&(&l * &l)).canonical_key(), key.clone());
        prop_assert_eq!(GenusOneQuartic::from_key(&key).unwrap().canonical_key(), key);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    /// Points not reported by the search fail verification, and reported ones pass.
    #[test]
    fn search_and_verify_agree(n in -300i64..300, d in 1i64..40) {
        let spec = SearchSpec::new(5, (n, n), (d, d), BCondition::Le(5)).unwrap();
        let found = search_box(&spec);
        let prod: BigInt = progression_terms(&big(n), &big(d), 5).iter().product();
        let sd = (!prod.is_zero()).then(|| squarefree_decompose(&prod).unwrap());
        match found.first() {
            Some(s) => {
                let r = verify_solution(&big(n), &big(d), 5, &s.b, &s.y);
                prop_assert!(r.ok);
                prop_assert_eq!(Some(&s.tuple), r.tuple.as_ref());
            }
            None => {
                // the only honest witness is the squarefree decomposition; it must fail somewhere
                let ok = match &sd {
                    Some(sd) => {
                        let r = verify_solution(&big(n), &big(d), 5, &sd.b, &sd.y);
                        r.ok && sd.b.is_positive() && BCondition::Le(5).holds(&sd.b)
                    }
                    None => false,
                };
                prop_assert!(!ok);
            }
        }
    }
}

#[test]
fn store_roundtrip() {
    let store = FixtureStore::bundled();
    assert!(!store.is_empty());
    let text = store.to_jsonl();
    let again = FixtureStore::parse_str(&text).unwrap();
    assert_eq!(again.to_jsonl(), text);
    assert_eq!(again.len(), store.len());
    for r in store.records() {
        assert_eq!(again.lookup(&r.key, r.q), Some(r));
    }
}

/// Every affine point with |n| <= h, 1 <= d <= h and gcd(n, d) = 1, without early exit.
fn exhaustive(q: &GenusOneQuartic, h: i64) -> Vec<BigRational> {
    let c = q.canonical();
    let ci: Vec<BigInt> = c.coeffs().iter().map(|x| x.u().to_integer()).collect();
    let mut out = Vec::new();
    for d in 1..=h {
        for n in -h..=h {
            if n.gcd(&d) != 1 {
                continue;
            }
            let (nb, db) = (big(n), big(d));
            let v = ci.iter().enumerate().fold(BigInt::zero(), |acc, (i, c)| acc * &nb + c * db.pow(i as u32));
            if v.is_zero() || (!v.is_negative() && {
                let r = v.sqrt();
                &r * &r == v
            }) {
                out.push(BigRational::new(nb, db));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn rank0_completeness_survives_doubled_height() {
    let store = FixtureStore::bundled();
    let keys: Vec<&str> = store
        .records()
        .filter(|r| r.q == Question::Rank && r.answer == Answer::Rank(0) && r.key.starts_with("D=1|"))
        .map(|r| r.key.as_str())
        .collect();
    assert_eq!(keys.len(), 24);
    let mut complete = 0;
    for h in [40u64, 200] {
        let opts = SearchOptions { height: h, ..SearchOptions::default() };
        for key in &keys {
            let q = GenusOneQuartic::from_key(key).unwrap();
            let e = rank0_points(&q, &opts).unwrap();
            if !e.complete {
                continue;
            }
            complete += 1;
            assert!(e.torsion_bound % e.torsion == 0);
            let wide = exhaustive(&q, 2 * h as i64);
            assert_eq!(wide, e.points, "{key} at height {}", 2 * h);
        }
    }
    assert!(complete >= 24, "only {complete} complete enumerations");
}

#[test]
fn fermat_quartic_has_only_trivial_points() {
    // Y^2 = X^4 + 1
    let q = GenusOneQuartic::from_ints(QuadField::RATIONAL, [1, 0, 0, 0, 1]).unwrap();
    let e = rank0_points(&q, &SearchOptions::default()).unwrap();
    assert!(e.complete);
    assert_eq!(e.points, vec![BigRational::zero()]);
    assert_eq!(e.points_at_infinity, 2);
    assert_eq!(e.torsion, 4);
    assert_eq!(exhaustive(&q, 300), vec![BigRational::zero()]);
}
