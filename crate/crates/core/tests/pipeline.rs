use apsieve_core::curves::{by_name, rank0_eliminate_tuple, Rank0Cache, Rank0Outcome, SearchOptions};
use apsieve_core::oracle::FixtureStore;
use apsieve_core::pipeline::{
    resolve_family, run_pipeline_k5, verify_theorem1, PipelineOptions, Reduction, TupleFate,
};
use apsieve_core::sieve::replay;
use apsieve_core::tuples::ATuple;

fn t(v: &[i64]) -> ATuple {
    ATuple::new(v.to_vec()).unwrap()
}

#[test]
fn k5_pipeline_with_bundled_fixtures() {
    let store = FixtureStore::bundled();
    let r = run_pipeline_k5(&store, &PipelineOptions::default()).unwrap();
    assert!(r.counts.balanced());
    assert_eq!(r.counts.generated, 880);
    assert_eq!(r.counts.presieve_eliminated, 760);
    assert_eq!(r.counts.rank0_eliminated + r.counts.rank0_solved, 115);
    assert_eq!(r.counts.congruence_eliminated, 2);
    assert_eq!(r.counts.chabauty_resolved, 3);
    assert_eq!(r.counts.unresolved, 0);
    let mut stage = r.curve_stage.clone();
    stage.sort();
    let mut want = vec![
        vec![-3, -5, 2, 1, 1],
        vec![-2, -5, 3, 1, 1],
        vec![-1, -15, -1, -2, 3],
        vec![2, 5, 2, -1, -1],
        vec![6, 5, 1, 3, 2],
    ];
    want.sort();
    assert_eq!(stage, want);
    assert_eq!(r.solutions, [(-12, 7), (-4, 3)]);
    assert!(r.rejected.is_empty());
    assert_eq!(r.exit_code(), 0);
    for rec in &r.tuples {
        match &rec.fate {
            TupleFate::Presieve { certificate } | TupleFate::Congruence { certificate } => {
                assert!(replay(certificate).unwrap())
            }
            TupleFate::Rank0 { outcome } => assert!(matches!(
                outcome,
                Rank0Outcome::Eliminated { .. } | Rank0Outcome::SurvivesWith { .. }
            )),
            TupleFate::Curves { resolution } => assert!(resolution.complete()),
            TupleFate::Unresolved { .. } => panic!("unresolved {:?}", rec.tuple),
        }
    }
}

#[test]
fn without_congruences_two_tuples_stay_open() {
    let store = FixtureStore::bundled();
    let opts = PipelineOptions { primes: vec![], ..PipelineOptions::default() };
    let r = run_pipeline_k5(&store, &opts).unwrap();
    assert_eq!(r.solutions, [(-12, 7), (-4, 3)]);
    let open: Vec<Vec<i64>> = r.unresolved().iter().map(|t| t.tuple.clone()).collect();
    assert_eq!(open.len(), 2);
    assert!(open.contains(&vec![-2, -5, 3, 1, 1]));
    assert!(open.contains(&vec![-1, -15, -1, -2, 3]));
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn without_fixtures_nothing_is_claimed() {
    let store = FixtureStore::new();
    let r = run_pipeline_k5(&store, &PipelineOptions::default()).unwrap();
    assert!(r.counts.balanced());
    assert_eq!(r.counts.rank0_eliminated + r.counts.rank0_solved, 0);
    assert!(r.counts.unresolved > 0);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn rank0_tuple_without_ranks_is_unresolved() {
    let empty = FixtureStore::new();
    let out = rank0_eliminate_tuple(&t(&[1, 1, 2, 3, 5]), &empty, &SearchOptions::default(), &Rank0Cache::new()).unwrap();
    assert!(matches!(out, Rank0Outcome::Unresolved { .. }));
}

#[test]
fn family_back_substitution() {
    let store = FixtureStore::bundled();
    let r = resolve_family(&t(&[-3, -5, 2, 1, 1]), &store).unwrap().unwrap();
    assert!(r.complete());
    let large: Vec<(i64, i64)> = r.solutions.iter().filter(|s| s.d > 1).map(|s| (s.n, s.d)).collect();
    assert_eq!(large, [(-12, 7)]);

    let r = resolve_family(&t(&[2, 5, 2, -1, -1]), &store).unwrap().unwrap();
    let large: Vec<(i64, i64)> = r.solutions.iter().filter(|s| s.d > 1).map(|s| (s.n, s.d)).collect();
    assert_eq!(large, [(-4, 3)]);

    let r = resolve_family(&t(&[6, 5, 1, 3, 2]), &store).unwrap().unwrap();
    assert!(r.complete());
    assert!(r.solutions.iter().all(|s| s.d.abs() <= 1));

    let r = resolve_family(&t(&[1, 5, 6, 7, 2, 1, 10]), &store).unwrap().unwrap();
    let nd: Vec<(i64, i64)> = r.solutions.iter().map(|s| (s.n, s.d)).collect();
    assert_eq!(nd, [(4, 1)]);
    let dis = r.discrepancy.expect("flagged");
    assert_eq!((dis.stated, dis.found), ((2, 1), vec![(4, 1)]));
    assert!(by_name("k7-a").is_some());
}

#[test]
fn mirrored_tuple_uses_the_same_family() {
    let store = FixtureStore::bundled();
    let r = resolve_family(&t(&[-1, -1, 2, 5, 2]), &store).unwrap().unwrap();
    assert!(r.mirrored);
    assert!(r.solutions.iter().any(|s| (s.n, s.d) == (-4, 3)));
}

#[test]
fn theorem1_closure() {
    let store = FixtureStore::bundled();
    let entries = verify_theorem1(&store).unwrap();
    assert_eq!(entries.len(), 8);
    assert!(entries.iter().all(|e| e.resolved), "{entries:#?}");
    let by_k = |k: usize| entries.iter().filter(move |e| e.k == k);
    for e in by_k(13).chain(by_k(19)) {
        assert!(matches!(e.reduction, Reduction::Subtuple { offset: 0, .. }));
    }
    let target = vec![3, 1, 5, 6, 7, 2, 1];
    let halvings: Vec<usize> = by_k(23)
        .map(|e| match &e.reduction {
            Reduction::Halving { start, count: 7, to } if *to == target => *start,
            other => panic!("{other:?}"),
        })
        .collect();
    assert_eq!(halvings, [1, 0]);
}
