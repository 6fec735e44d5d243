use std::collections::BTreeSet;

use apsieve_core::arith::{squarefree_class, QuadElem, QuadField};
use apsieve_core::curves::catalog::{by_name, catalog};
use apsieve_core::curves::delta::delta_candidates;
use apsieve_core::curves::WeierstrassModel;

fn g(a: i64, b: i64) -> QuadElem {
    QuadElem::from_ints(QuadField::GAUSSIAN, a, b)
}

fn class_set(v: &[QuadElem]) -> BTreeSet<String> {
    v.iter().map(|d| squarefree_class(d).unwrap().to_string()).collect()
}

#[test]
fn delta_sets_match_printed_lists() {
    for name in ["k7-a", "k7-b", "k5-c"] {
        let spec = by_name(name).unwrap();
        let fam = spec.family().unwrap();
        let got = delta_candidates(&fam).unwrap();
        assert_eq!(class_set(&got), class_set(&spec.printed()), "{name}");
    }
}

#[test]
fn sqrt3_delta_set() {
    let spec = by_name("k5-a").unwrap();
    let got = delta_candidates(&spec.family().unwrap()).unwrap();
    let shown: Vec<String> = got.iter().map(|d| d.to_string()).collect();
    println!("{shown:?}");
    assert_eq!(got.len(), 8);
}

#[test]
fn tabulated_models_have_the_same_j() {
    let mut n = 0;
    for spec in catalog() {
        let fam = spec.family().unwrap();
        for case in &spec.cases {
            let c = fam.curve(&g(case.delta.0, case.delta.1)).unwrap();
            let [a2, a4, a6] = case.model.map(|(a, b)| g(a, b));
            let model = WeierstrassModel::new(a2, a4, a6).unwrap();
            assert_eq!(c.j_invariant(), model.j_invariant(), "{} {:?}", spec.name, case.delta);
            n += 1;
        }
    }
    assert_eq!(n, 12);
}

#[test]
fn catalog_records_cover_every_candidate_twist() {
    use apsieve_core::curves::catalog::catalog_fixture_records;
    let recs = catalog_fixture_records().unwrap();
    for r in &recs {
        println!("{}", r.to_json_line());
    }
    for spec in catalog() {
        let fam = spec.family().unwrap();
        for delta in delta_candidates(&fam).unwrap() {
            let key = fam.curve(&delta).unwrap().canonical_key();
            assert!(recs.iter().any(|r| r.key == key), "{} {delta}", spec.name);
        }
    }
}
