use std::path::PathBuf;

use marked_groups::logic::{builtin_sentence, holds_in, satisfies};
use marked_groups::tables::Recognition;
use marked_groups::*;
use proptest::prelude::*;

fn fixture(name: &str) -> FiniteGroupTable {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    FiniteGroupTable::load(path, &Limits::default()).unwrap()
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
}

/// First falsifying tuple in lexicographic order, by plain enumeration.
fn brute_force(t: &FiniteGroupTable, s: &UniversalSentence) -> Option<Vec<usize>> {
    let k = s.arity();
    let n = t.order();
    (0..n.pow(k as u32))
        .map(|mut code| {
            let mut xs = vec![0; k];
            for x in xs.iter_mut().rev() {
                *x = code % n;
                code /= n;
            }
            xs
        })
        .find(|xs| !satisfies(t, s, xs).unwrap())
}

#[test]
fn shipped_fixtures_match_materialized_tables() {
    for n in 1..=12u64 {
        let shipped = fixture(&format!("d{}.json", 2 * n));
        let built = GenDihedralGroup::dihedral(n).materialize_table(1000).unwrap();
        assert_eq!(shipped.rows(), built.rows(), "D{}", 2 * n);
        assert_eq!(shipped.labels(), built.labels(), "D{}", 2 * n);
    }
    let shipped = fixture("dih_z4_z4.json");
    let built = GenDihedralGroup::new(AbelianGroup::new(0, &[4, 4])).materialize_table(1000).unwrap();
    assert_eq!((shipped.rows(), shipped.labels()), (built.rows(), built.labels()));
    assert_eq!(fixture("a4.txt").order(), 12);
    assert_eq!(fixture("q8.txt").order(), 8);
}

#[test]
fn text_and_json_round_trip() {
    let lim = Limits::default();
    let q8 = fixture("q8.txt");
    assert_eq!(FiniteGroupTable::from_text(&q8.to_text(), &lim).unwrap().rows(), q8.rows());
    let d8 = fixture("d8.json");
    assert_eq!(FiniteGroupTable::from_json(&d8.to_json(), &lim).unwrap(), d8);
}

#[test]
fn automorphism_counts() {
    let lim = Limits::default();
    for n in 3..=8u64 {
        let t = GenDihedralGroup::dihedral(n).materialize_table(100).unwrap();
        assert_eq!(t.automorphism_group(&lim).unwrap().len() as u64, n * totient(n), "D{}", 2 * n);
    }
    for n in 2..=12u64 {
        let t = AbelianGroup::cyclic(n).materialize_table(100).unwrap();
        assert_eq!(t.automorphism_group(&lim).unwrap().len() as u64, totient(n));
    }
    assert_eq!(fixture("q8.txt").automorphism_group(&lim).unwrap().len(), 24);
    assert_eq!(fixture("a4.txt").automorphism_group(&lim).unwrap().len(), 24);
    let klein = AbelianGroup::new(0, &[2, 2]).materialize_table(100).unwrap();
    assert_eq!(klein.automorphism_group(&lim).unwrap().len(), 6);
}

#[test]
fn automorphisms_form_a_group_and_preserve_orders() {
    let lim = Limits::default();
    for t in [fixture("a4.txt"), fixture("q8.txt"), fixture("d12.json"), fixture("dih_z4_z4.json")] {
        let auts = t.automorphism_group(&lim).unwrap();
        let set: std::collections::HashSet<&Vec<usize>> = auts.iter().collect();
        let id: Vec<usize> = (0..t.order()).collect();
        assert!(set.contains(&id));
        for f in auts.iter().take(12) {
            let mut inv = vec![0; f.len()];
            for (i, &x) in f.iter().enumerate() {
                inv[x] = i;
            }
            assert!(set.contains(&inv));
            for g in auts.iter().take(12) {
                let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
                assert!(set.contains(&fg));
            }
            assert!((0..t.order()).all(|x| t.element_order(f[x]) == t.element_order(x)));
        }
    }
}

#[test]
fn recognition_of_fixtures() {
    assert_eq!(fixture("q8.txt").recognize_generalized_dihedral(), Recognition::No);
    assert_eq!(fixture("a4.txt").recognize_generalized_dihedral(), Recognition::No);
    assert_eq!(fixture("d4.json").recognize_generalized_dihedral(), Recognition::Abelian);
    match fixture("d24.json").recognize_generalized_dihedral() {
        Recognition::GenDihedral { base, .. } => assert_eq!(base, AbelianGroup::cyclic(12)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn p1_fails_in_a4_on_three_cycles() {
    let a4 = fixture("a4.txt");
    let p1 = builtin_sentence("P1").unwrap();
    let verdict = holds_in(&a4, &p1, &Limits::default()).unwrap();
    let ce = verdict.counterexample().expect("A4 has non-commuting 3-cycles").to_vec();
    assert!(ce.iter().all(|&x| a4.element_order(x) == 3));
    assert!(!satisfies(&a4, &p1, &ce).unwrap());
    assert_eq!(Some(ce), brute_force(&a4, &p1));
}

#[test]
fn pruned_search_agrees_with_plain_enumeration() {
    let lim = Limits::default();
    let tables = [fixture("a4.txt"), fixture("q8.txt"), fixture("d8.json"), fixture("d12.json")];
    for name in ["P1", "P2", "P3"] {
        let s = builtin_sentence(name).unwrap();
        for t in &tables {
            let v = holds_in(t, &s, &lim).unwrap();
            assert_eq!(v.counterexample().map(|c| c.to_vec()), brute_force(t, &s), "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sentences_pass_to_subgroups(which in 0usize..3, gens in prop::collection::vec(0usize..24, 1..3), p in 1usize..4) {
        let t = [fixture("a4.txt"), fixture("q8.txt"), fixture("d24.json")][which].clone();
        let gens: Vec<usize> = gens.into_iter().map(|g| g % t.order()).collect();
        let sub = t.subgroup_table(&t.subgroup(&gens)).unwrap();
        let s = builtin_sentence(&format!("P{p}")).unwrap();
        let lim = Limits::default();
        if holds_in(&t, &s, &lim).unwrap().holds() {
            prop_assert!(holds_in(&sub, &s, &lim).unwrap().holds());
        }
    }

    #[test]
    fn subgroups_grow_with_generators(gens in prop::collection::vec(0usize..16, 0..4), extra in 0usize..16) {
        let t = fixture("dih_z4_z4.json");
        let small = t.subgroup(&gens);
        let mut more = gens.clone();
        more.push(extra % t.order());
        let big = t.subgroup(&more);
        prop_assert!(small.iter().all(|x| big.contains(x)));
        prop_assert_eq!(t.order() % small.len(), 0);
    }
}
