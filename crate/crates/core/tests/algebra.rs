use std::collections::BTreeSet;

use marked_groups::abelian::{canonical_invariant_factors, cyclic_residual_quotient};
use marked_groups::group::closure;
use marked_groups::matrix::{smith_normal_form, IntMatrix};
use marked_groups::words::{enumerate_ball, free_reduce, nielsen_apply, Side};
use marked_groups::*;
use proptest::prelude::*;

fn letters(arity: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=arity, any::<bool>()).prop_map(|(i, inv)| Letter::new(i, inv)), 0..24)
}

/// Finite abelian groups of order at most 200, as cyclic orders.
fn small_abelian() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..13, 0..4).prop_filter("order <= 200", |v| v.iter().product::<u64>() <= 200)
}

proptest! {
    #[test]
    fn reduction_is_idempotent_and_shortens(raw in letters(3)) {
        let w = free_reduce(3, &raw).unwrap();
        prop_assert!(w.len() <= raw.len());
        prop_assert_eq!(free_reduce(3, w.letters()).unwrap(), w.clone());
        prop_assert!(w.concat(&w.inverse()).is_empty());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inv()));
    }

    #[test]
    fn nielsen_moves_preserve_the_subgroup(
        n in 3u64..9,
        coords in prop::collection::vec((any::<bool>(), 0i64..9), 3),
        mv in 0usize..4,
    ) {
        let d = GenDihedralGroup::dihedral(n);
        let tuple: Vec<_> = coords
            .iter()
            .map(|&(r, c)| if r { d.ref_coords(&[c]).unwrap() } else { d.rot_coords(&[c]).unwrap() })
            .collect();
        let mv = match mv {
            0 => NielsenMove::Swap(1, 3),
            1 => NielsenMove::Invert(2),
            2 => NielsenMove::multiply(1, 2, Side::Right, -1),
            _ => NielsenMove::multiply(3, 1, Side::Left, 1),
        };
        let moved = nielsen_apply(&d, &tuple, mv).unwrap();
        prop_assert_eq!(closure(&d, &tuple, 100), closure(&d, &moved, 100));
        prop_assert_eq!(nielsen_apply(&d, &moved, mv.inverse()).unwrap(), tuple);
    }

    #[test]
    fn snf_postconditions(rows in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 1..5)) {
        let m = IntMatrix::from_rows(3, &rows);
        prop_assert!(smith_normal_form(&m).verify(&m));
    }

    #[test]
    fn invariant_factors_ignore_order_and_are_idempotent(mut orders in prop::collection::vec(0u64..10, 0..5)) {
        let as_orders = |v: &[u64]| -> Vec<CyclicOrder> {
            v.iter().map(|&o| if o == 0 { CyclicOrder::Infinite } else { CyclicOrder::Finite(o) }).collect()
        };
        let a = canonical_invariant_factors(&as_orders(&orders));
        orders.reverse();
        prop_assert_eq!(&canonical_invariant_factors(&as_orders(&orders)), &a);
        let mut again: Vec<u64> = vec![0; a.free_rank()];
        again.extend(a.invariant_factors());
        prop_assert_eq!(canonical_invariant_factors(&as_orders(&again)), a);
    }

    #[test]
    fn generation_matches_closure(orders in small_abelian(), picks in prop::collection::vec(any::<u64>(), 0..4)) {
        let a = AbelianGroup::new(0, &orders);
        let elems = a.elements().unwrap();
        let gens: Vec<_> = picks.iter().map(|&p| elems[(p % elems.len() as u64) as usize].clone()).collect();
        let reached = closure(&a, &gens, 1000).unwrap();
        prop_assert_eq!(a.generates_full(&gens).unwrap(), reached.len() == elems.len());
    }

    #[test]
    fn dihedral_generation_matches_closure(
        orders in prop::collection::vec(1u64..8, 1..3).prop_filter("order <= 60", |v| v.iter().product::<u64>() <= 60),
        picks in prop::collection::vec(any::<u64>(), 1..4),
    ) {
        let d = GenDihedralGroup::new(AbelianGroup::new(0, &orders));
        let elems = d.elements().unwrap();
        let tuple: Vec<_> = picks.iter().map(|&p| elems[(p % elems.len() as u64) as usize].clone()).collect();
        let reached = closure(&d, &tuple, 200).unwrap();
        prop_assert_eq!(d.is_generating(&tuple).unwrap(), reached.len() == elems.len());
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        u in letters(2),
        v in letters(2),
        r in 0i64..5,
        t in 0i64..4,
    ) {
        let d = GenDihedralGroup::new(AbelianGroup::new(1, &[4]));
        let gens = vec![d.a(), d.rot(d.base().element(vec![r], vec![t]).unwrap())];
        let (u, v) = (free_reduce(2, &u).unwrap(), free_reduce(2, &v).unwrap());
        let lhs = d.evaluate(&gens, &u.concat(&v)).unwrap();
        let rhs = d.multiply(&d.evaluate(&gens, &u).unwrap(), &d.evaluate(&gens, &v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reflections_are_involutions_and_rotations_commute(x in -50i64..50, y in -50i64..50, t in 0i64..6) {
        let d = GenDihedralGroup::new(AbelianGroup::new(1, &[6]));
        let e = |f: i64| d.base().element(vec![f], vec![t]).unwrap();
        let s = d.refl(e(x));
        prop_assert!(d.is_identity(&d.multiply(&s, &s)));
        prop_assert!(d.commute(&d.rot(e(x)), &d.rot(e(y))));
    }

    #[test]
    fn residual_quotients_kill_nothing(
        free in 0usize..3,
        k in 1u64..13,
        raw in prop::collection::vec((prop::collection::vec(-30i64..30, 2), 0i64..12), 1..6),
    ) {
        let a = AbelianGroup::new(free, &[k]);
        let survivors: Vec<_> = raw
            .iter()
            .map(|(f, t)| {
                let tors = if a.invariant_factors().is_empty() { vec![] } else { vec![*t] };
                a.element(f[..free].to_vec(), tors).unwrap()
            })
            .filter(|x| !x.is_zero())
            .collect();
        prop_assume!(!survivors.is_empty());
        let q = cyclic_residual_quotient(&a, &survivors).unwrap();
        prop_assert!(survivors.iter().all(|x| q.apply(x) != 0));
        prop_assert!(q.is_well_defined() && q.is_surjective());
        prop_assert_eq!(q.modulus, a.torsion_order() * q.primes.iter().product::<u64>());
    }
}

#[test]
fn balls_are_nested_and_closed_under_inversion() {
    let lim = Limits::default();
    for r in 0..5 {
        let small: BTreeSet<Word> = enumerate_ball(2, r, &lim).unwrap().into_iter().collect();
        let big: BTreeSet<Word> = enumerate_ball(2, r + 1, &lim).unwrap().into_iter().collect();
        assert!(small.is_subset(&big));
        assert!(small.iter().all(|w| small.contains(&w.inverse())));
        assert_eq!(small.len() as u128, words::ball_size(2, r));
    }
}

#[test]
fn dih_is_abelian_iff_base_has_exponent_two() {
    for orders in [vec![], vec![2], vec![2, 2], vec![3], vec![4], vec![2, 4], vec![2, 2, 2], vec![6]] {
        let a = AbelianGroup::new(0, &orders);
        let t = GenDihedralGroup::new(a.clone()).materialize_table(1000).unwrap();
        assert_eq!(t.is_abelian(), a.has_exponent_at_most_two(), "{orders:?}");
    }
}
