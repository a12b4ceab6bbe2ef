//! The rewritings of "these intervals share a point" agree with the direct
//! test, and the disjoint rewriting has a unique witness after perturbation.

use ijoin::interval::{intersect_all, Interval};
use ijoin::predicate::{
    check_direct, check_disjoint, check_rewriting1, check_rewriting2, check_rewriting3, perturb_left_endpoints,
    rewriting2_tuples,
};
use ijoin::query::{Atom, Query, Variable};
use ijoin::segtree::SegmentTree;
use ijoin::{Database, Rational, Relation, Value};
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = Interval> {
    (0i64..24, 0i64..10).prop_map(|(l, w)| Interval::from_ints(l, l + w))
}

/// A family of up to four intervals plus extra intervals for the tree.
fn family() -> impl Strategy<Value = (Vec<Interval>, Vec<Interval>)> {
    (prop::collection::vec(interval(), 1..=4), prop::collection::vec(interval(), 0..6))
}

fn tree(s: &[Interval], extra: &[Interval]) -> SegmentTree {
    let all: Vec<Interval> = s.iter().chain(extra).cloned().collect();
    SegmentTree::build(&all).unwrap()
}

fn one_column_db(s: &[Interval]) -> (Query, Database) {
    let atoms: Vec<Atom> = (0..s.len()).map(|i| Atom::new(format!("R{i}"), vec![Variable::interval("X")])).collect();
    let mut db = Database::new();
    for (i, x) in s.iter().enumerate() {
        db.insert(
            Relation::from_rows(format!("R{i}"), vec![Variable::interval("X")], vec![vec![Value::interval(x.clone())]])
                .unwrap(),
        );
    }
    (Query::new(atoms).unwrap(), db)
}

proptest! {
    #[test]
    fn rewritings_agree((s, extra) in family()) {
        let t = tree(&s, &extra);
        let direct = check_direct(&s);
        prop_assert_eq!(check_rewriting1(&s, &t).unwrap(), direct);
        prop_assert_eq!(check_rewriting2(&s, &t).unwrap().is_some(), direct);
        prop_assert_eq!(check_rewriting3(&s, &t).unwrap().is_some(), direct);
    }

    #[test]
    fn chain_witnesses_are_chains((s, extra) in family()) {
        let t = tree(&s, &extra);
        if let Some(w) = check_rewriting2(&s, &t).unwrap() {
            prop_assert!(w.nodes.windows(2).all(|p| p[0].is_prefix_of(p[1])));
            prop_assert_eq!(*w.nodes.last().unwrap(), t.leaf_of(&s[*w.sigma.last().unwrap()]));
            prop_assert!(!rewriting2_tuples(&s, &t, &w.sigma).unwrap().is_empty());
        }
        if let Some(w) = check_rewriting3(&s, &t).unwrap() {
            let joined = w.parts.iter().fold(ijoin::Bitstring::EMPTY, |a, b| a.concat(*b));
            prop_assert_eq!(joined, t.leaf_of(&s[*w.sigma.last().unwrap()]));
        }
    }

    #[test]
    fn perturbation_keeps_truth_and_makes_witness_unique((s, extra) in family()) {
        let (q, db) = one_column_db(&s);
        let p = perturb_left_endpoints(&db, &q).unwrap();
        let moved: Vec<Interval> =
            (0..s.len()).map(|i| p.get(&format!("R{i}")).unwrap().row(0)[0].as_interval().unwrap().clone()).collect();
        let mut lefts: Vec<&Rational> = moved.iter().map(|x| &x.l).collect();
        lefts.sort();
        lefts.dedup();
        prop_assert_eq!(lefts.len(), s.len());
        let direct = intersect_all(&s).is_some();
        prop_assert_eq!(intersect_all(&moved).is_some(), direct);
        let t = tree(&moved, &extra);
        let ws = check_disjoint(&moved, &t).unwrap();
        prop_assert_eq!(ws.len(), usize::from(direct));
    }
}
