//! Each reduction step keeps the truth value, variants respect their size
//! bound, and the backward and hardness encodings keep the truth value.

mod common;

use ijoin::bitstring::Bitstring;
use ijoin::eval::{oracle_eval, oracle_eval_capped};
use ijoin::query::{Query, VarKind};
use ijoin::reduction::{
    backward_transform, cycle_query, embed_cycle_query, reduce_query, transform_relation, variant_size_bound, Reduction,
};
use ijoin::segtree::Grid;
use ijoin::{parse_query, Database, Relation, Value};
use proptest::prelude::*;

fn any_true(r: &Reduction) -> bool {
    r.queries.iter().any(|m| oracle_eval_capped(&m.query, &r.db, u128::MAX).unwrap().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_step_keeps_truth((q, db) in common::instance()) {
        prop_assume!(reduce_query(&q, 200).is_ok());
        let want = oracle_eval(&q, &db).unwrap().0;
        let mut state = Reduction::start(&q, &db).unwrap();
        prop_assert_eq!(any_true(&state), want);
        for x in q.interval_join_vars() {
            state = state.step(&x, 200).unwrap();
            prop_assert_eq!(any_true(&state), want, "after {}", x);
        }
    }

    #[test]
    fn variants_respect_size_bound((q, db) in common::instance()) {
        for x in q.interval_join_vars() {
            let holders = q.atoms_with(&x);
            let k = holders.len();
            let xs = db.intervals_of(&q, &x).unwrap();
            let grid = Grid::of_intervals(xs).unwrap();
            for &a in &holders {
                let rel = db.get(&q.atoms[a].label).unwrap();
                let col = rel.column(&x).unwrap();
                for i in 1..=k {
                    let v = transform_relation(rel, col, &grid, i, k, format!("v{i}")).unwrap();
                    prop_assert!(v.len() as u128 <= variant_size_bound(rel.len(), grid.height(), i));
                }
            }
        }
    }

    #[test]
    fn backward_transform_round_trip(
        masks in prop::collection::vec(1u8..16, 2..=3),
        pick in any::<prop::sample::Index>(),
        len in 1usize..=3,
        rows in 1usize..=4,
        seed in any::<u64>(),
    ) {
        let q = common::query_from_masks(&masks);
        let members = reduce_query(&q, 1000).unwrap();
        let member = &members[pick.index(members.len())];
        let db = bit_db(&q, &member.query, len, rows, seed);
        let back = backward_transform(&q, member, &db).unwrap();
        prop_assert_eq!(oracle_eval(&member.query, &db).unwrap().0, oracle_eval(&q, &back).unwrap().0);
        for (a, m) in q.atoms.iter().zip(&member.query.atoms) {
            prop_assert_eq!(back.get(&a.label).unwrap().len(), db.get(&m.label).unwrap().len());
        }
    }

    #[test]
    fn cycle_embedding_keeps_truth(target in 0usize..4, k in 3usize..=4, rows in 1usize..=4, seed in any::<u64>()) {
        let targets = [
            "R([A],[B]), S([B],[C]), T([A],[C])",
            "R([A],[B],[C]), S([B],[C]), T([A],[B])",
            "R([A],[B]), S([A],[C]), T([A],[D]), U([B],[C]), V([B],[D]), W([C],[D])",
            "R([A],[B],[C]), S([B],[C],[D]), T([C],[D],[A]), U([D],[A],[B])",
        ];
        let t = parse_query(targets[target]).unwrap();
        let src = cycle_query(k);
        let cdb = ijoin::gen::gen_synthetic(&src, &ijoin::gen::GenSpec { rows, domain: 1, max_width: 0, point_domain: 3 }, seed);
        match embed_cycle_query(&t, k, &cdb) {
            Ok(db) => prop_assert_eq!(oracle_eval(&t, &db).unwrap().0, oracle_eval(&src, &cdb).unwrap().0),
            Err(ijoin::Error::NoBergeCycle(_)) => prop_assert!(target < 2 && k == 4),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}

/// Random rows for a member: bitstrings of one length for the new
/// variables, small integers for point variables of `q`.
fn bit_db(q: &Query, member: &Query, len: usize, rows: usize, seed: u64) -> Database {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::new();
    for a in &member.atoms {
        let mut rel = Relation::new(a.label.clone(), a.vars.clone());
        for _ in 0..rows {
            let row: Vec<Value> = a
                .vars
                .iter()
                .map(|v| match q.variable(&v.name).map(|w| w.kind) {
                    Some(VarKind::Point) => Value::int(rng.gen_range(0..2)),
                    Some(VarKind::Interval) => Value::interval(ijoin::Interval::from_ints(0, rng.gen_range(0..3))),
                    None => Value::Bits(Bitstring::new(rng.gen_range(0..1u64 << len), len)),
                })
                .collect();
            rel.push(row);
        }
        db.insert(rel);
    }
    db
}
