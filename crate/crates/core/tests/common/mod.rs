//! Random queries and databases shared by the property tests.

#![allow(dead_code)]

use ijoin::gen::{gen_synthetic, GenSpec};
use ijoin::query::{Atom, Query, Variable};
use ijoin::Database;
use proptest::prelude::*;

/// Atoms `R0, R1, …` over `[A]`, `[B]`, `[C]` and the point `P`, one mask
/// per atom.
pub fn query_from_masks(masks: &[u8]) -> Query {
    let vars = [Variable::interval("A"), Variable::interval("B"), Variable::interval("C"), Variable::point("P")];
    let atoms = masks
        .iter()
        .enumerate()
        .map(|(i, m)| Atom::new(format!("R{i}"), (0..4).filter(|b| m >> b & 1 == 1).map(|b| vars[b].clone()).collect()))
        .collect();
    Query::new(atoms).unwrap()
}

pub fn query() -> impl Strategy<Value = Query> {
    prop::collection::vec(1u8..16, 2..=4).prop_map(|m| query_from_masks(&m))
}

/// Small databases where both outcomes are common.
pub fn spec() -> impl Strategy<Value = GenSpec> {
    (1usize..=4, 6u64..14, 0u64..4).prop_map(|(rows, domain, max_width)| GenSpec {
        rows,
        domain,
        max_width,
        point_domain: 2,
    })
}

pub fn instance() -> impl Strategy<Value = (Query, Database)> {
    (query(), spec(), any::<u64>()).prop_map(|(q, s, seed)| {
        let db = gen_synthetic(&q, &s, seed);
        (q, db)
    })
}
