//! Every engine and every strategy agrees with the oracle; witnesses check
//! out against the input.

mod common;

use ijoin::eval::{check_assignment, decomp_eval, oracle_eval, wcoj_bool, yannakakis_bool};
use ijoin::gen::{gen_synthetic, GenSpec};
use ijoin::hypergraph::is_alpha_acyclic;
use ijoin::query::{Atom, Query, Variable};
use ijoin::reduction::reduce_query;
use ijoin::widths::fhtw;
use ijoin::{eval_ij, EvalOptions, Strategy as Plan};
use proptest::prelude::*;

/// Equality joins over points `A … D`.
fn equi_instance() -> impl Strategy<Value = (Query, ijoin::Database)> {
    (prop::collection::vec(1u8..16, 1..=4), 1usize..=6, 1u64..=3, any::<u64>()).prop_map(|(masks, rows, dom, seed)| {
        let names = ["A", "B", "C", "D"];
        let atoms = masks
            .iter()
            .enumerate()
            .map(|(i, m)| {
                Atom::new(
                    format!("R{i}"),
                    (0..4).filter(|b| m >> b & 1 == 1).map(|b| Variable::point(names[b])).collect(),
                )
            })
            .collect();
        let q = Query::new(atoms).unwrap();
        let db = gen_synthetic(&q, &GenSpec { rows, domain: 1, max_width: 0, point_domain: dom }, seed);
        (q, db)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn equi_engines_agree((q, db) in equi_instance()) {
        let want = oracle_eval(&q, &db).unwrap().0;
        let h = q.hypergraph();
        let (w, rows) = wcoj_bool(&q, &db).unwrap();
        prop_assert_eq!(w, want);
        if let Some(r) = rows {
            prop_assert!(check_assignment(&q, &db, &r).unwrap());
        }
        if is_alpha_acyclic(&h) {
            let (y, rows) = yannakakis_bool(&q, &db).unwrap();
            prop_assert_eq!(y, want);
            if let Some(r) = rows {
                prop_assert!(check_assignment(&q, &db, &r).unwrap());
            }
        }
        let (_, td) = fhtw(&h, 10).unwrap();
        let (d, rows) = decomp_eval(&q, &db, &td).unwrap();
        prop_assert_eq!(d, want);
        if let Some(r) = rows {
            prop_assert!(check_assignment(&q, &db, &r).unwrap());
        }
    }

    #[test]
    fn generator_is_deterministic(q in common::query(), s in common::spec(), seed in any::<u64>()) {
        let a = gen_synthetic(&q, &s, seed);
        let b = gen_synthetic(&q, &s, seed);
        for atom in &q.atoms {
            let (ra, rb) = (a.get(&atom.label).unwrap(), b.get(&atom.label).unwrap());
            prop_assert_eq!(ra.rows().collect::<Vec<_>>(), rb.rows().collect::<Vec<_>>());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strategies_agree_with_oracle((q, db) in common::instance()) {
        prop_assume!(reduce_query(&q, 300).is_ok());
        let want = oracle_eval(&q, &db).unwrap().0;
        for strategy in [Plan::Auto, Plan::OracleOnly, Plan::ReduceYannakakis, Plan::ReduceDecomp] {
            for parallel in [false, true] {
                let opts = EvalOptions { strategy, parallel, ..EvalOptions::default() };
                let rep = eval_ij(&q, &db, &opts).unwrap();
                prop_assert_eq!(rep.result, want, "{:?}", strategy);
                match rep.witness {
                    Some(w) => {
                        let rows: Vec<usize> = q.atoms.iter().map(|a| w[&a.label]).collect();
                        prop_assert!(check_assignment(&q, &db, &rows).unwrap());
                    }
                    None => prop_assert!(!want),
                }
            }
        }
    }
}
