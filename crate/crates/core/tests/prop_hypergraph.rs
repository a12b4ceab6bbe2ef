//! Acyclicity hierarchy, join trees, isomorphism invariance and widths on
//! random small hypergraphs.

use std::collections::BTreeSet;

use ijoin::hypergraph::{
    canonical_form, classify, find_berge_cycle, gyo, is_alpha_acyclic, is_berge_acyclic, is_conformal, is_cycle_free,
    is_gamma_acyclic, is_iota_acyclic, Hypergraph,
};
use ijoin::reduction::{predict_counts, tau_iter};
use ijoin::widths::{fhtw, rho_star};
use ijoin::Rational;
use proptest::prelude::*;

const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    prop::collection::vec(1u8..64, 1..=5).prop_map(|masks| {
        Hypergraph::new(
            masks
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let vs: BTreeSet<String> =
                        (0..6).filter(|b| m >> b & 1 == 1).map(|b| NAMES[b].to_string()).collect();
                    (format!("e{}", i + 1), vs)
                })
                .collect(),
        )
    })
}

/// Vertices renamed by `perm`, edges reversed and relabeled.
/// Some cycle of at least `min_len` edges exists, by trying every ordered
/// sequence of distinct edges and every injective choice of shared vertices.
fn brute_berge(h: &Hypergraph, min_len: usize) -> bool {
    fn pick(cycle: &[usize], h: &Hypergraph, i: usize, used: &mut Vec<String>) -> bool {
        let n = cycle.len();
        if i == n {
            return true;
        }
        let (a, b) = (&h.edges[cycle[i]].vertices, &h.edges[cycle[(i + 1) % n]].vertices);
        for v in a.intersection(b) {
            if !used.contains(v) {
                used.push(v.clone());
                if pick(cycle, h, i + 1, used) {
                    return true;
                }
                used.pop();
            }
        }
        false
    }
    fn extend(h: &Hypergraph, seq: &mut Vec<usize>, min_len: usize) -> bool {
        if seq.len() >= min_len.max(2) && pick(seq, h, 0, &mut Vec::new()) {
            return true;
        }
        for e in 0..h.edges.len() {
            if !seq.contains(&e) {
                seq.push(e);
                if extend(h, seq, min_len) {
                    return true;
                }
                seq.pop();
            }
        }
        false
    }
    extend(h, &mut Vec::new(), min_len)
}

fn relabel(h: &Hypergraph, perm: &[usize]) -> Hypergraph {
    Hypergraph::new(
        h.edges
            .iter()
            .rev()
            .enumerate()
            .map(|(i, e)| {
                let vs = e
                    .vertices
                    .iter()
                    .map(|v| format!("v{}", perm[NAMES.iter().position(|n| n == v).unwrap()]))
                    .collect();
                (format!("f{i}"), vs)
            })
            .collect(),
    )
}

proptest! {
    #[test]
    fn hierarchy(h in hypergraph()) {
        let berge = is_berge_acyclic(&h);
        let iota = is_iota_acyclic(&h);
        let gamma = is_gamma_acyclic(&h).unwrap();
        let alpha = is_alpha_acyclic(&h);
        prop_assert!(!berge || iota);
        prop_assert!(!iota || gamma);
        prop_assert!(!gamma || alpha);
    }

    #[test]
    fn alpha_is_conformal_and_cycle_free(h in hypergraph()) {
        prop_assert_eq!(is_alpha_acyclic(&h), is_conformal(&h).unwrap() && is_cycle_free(&h).unwrap());
    }

    #[test]
    fn gyo_yields_valid_join_trees(h in hypergraph()) {
        let r = gyo(&h);
        prop_assert_eq!(r.acyclic, r.join_tree.is_some());
        if let Some(t) = r.join_tree {
            prop_assert!(t.is_valid_for(&h));
        }
    }

    #[test]
    fn berge_cycles_are_valid(h in hypergraph()) {
        let c = classify(&h);
        prop_assert_eq!(c.iota, c.berge_cycle.is_none());
        if let Some(cyc) = find_berge_cycle(&h, 2) {
            prop_assert!(cyc.is_valid_in(&h));
            prop_assert!(!c.berge);
        }
    }

    #[test]
    fn berge_search_matches_exhaustive_enumeration(h in hypergraph()) {
        for min_len in [2, 3, 4] {
            prop_assert_eq!(find_berge_cycle(&h, min_len).is_some(), brute_berge(&h, min_len), "min_len {}", min_len);
        }
    }

    #[test]
    fn dropping_singletons_keeps_classes(h in hypergraph()) {
        let d = h.drop_singleton_vertices();
        prop_assert_eq!(is_alpha_acyclic(&h), is_alpha_acyclic(&d));
        prop_assert_eq!(is_iota_acyclic(&h), is_iota_acyclic(&d));
    }

    #[test]
    fn invariants_survive_relabeling(h in hypergraph(), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let g = relabel(&h, &perm);
        prop_assert_eq!(canonical_form(&h).unwrap(), canonical_form(&g).unwrap());
        let (a, b) = (classify(&h), classify(&g));
        prop_assert_eq!((a.alpha, a.gamma, a.iota, a.berge), (b.alpha, b.gamma, b.iota, b.berge));
        prop_assert_eq!(fhtw(&h, 10).unwrap().0, fhtw(&g, 10).unwrap().0);
    }

    #[test]
    fn width_certificates(h in hypergraph()) {
        let (w, td) = fhtw(&h, 10).unwrap();
        prop_assert!(td.is_valid_for(&h));
        prop_assert_eq!(td.width(&h).unwrap(), w.clone());
        prop_assert!(w >= Rational::one());
        prop_assert_eq!(w == Rational::one(), is_alpha_acyclic(&h));
        for bag in &td.bags {
            prop_assert!(rho_star(&h, bag).unwrap().verify(&h, bag));
        }
    }

    #[test]
    fn iota_acyclic_iff_every_member_is_alpha_acyclic(h in hypergraph()) {
        prop_assume!(predict_counts(&h).queries <= 20_000);
        let all_alpha = tau_iter(&h).all(|g| is_alpha_acyclic(&g));
        prop_assert_eq!(is_iota_acyclic(&h), all_alpha);
    }
}
