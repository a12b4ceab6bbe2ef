//! Equivalent tests for "these intervals share a point", phrased on a
//! segment tree built over (at least) their endpoints.
//!
//! Sets are slices; positions in the slice play the role of relation
//! indices. Permutations are enumerated in lexicographic order.

use std::collections::HashSet;

use crate::bitstring::{bitstring_splits, Bitstring};
use crate::database::{Database, Relation, Value};
use crate::error::{Error, Result};
use crate::interval::{epsilon, intersect_all, Interval};
use crate::query::Query;
use crate::rational::Rational;
use crate::segtree::SegmentTree;

/// Permutation of positions with one node per position, in permutation
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeWitness {
    pub sigma: Vec<usize>,
    pub nodes: Vec<Bitstring>,
}

/// Permutation with the parts `b1, …, bk` of a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub sigma: Vec<usize>,
    pub parts: Vec<Bitstring>,
}

pub fn check_direct(s: &[Interval]) -> bool {
    s.is_empty() || intersect_all(s).is_some()
}

fn cp_sets(s: &[Interval], t: &SegmentTree) -> Result<Vec<HashSet<Bitstring>>> {
    s.iter().map(|x| Ok(t.canonical_partition(x)?.nodes.into_iter().collect())).collect()
}

/// Ancestor tuples witnessing the first rewriting for position `i`: one
/// ancestor of `leaf(x_i)` per other position, lying in that position's
/// canonical partition. Enumerated literally over all tuples.
pub fn rewriting1_tuples(s: &[Interval], t: &SegmentTree, i: usize) -> Result<Vec<Vec<Bitstring>>> {
    let cps = cp_sets(s, t)?;
    let anc: Vec<Bitstring> = t.leaf_of(&s[i]).ancestors().collect();
    let others: Vec<usize> = (0..s.len()).filter(|&j| j != i).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(others.len());
    fn rec(
        pos: usize,
        others: &[usize],
        anc: &[Bitstring],
        cps: &[HashSet<Bitstring>],
        cur: &mut Vec<Bitstring>,
        out: &mut Vec<Vec<Bitstring>>,
    ) {
        if pos == others.len() {
            out.push(cur.clone());
            return;
        }
        for &v in anc {
            if cps[others[pos]].contains(&v) {
                cur.push(v);
                rec(pos + 1, others, anc, cps, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, &others, &anc, &cps, &mut cur, &mut out);
    Ok(out)
}

/// Some position whose left endpoint's leaf has, for every other position,
/// an ancestor in that position's canonical partition.
pub fn check_rewriting1(s: &[Interval], t: &SegmentTree) -> Result<bool> {
    for i in 0..s.len() {
        if !rewriting1_tuples(s, t, i)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(s.is_empty())
}

/// Chains `u1 ⪯ u2 ⪯ … ⪯ uk` (ancestor order) with `uk = leaf(x_σk)` and
/// `uj` in the canonical partition of `x_σj` for `j < k`.
pub fn rewriting2_tuples(s: &[Interval], t: &SegmentTree, sigma: &[usize]) -> Result<Vec<Vec<Bitstring>>> {
    let cps = cp_sets(s, t)?;
    Ok(chains(&cps, t.leaf_of(&s[*sigma.last().unwrap()]), sigma, |_, _| false))
}

/// Chains ending in `leaf`; `strict(j)` asks for a proper ancestor between
/// positions `j` and `j + 1` (zero-based).
fn chains(
    cps: &[HashSet<Bitstring>],
    leaf: Bitstring,
    sigma: &[usize],
    strict: impl Fn(usize, &[usize]) -> bool,
) -> Vec<Vec<Bitstring>> {
    let k = sigma.len();
    let mut out = Vec::new();
    let mut cur = vec![leaf; k];
    fn rec(
        j: usize,
        cps: &[HashSet<Bitstring>],
        sigma: &[usize],
        strict: &dyn Fn(usize, &[usize]) -> bool,
        cur: &mut Vec<Bitstring>,
        out: &mut Vec<Vec<Bitstring>>,
    ) {
        // choose cur[j] given cur[j + 1]
        let below = cur[j + 1];
        let cands: Vec<Bitstring> =
            if strict(j, sigma) { below.strict_ancestors().collect() } else { below.ancestors().collect() };
        for v in cands {
            if cps[sigma[j]].contains(&v) {
                cur[j] = v;
                if j == 0 {
                    out.push(cur.clone());
                } else {
                    rec(j - 1, cps, sigma, strict, cur, out);
                }
            }
        }
    }
    if k == 1 {
        return vec![cur];
    }
    rec(k - 2, cps, sigma, &strict, &mut cur, &mut out);
    out
}

/// Every permutation of positions, lexicographically.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let mut i = k;
        while i > 1 && p[i - 2] >= p[i - 1] {
            i -= 1;
        }
        if i <= 1 {
            break;
        }
        let mut j = k - 1;
        while p[j] <= p[i - 2] {
            j -= 1;
        }
        p.swap(i - 2, j);
        p[i - 1..].reverse();
    }
    out
}

/// First witness of the chain rewriting over all permutations.
pub fn check_rewriting2(s: &[Interval], t: &SegmentTree) -> Result<Option<NodeWitness>> {
    if s.is_empty() {
        return Ok(None);
    }
    for sigma in permutations(s.len()) {
        if let Some(nodes) = rewriting2_tuples(s, t, &sigma)?.into_iter().next() {
            return Ok(Some(NodeWitness { sigma, nodes }));
        }
    }
    Ok(None)
}

/// Splits `b1 ∘ … ∘ bk = leaf(x_σk)` whose proper prefixes
/// `b1 ∘ … ∘ bj` lie in the canonical partition of `x_σj`.
pub fn rewriting3_splits(s: &[Interval], t: &SegmentTree, sigma: &[usize]) -> Result<Vec<Vec<Bitstring>>> {
    let cps = cp_sets(s, t)?;
    let k = sigma.len();
    let leaf = t.leaf_of(&s[sigma[k - 1]]);
    Ok(bitstring_splits(leaf, k)
        .into_iter()
        .filter(|parts| {
            let mut acc = Bitstring::EMPTY;
            (0..k - 1).all(|j| {
                acc = acc.concat(parts[j]);
                cps[sigma[j]].contains(&acc)
            })
        })
        .collect())
}

pub fn check_rewriting3(s: &[Interval], t: &SegmentTree) -> Result<Option<SplitWitness>> {
    if s.is_empty() {
        return Ok(None);
    }
    for sigma in permutations(s.len()) {
        if let Some(parts) = rewriting3_splits(s, t, &sigma)?.into_iter().next() {
            return Ok(Some(SplitWitness { sigma, parts }));
        }
    }
    Ok(None)
}

/// All ordered tuples of the disjoint rewriting: chains as in the second
/// rewriting, except that between consecutive non-final positions a
/// descending index forces a proper ancestor. With pairwise distinct left
/// endpoints an intersecting set has exactly one.
pub fn check_disjoint(s: &[Interval], t: &SegmentTree) -> Result<Vec<NodeWitness>> {
    let cps = cp_sets(s, t)?;
    let k = s.len();
    let mut out = Vec::new();
    if k == 0 {
        return Ok(out);
    }
    for sigma in permutations(k) {
        let leaf = t.leaf_of(&s[sigma[k - 1]]);
        let strict = |j: usize, sg: &[usize]| j + 1 < k - 1 && sg[j] > sg[j + 1];
        for nodes in chains(&cps, leaf, &sigma, strict) {
            out.push(NodeWitness { sigma: sigma.clone(), nodes });
        }
    }
    Ok(out)
}

/// Shifts every interval of the relation behind atom `i` (one-based) to
/// `[l + i·ε, r + n·ε]`, where `n` is the number of atoms. Left endpoints
/// of different atoms become distinct; which intervals intersect does not
/// change. Relations come back keyed by atom label.
pub fn perturb_left_endpoints(db: &Database, q: &Query) -> Result<Database> {
    let n = q.atoms.len();
    let mut endpoints: Vec<&Rational> = Vec::new();
    let mut total = 0usize;
    for a in &q.atoms {
        let rel = db.get(&a.label).ok_or_else(|| Error::MissingRelation(a.label.clone()))?;
        for row in rel.rows() {
            for v in row {
                if let Value::Interval(x) = v {
                    endpoints.push(&x.l);
                    endpoints.push(&x.r);
                    total += 1;
                }
            }
        }
    }
    let eps = epsilon(endpoints, total.max(n));
    let shift_r = &eps * &Rational::from_int(n as i64);
    let mut out = Database::new();
    for (i, a) in q.atoms.iter().enumerate() {
        let rel = db.get(&a.label).unwrap();
        let shift_l = &eps * &Rational::from_int(i as i64 + 1);
        let mut r = Relation::new(a.label.clone(), rel.schema.clone());
        r.reserve(rel.len());
        for (ri, row) in rel.rows().enumerate() {
            let cells = row.iter().map(|v| match v {
                Value::Interval(x) => Value::interval(Interval { l: &x.l + &shift_l, r: &x.r + &shift_r }),
                other => other.clone(),
            });
            r.push_with_origin(cells.collect::<Vec<_>>(), rel.origin(ri));
        }
        out.insert(r);
    }
    Ok(out)
}
