use super::{bits, Hypergraph};
use crate::error::{Error, Result};

/// Bijections tried per hypergraph before giving up.
const PERMUTATION_BUDGET: u128 = 5_000_000;

/// Label-free normal form: equal forms iff isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    invariants: Vec<(usize, Vec<u32>)>,
    edges: Vec<u64>,
}

/// Vertices are first grouped by an isomorphism-invariant signature; the form
/// is the least sorted edge list over all signature-respecting relabelings.
pub fn canonical_form(h: &Hypergraph) -> Result<CanonicalForm> {
    let m = h.masked()?;
    let n = m.n();
    let sig = |v: usize| {
        let mut sizes: Vec<u32> = m.edges.iter().filter(|e| *e >> v & 1 == 1).map(|e| e.count_ones()).collect();
        sizes.sort_unstable();
        (sizes.len(), sizes)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| sig(v));
    let invariants: Vec<(usize, Vec<u32>)> = order.iter().map(|&v| sig(v)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && invariants[i] == invariants[i - 1] {
            groups.last_mut().unwrap().push(v);
        } else {
            groups.push(vec![v]);
        }
    }
    let total: u128 = groups.iter().map(|g| (1..=g.len() as u128).product::<u128>()).product();
    if total > PERMUTATION_BUDGET {
        return Err(Error::SizeLimitExceeded {
            what: "relabelings for isomorphism".into(),
            limit: PERMUTATION_BUDGET as usize,
        });
    }
    // position[v] = new index of vertex v
    let mut position = vec![0usize; n];
    let mut best: Option<Vec<u64>> = None;
    let mut perms: Vec<Vec<usize>> = groups.clone();
    let starts: Vec<usize> = groups
        .iter()
        .scan(0, |acc, g| {
            let s = *acc;
            *acc += g.len();
            Some(s)
        })
        .collect();
    loop {
        for (g, s) in perms.iter().zip(&starts) {
            for (k, &v) in g.iter().enumerate() {
                position[v] = s + k;
            }
        }
        let mut edges: Vec<u64> =
            m.edges.iter().map(|&e| bits(e).fold(0u64, |acc, v| acc | 1 << position[v])).collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
        if !advance(&mut perms) {
            break;
        }
    }
    Ok(CanonicalForm { invariants, edges: best.unwrap_or_default() })
}

/// Steps an odometer of per-group permutations; false after the last one.
fn advance(perms: &mut [Vec<usize>]) -> bool {
    for p in perms.iter_mut() {
        if next_permutation(p) {
            return true;
        }
        p.sort_unstable();
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Groups indices of `hs` into isomorphism classes, each listed in input
/// order and the classes ordered by first member.
pub fn isomorphism_classes(hs: &[Hypergraph]) -> Result<Vec<Vec<usize>>> {
    let mut classes: Vec<(CanonicalForm, Vec<usize>)> = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        let f = canonical_form(h)?;
        match classes.iter_mut().find(|(g, _)| *g == f) {
            Some((_, members)) => members.push(i),
            None => classes.push((f, vec![i])),
        }
    }
    Ok(classes.into_iter().map(|(_, m)| m).collect())
}
