//! Fractional edge covers, fractional hypertree width and the width of the
//! reduction of an intersection join.

mod lp;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{bits, Hypergraph};
use crate::rational::Rational;
use crate::reduction::{simplify_hypergraphs, tau};

pub use lp::{rho_star, EdgeCover};

/// Vertex count above which [`fhtw`] refuses to run by default.
pub const DEFAULT_VERTEX_CAP: usize = 10;

/// Tree decomposition: `parent[i]` is the bag above bag `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<String>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn root(&self) -> usize {
        self.parent.iter().position(Option::is_none).unwrap_or(0)
    }

    /// Every edge inside some bag; the bags holding a vertex are connected;
    /// exactly one root.
    pub fn is_valid_for(&self, h: &Hypergraph) -> bool {
        let n = self.bags.len();
        if n == 0 || self.parent.len() != n || self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return false;
        }
        // acyclic parent pointers
        for start in 0..n {
            let mut v = start;
            let mut steps = 0;
            while let Some(p) = self.parent[v] {
                v = p;
                steps += 1;
                if steps > n {
                    return false;
                }
            }
        }
        if !h.edges.iter().all(|e| self.bags.iter().any(|b| e.vertices.is_subset(b))) {
            return false;
        }
        h.vertices().iter().all(|v| {
            let holding = (0..n).filter(|&b| self.bags[b].contains(v)).count();
            let linked = (0..n)
                .filter(|&b| self.bags[b].contains(v) && self.parent[b].is_some_and(|p| self.bags[p].contains(v)))
                .count();
            holding > 0 && linked + 1 == holding
        })
    }

    /// Largest fractional edge cover number among the bags.
    pub fn width(&self, h: &Hypergraph) -> Result<Rational> {
        let mut w = Rational::zero();
        for b in &self.bags {
            w = Rational::max(&w, &rho_star(h, b)?.value);
        }
        Ok(w)
    }
}

/// Fractional hypertree width with a decomposition attaining it, by dynamic
/// programming over elimination orders.
pub fn fhtw(h: &Hypergraph, vertex_cap: usize) -> Result<(Rational, TreeDecomposition)> {
    let m = h.masked()?;
    let n = m.n();
    if n > vertex_cap {
        return Err(Error::SizeLimitExceeded { what: "vertex count for width computation".into(), limit: vertex_cap });
    }
    if n == 0 {
        return Ok((Rational::zero(), TreeDecomposition { bags: vec![BTreeSet::new()], parent: vec![None] }));
    }
    let mut adj = vec![0u64; n];
    for &e in &m.edges {
        for v in bits(e) {
            adj[v] |= e & !(1 << v);
        }
    }
    // vertices outside `gone ∪ {v}` reachable from v through `gone`
    let reach = |gone: u64, v: usize| -> u64 {
        let mut seen = 1u64 << v;
        let mut stack = vec![v];
        let mut out = 0u64;
        while let Some(u) = stack.pop() {
            for w in bits(adj[u] & !seen) {
                seen |= 1 << w;
                if gone >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out |= 1 << w;
                }
            }
        }
        out
    };
    let mut cover_cache: HashMap<u64, Rational> = HashMap::new();
    let mut cover = |bag: u64| -> Rational {
        cover_cache
            .entry(bag)
            .or_insert_with(|| lp::solve_cover(&m.edges, bag).expect("every vertex lies in an edge").0)
            .clone()
    };
    let full = m.all();
    let size = 1usize << n;
    let mut best: Vec<Option<Rational>> = vec![None; size];
    let mut choice = vec![usize::MAX; size];
    best[0] = Some(Rational::zero());
    for s in 1..size as u64 {
        let mut cur: Option<Rational> = None;
        for v in bits(s) {
            let rest = s & !(1 << v);
            let bag = (1 << v) | reach(rest, v);
            let c = Rational::max(best[rest as usize].as_ref().unwrap(), &cover(bag));
            if cur.as_ref().is_none_or(|b| c < *b) {
                cur = Some(c);
                choice[s as usize] = v;
            }
        }
        best[s as usize] = cur;
    }
    // recover the order: choice[S] is eliminated last among S
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize];
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags_m = Vec::with_capacity(n);
    let mut gone = 0u64;
    for &v in &order {
        bags_m.push((1u64 << v) | reach(gone, v));
        gone |= 1 << v;
    }
    let mut parent: Vec<Option<usize>> = (0..n)
        .map(|i| {
            let rest = bags_m[i] & !(1 << order[i]);
            bits(rest).map(|w| pos[w]).min()
        })
        .collect();
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    for w in roots.windows(2) {
        parent[w[0]] = Some(w[1]);
    }
    let td = TreeDecomposition { bags: bags_m.iter().map(|&b| m.set_names(b)).collect(), parent };
    Ok((best[full as usize].clone().unwrap(), td))
}

#[derive(Clone, Debug, Serialize)]
pub struct IjWidth {
    /// Maximum over the simplified members, at least one. An upper bound:
    /// it uses fractional hypertree width where the sharp measure is
    /// submodular width.
    pub value: Rational,
    pub upper_bound: bool,
    pub members: Vec<(Hypergraph, Rational)>,
}

/// Width of the reduction of `h`: the largest fractional hypertree width
/// among its simplified members.
pub fn ijw_fhtw_upper(h: &Hypergraph, vertex_cap: usize, member_limit: usize) -> Result<IjWidth> {
    let members = simplify_hypergraphs(&tau(h, member_limit)?);
    let mut value = Rational::one();
    let mut out = Vec::with_capacity(members.len());
    for g in members {
        let (w, _) = fhtw(&g, vertex_cap)?;
        value = Rational::max(&value, &w);
        out.push((g, w));
    }
    Ok(IjWidth { value, upper_bound: true, members: out })
}
