use std::collections::BTreeSet;

use serde::Serialize;

use super::{bits, Hypergraph, Masked, SUBSET_CHECK_LIMIT};
use crate::error::{Error, Result};
use crate::reduction::{predict_counts, tau_iter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GyoStep {
    /// Vertex occurring only in `edge` was deleted from it.
    RemoveVertex { vertex: String, edge: String },
    /// `edge` was contained in `into` and deleted.
    RemoveEdge { edge: String, into: String },
    /// Last remaining edge, already empty, deleted.
    RemoveLast { edge: String },
}

/// Join tree over edge indices of the input hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
}

impl JoinTree {
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.parent.len()];
        for (e, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(e);
            }
        }
        ch
    }

    /// Nodes with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let ch = self.children();
        let mut out = Vec::with_capacity(self.parent.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
            } else {
                stack.push((v, true));
                for &c in ch[v].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Every vertex's edges form a connected subtree.
    pub fn is_valid_for(&self, h: &Hypergraph) -> bool {
        if self.parent.len() != h.edges.len() || self.parent[self.root].is_some() {
            return false;
        }
        if self.post_order().len() != h.edges.len() {
            return false;
        }
        h.vertices().iter().all(|v| {
            let holding: Vec<usize> = (0..h.edges.len()).filter(|&e| h.edges[e].vertices.contains(v)).collect();
            let linked =
                holding.iter().filter(|&&e| self.parent[e].is_some_and(|p| h.edges[p].vertices.contains(v))).count();
            linked + 1 == holding.len()
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GyoResult {
    pub acyclic: bool,
    pub trace: Vec<GyoStep>,
    /// Edges left when no rule applies; empty iff acyclic.
    pub residual: Hypergraph,
    pub join_tree: Option<JoinTree>,
}

/// GYO reduction. Rule 1 deletes vertices in exactly one edge (by name),
/// rule 2 deletes the first edge contained in another.
pub fn gyo(h: &Hypergraph) -> GyoResult {
    let m = h.masked().expect("GYO supports at most 64 vertices");
    let ne = m.edges.len();
    let mut cur = m.edges.clone();
    let mut alive = vec![true; ne];
    let mut parent = vec![None; ne];
    let mut trace = Vec::new();
    let mut root = None;
    loop {
        let mut changed = false;
        for v in 0..m.n() {
            let holders: Vec<usize> = (0..ne).filter(|&e| alive[e] && cur[e] >> v & 1 == 1).collect();
            if holders.len() == 1 {
                let e = holders[0];
                cur[e] &= !(1 << v);
                trace.push(GyoStep::RemoveVertex { vertex: m.names[v].clone(), edge: h.edges[e].label.clone() });
                changed = true;
            }
        }
        let live: Vec<usize> = (0..ne).filter(|&e| alive[e]).collect();
        'outer: for &e in &live {
            for &f in &live {
                if e != f && cur[e] & !cur[f] == 0 {
                    alive[e] = false;
                    parent[e] = Some(f);
                    trace.push(GyoStep::RemoveEdge { edge: h.edges[e].label.clone(), into: h.edges[f].label.clone() });
                    changed = true;
                    break 'outer;
                }
            }
        }
        let live: Vec<usize> = (0..ne).filter(|&e| alive[e]).collect();
        if live.len() == 1 && cur[live[0]] == 0 {
            alive[live[0]] = false;
            root = Some(live[0]);
            trace.push(GyoStep::RemoveLast { edge: h.edges[live[0]].label.clone() });
            break;
        }
        if live.is_empty() || !changed {
            break;
        }
    }
    let residual = Hypergraph {
        edges: (0..ne)
            .filter(|&e| alive[e])
            .map(|e| super::Edge { label: h.edges[e].label.clone(), vertices: m.set_names(cur[e]) })
            .collect(),
    };
    let acyclic = residual.edges.is_empty();
    let join_tree = match (acyclic, root) {
        (true, Some(root)) => Some(JoinTree { root, parent }),
        _ => None,
    };
    GyoResult { acyclic, trace, residual, join_tree }
}

pub fn is_alpha_acyclic(h: &Hypergraph) -> bool {
    gyo(h).acyclic
}

pub fn build_join_tree(h: &Hypergraph) -> Option<JoinTree> {
    gyo(h).join_tree
}

/// `{e ∩ s : e ∩ s ≠ ∅}` without repeats.
pub fn induced_set(h: &Hypergraph, s: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
    let mut out: Vec<BTreeSet<String>> = h
        .edges
        .iter()
        .map(|e| e.vertices.intersection(s).cloned().collect::<BTreeSet<String>>())
        .filter(|t| !t.is_empty())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Members not strictly contained in another member, without repeats.
pub fn minimisation(edges: &[BTreeSet<String>]) -> Vec<BTreeSet<String>> {
    let mut out: Vec<BTreeSet<String>> =
        edges.iter().filter(|e| !edges.iter().any(|f| f.len() > e.len() && e.is_subset(f))).cloned().collect();
    out.sort();
    out.dedup();
    out
}

fn subset_checked(h: &Hypergraph) -> Result<Masked> {
    let m = h.masked()?;
    if m.n() > SUBSET_CHECK_LIMIT {
        return Err(Error::SizeLimitExceeded {
            what: "vertex count for subset checks".into(),
            limit: SUBSET_CHECK_LIMIT,
        });
    }
    Ok(m)
}

/// Maximal members of `{e ∩ s : e ∩ s ≠ ∅}`, deduplicated.
fn maximal_traces(m: &Masked, s: u64) -> Vec<u64> {
    let mut tr: Vec<u64> = m.edges.iter().map(|e| e & s).filter(|&x| x != 0).collect();
    tr.sort_unstable();
    tr.dedup();
    tr.iter().copied().filter(|&x| !tr.iter().any(|&y| y != x && x & !y == 0)).collect()
}

/// No vertex set `S`, `|S| ≥ 3`, whose maximal traces are exactly the
/// sets `S \ {x}`.
pub fn is_conformal(h: &Hypergraph) -> Result<bool> {
    let m = subset_checked(h)?;
    for s in 1..=m.all() {
        let k = s.count_ones();
        if k < 3 {
            continue;
        }
        let mut maxi = maximal_traces(&m, s);
        let mut want: Vec<u64> = bits(s).map(|x| s & !(1 << x)).collect();
        maxi.sort_unstable();
        want.sort_unstable();
        if maxi == want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No vertex set `S`, `|S| ≥ 3`, whose maximal traces are the edges of a
/// cycle through all of `S`.
pub fn is_cycle_free(h: &Hypergraph) -> Result<bool> {
    let m = subset_checked(h)?;
    for s in 1..=m.all() {
        let k = s.count_ones() as usize;
        if k < 3 {
            continue;
        }
        let maxi = maximal_traces(&m, s);
        if maxi.len() != k || maxi.iter().any(|x| x.count_ones() != 2) {
            continue;
        }
        if pairs_form_one_cycle(&maxi, s) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pairs_form_one_cycle(pairs: &[u64], s: u64) -> bool {
    if bits(s).any(|v| pairs.iter().filter(|p| *p >> v & 1 == 1).count() != 2) {
        return false;
    }
    let start = s.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = vec![start];
    while let Some(v) = frontier.pop() {
        for p in pairs.iter().filter(|p| *p >> v & 1 == 1) {
            let w = (p & !(1 << v)).trailing_zeros() as usize;
            if seen >> w & 1 == 0 {
                seen |= 1 << w;
                frontier.push(w);
            }
        }
    }
    seen == s
}

/// Cycle-free, and no distinct `x, y, z` with `{x,y}`, `{x,z}`, `{x,y,z}`
/// all among the traces on `{x,y,z}`.
pub fn is_gamma_acyclic(h: &Hypergraph) -> Result<bool> {
    if !is_cycle_free(h)? {
        return Ok(false);
    }
    let m = subset_checked(h)?;
    let n = m.n();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x == y || y == z || x == z {
                    continue;
                }
                let s = 1 << x | 1 << y | 1 << z;
                let traces: BTreeSet<u64> = m.edges.iter().map(|e| e & s).collect();
                if traces.contains(&(1 << x | 1 << y)) && traces.contains(&(1 << x | 1 << z)) && traces.contains(&s) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `(e1, v1, e2, v2, …, en, vn)` with distinct edges and vertices,
/// `vi ∈ ei ∩ e(i+1)` and `vn ∈ en ∩ e1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BergeCycle {
    pub edges: Vec<String>,
    pub vertices: Vec<String>,
}

impl BergeCycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_valid_in(&self, h: &Hypergraph) -> bool {
        let n = self.edges.len();
        if n < 2 || self.vertices.len() != n {
            return false;
        }
        let de: BTreeSet<&String> = self.edges.iter().collect();
        let dv: BTreeSet<&String> = self.vertices.iter().collect();
        if de.len() != n || dv.len() != n {
            return false;
        }
        (0..n).all(|i| {
            let (a, b) = (h.edge(&self.edges[i]), h.edge(&self.edges[(i + 1) % n]));
            matches!((a, b), (Some(a), Some(b)) if a.vertices.contains(&self.vertices[i]) && b.vertices.contains(&self.vertices[i]))
        })
    }
}

impl std::fmt::Display for BergeCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (e, v) in self.edges.iter().zip(&self.vertices) {
            write!(f, "{e}–{v}–")?;
        }
        write!(f, "{}", self.edges[0])
    }
}

/// First Berge cycle of length in `min_len..=max_len` found by depth-first
/// search from each edge, visiting vertices by name.
pub fn find_berge_cycle_between(h: &Hypergraph, min_len: usize, max_len: usize) -> Option<BergeCycle> {
    let m = h.masked().ok()?;
    let ne = m.edges.len();
    let min_len = min_len.max(2);
    struct Dfs<'a> {
        m: &'a Masked,
        start: usize,
        min_len: usize,
        max_len: usize,
        path: Vec<usize>,
        verts: Vec<usize>,
        used_v: u64,
    }
    impl Dfs<'_> {
        fn go(&mut self) -> bool {
            let e = *self.path.last().unwrap();
            let free = self.m.edges[e] & !self.used_v;
            if self.path.len() >= self.min_len {
                let close = free & self.m.edges[self.start];
                if close != 0 {
                    self.verts.push(close.trailing_zeros() as usize);
                    return true;
                }
            }
            if self.path.len() >= self.max_len {
                return false;
            }
            for v in bits(free) {
                for f in self.start + 1..self.m.edges.len() {
                    if self.path.contains(&f) || self.m.edges[f] >> v & 1 == 0 {
                        continue;
                    }
                    self.path.push(f);
                    self.verts.push(v);
                    self.used_v |= 1 << v;
                    if self.go() {
                        return true;
                    }
                    self.path.pop();
                    self.verts.pop();
                    self.used_v &= !(1 << v);
                }
            }
            false
        }
    }
    for start in 0..ne {
        let mut d = Dfs { m: &m, start, min_len, max_len, path: vec![start], verts: vec![], used_v: 0 };
        if d.go() {
            return Some(BergeCycle {
                edges: d.path.iter().map(|&e| h.edges[e].label.clone()).collect(),
                vertices: d.verts.iter().map(|&v| m.names[v].clone()).collect(),
            });
        }
    }
    None
}

pub fn find_berge_cycle(h: &Hypergraph, min_len: usize) -> Option<BergeCycle> {
    find_berge_cycle_between(h, min_len, usize::MAX)
}

pub fn is_berge_acyclic(h: &Hypergraph) -> bool {
    find_berge_cycle(h, 2).is_none()
}

/// No Berge cycle of length three or more.
pub fn is_iota_acyclic(h: &Hypergraph) -> bool {
    find_berge_cycle(h, 3).is_none()
}

/// Every member of the reduction is α-acyclic. Stops at the first cyclic
/// member; fails when the reduction has more than `limit` members.
pub fn is_iota_acyclic_semantic(h: &Hypergraph, limit: usize) -> Result<bool> {
    if predict_counts(h).queries > limit as u128 {
        return Err(Error::SizeLimitExceeded { what: "reduction members".into(), limit });
    }
    Ok(tau_iter(h).all(|g| is_alpha_acyclic(&g)))
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub alpha: bool,
    pub gamma: Option<bool>,
    pub iota: bool,
    pub berge: bool,
    pub berge_cycle: Option<BergeCycle>,
}

pub fn classify(h: &Hypergraph) -> Classification {
    Classification {
        alpha: is_alpha_acyclic(h),
        gamma: is_gamma_acyclic(h).ok(),
        iota: is_iota_acyclic(h),
        berge: is_berge_acyclic(h),
        berge_cycle: find_berge_cycle(h, 3),
    }
}
