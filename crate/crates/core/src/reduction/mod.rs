//! Rewriting intersection joins into disjunctions of equality joins.
//!
//! Resolving an interval join variable `[X]` shared by `k` atoms replaces it,
//! for every order `σ` of those atoms, by point variables `X_1 … X_i` in the
//! `i`-th atom of `σ`. The matching relations hold the parts of segment-tree
//! nodes: canonical-partition nodes for `i < k`, the leaf of the left
//! endpoint for `i = k`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::bitstring::{binomial, bitstring_splits, Bitstring};
use crate::database::{Database, Relation, Value};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph};
use crate::interval::Interval;
use crate::predicate::permutations;
use crate::query::{Atom, Query, Variable};
use crate::segtree::Grid;

mod backward;
mod hardness;

pub use backward::{backward_transform, dyadic_interval};
pub use hardness::{cycle_query, embed_cycle_query};

/// Default bound on the number of members of a reduction.
pub const DEFAULT_MEMBER_LIMIT: usize = 1_000_000;

/// Name of the `j`-th fresh variable replacing `x`.
pub fn fresh_name(x: &str, j: usize) -> String {
    format!("{x}_{j}")
}

/// Original atom label plus the position of the atom in the order chosen
/// for each resolved variable. Prints as `R{A=2,B=1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ReducedRelationKey {
    pub base: String,
    pub positions: BTreeMap<String, usize>,
}

impl ReducedRelationKey {
    pub fn plain(base: impl Into<String>) -> Self {
        ReducedRelationKey { base: base.into(), positions: BTreeMap::new() }
    }

    pub fn with(&self, x: &str, i: usize) -> Self {
        let mut k = self.clone();
        k.positions.insert(x.to_string(), i);
        k
    }
}

impl fmt::Display for ReducedRelationKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        if !self.positions.is_empty() {
            let parts: Vec<String> = self.positions.iter().map(|(x, i)| format!("{x}={i}")).collect();
            write!(f, "{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

/// Query whose atom `i` reads relation `keys[i]`; atom labels are the
/// printed keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedQuery {
    pub query: Query,
    pub keys: Vec<ReducedRelationKey>,
}

impl ReducedQuery {
    pub fn from_query(q: &Query) -> Self {
        ReducedQuery { query: q.clone(), keys: q.atoms.iter().map(|a| ReducedRelationKey::plain(&a.label)).collect() }
    }

    /// Atom `i` labeled by its original label.
    pub fn shape(&self) -> Query {
        Query {
            atoms: self
                .query
                .atoms
                .iter()
                .zip(&self.keys)
                .map(|(a, k)| Atom::new(k.base.clone(), a.vars.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for ReducedQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.query)
    }
}

fn check_fresh(names: &BTreeSet<String>, x: &str, k: usize) -> Result<()> {
    for j in 1..=k {
        let n = fresh_name(x, j);
        if names.contains(&n) {
            return Err(Error::NameCollision(n));
        }
    }
    Ok(())
}

fn check_permutation<T: Ord + Clone + fmt::Debug>(sigma: &[T], expected: &[T]) -> Result<()> {
    let mut a = sigma.to_vec();
    let mut b = expected.to_vec();
    a.sort();
    b.sort();
    if a != b || sigma.iter().collect::<BTreeSet<_>>().len() != sigma.len() {
        return Err(Error::InvalidPermutation(format!("{sigma:?} is not an order of {expected:?}")));
    }
    Ok(())
}

/// One resolution step on a hypergraph; `sigma` orders the labels of the
/// edges holding `x`.
pub fn onestep_hypergraph(h: &Hypergraph, x: &str, sigma: &[String]) -> Result<Hypergraph> {
    let holders: Vec<String> = h.edges.iter().filter(|e| e.vertices.contains(x)).map(|e| e.label.clone()).collect();
    if holders.is_empty() {
        return Err(Error::NotIntervalVariable(x.to_string()));
    }
    check_permutation(sigma, &holders)?;
    check_fresh(&h.vertices(), x, holders.len())?;
    Ok(Hypergraph {
        edges: h
            .edges
            .iter()
            .map(|e| match sigma.iter().position(|l| *l == e.label) {
                Some(p) => {
                    let mut vs = e.vertices.clone();
                    vs.remove(x);
                    vs.extend((1..=p + 1).map(|j| fresh_name(x, j)));
                    Edge { label: e.label.clone(), vertices: vs }
                }
                None => e.clone(),
            })
            .collect(),
    })
}

/// One resolution step on a query; `sigma` orders the indices of the atoms
/// holding `[x]`.
pub fn onestep_query(rq: &ReducedQuery, x: &str, sigma: &[usize]) -> Result<ReducedQuery> {
    let q = &rq.query;
    if !q.variable(x).is_some_and(Variable::is_interval) {
        return Err(Error::NotIntervalVariable(x.to_string()));
    }
    let holders = q.atoms_with(x);
    check_permutation(sigma, &holders)?;
    let names: BTreeSet<String> = q.variables().into_iter().map(|v| v.name).collect();
    check_fresh(&names, x, holders.len())?;
    let mut atoms = q.atoms.clone();
    let mut keys = rq.keys.clone();
    for (p, &ai) in sigma.iter().enumerate() {
        let i = p + 1;
        keys[ai] = keys[ai].with(x, i);
        atoms[ai] = Atom::new(keys[ai].to_string(), split_schema(&q.atoms[ai].vars, x, i));
    }
    Ok(ReducedQuery { query: Query::new(atoms)?, keys })
}

fn split_schema(vars: &[Variable], x: &str, i: usize) -> Vec<Variable> {
    let mut out = Vec::with_capacity(vars.len() + i);
    for v in vars {
        if v.name == x {
            out.extend((1..=i).map(|j| Variable::point(fresh_name(x, j))));
        } else {
            out.push(v.clone());
        }
    }
    out
}

/// Rows of the `i`-th of `k` variants of `rel` for column `col`: the column
/// is replaced by every split into `i` parts of every node chosen for its
/// interval.
pub fn transform_relation(
    rel: &Relation,
    col: usize,
    grid: &Grid,
    i: usize,
    k: usize,
    name: String,
) -> Result<Relation> {
    let x = rel.schema[col].name.clone();
    let mut out = Relation::new(name, split_schema(&rel.schema, &x, i));
    // splits of the chosen nodes, flattened with stride `i`
    let mut cache: HashMap<&Interval, Vec<Bitstring>> = HashMap::new();
    for (ri, row) in rel.rows().enumerate() {
        let iv = row[col].as_interval().ok_or_else(|| Error::KindMismatch {
            relation: rel.name.clone(),
            column: x.clone(),
            message: "expected an interval".into(),
        })?;
        if !cache.contains_key(iv) {
            let nodes = if i < k { grid.canonical_partition(iv)? } else { vec![grid.leaf_of(iv)] };
            let splits = nodes.into_iter().flat_map(|u| bitstring_splits(u, i)).flatten().collect();
            cache.insert(iv, splits);
        }
        let origin = rel.origin(ri);
        for parts in cache[iv].chunks(i) {
            let cells = row[..col]
                .iter()
                .cloned()
                .chain(parts.iter().map(|b| Value::Bits(*b)))
                .chain(row[col + 1..].iter().cloned());
            out.push_with_origin(cells, origin);
        }
    }
    Ok(out)
}

/// Database for one order `sigma` of the atoms holding `[x]`: relations of
/// those atoms are replaced by their variants, the rest are kept.
pub fn onestep_database(db: &Database, rq: &ReducedQuery, x: &str, sigma: &[usize]) -> Result<Database> {
    let next = onestep_query(rq, x, sigma)?;
    let grid = grid_for(db, &rq.query, x)?;
    let k = sigma.len();
    let mut out = Database::new();
    for (ai, a) in rq.query.atoms.iter().enumerate() {
        let rel = db.get(&a.label).ok_or_else(|| Error::MissingRelation(a.label.clone()))?;
        match sigma.iter().position(|&s| s == ai) {
            Some(p) => {
                let col = rel.column(x).ok_or_else(|| Error::MissingRelation(a.label.clone()))?;
                out.insert(transform_relation(rel, col, &grid, p + 1, k, next.query.atoms[ai].label.clone())?);
            }
            None => out.insert(rel.clone()),
        }
    }
    Ok(out)
}

fn grid_for(db: &Database, q: &Query, x: &str) -> Result<Grid> {
    let xs = db.intervals_of(q, x)?;
    Grid::of_intervals(xs)
}

/// Relations of `q` copied under their atom labels with the atom's variable
/// names, each row remembering its input row.
pub fn materialize(q: &Query, db: &Database) -> Result<Database> {
    let mut out = Database::new();
    for a in &q.atoms {
        let cols = db.columns_for(a)?;
        let rel = db.get(&a.label).unwrap();
        let mut r = Relation::new(a.label.clone(), a.vars.clone());
        r.reserve(rel.len());
        for (i, row) in rel.rows().enumerate() {
            r.push_with_origin(cols.iter().map(|&c| row[c].clone()).collect::<Vec<_>>(), rel.origin(i));
        }
        out.insert(r);
    }
    Ok(out)
}

/// Intermediate state: a disjunction of queries over one database.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub queries: Vec<ReducedQuery>,
    pub db: Database,
}

impl Reduction {
    pub fn start(q: &Query, db: &Database) -> Result<Self> {
        Ok(Reduction { queries: vec![ReducedQuery::from_query(q)], db: materialize(q, db)? })
    }

    /// Resolves `[x]` in every member. Relations that held `[x]` are replaced
    /// by all their variants.
    pub fn step(&self, x: &str, limit: usize) -> Result<Reduction> {
        let first = &self.queries[0].query;
        let holders = first.atoms_with(x);
        let k = holders.len();
        if k < 2 {
            return Err(Error::NotJoinVariable(x.to_string()));
        }
        let perms = permutations(k);
        if self.queries.len().saturating_mul(perms.len()) > limit {
            return Err(Error::SizeLimitExceeded { what: "reduction members".into(), limit });
        }
        let grid = {
            let mut xs: Vec<&Interval> = Vec::new();
            let mut seen = BTreeSet::new();
            for rq in &self.queries {
                for &ai in &holders {
                    let base = &rq.keys[ai].base;
                    if seen.insert(base.clone()) {
                        let rel = self
                            .db
                            .get(&rq.query.atoms[ai].label)
                            .ok_or_else(|| Error::MissingRelation(base.clone()))?;
                        let col = rel.column(x).ok_or_else(|| Error::NotIntervalVariable(x.to_string()))?;
                        xs.extend(rel.rows().filter_map(|r| r[col].as_interval()));
                    }
                }
            }
            Grid::of_intervals(xs)?
        };
        let mut queries = Vec::with_capacity(self.queries.len() * perms.len());
        for rq in &self.queries {
            for p in &perms {
                let sigma: Vec<usize> = p.iter().map(|&j| holders[j]).collect();
                queries.push(onestep_query(rq, x, &sigma)?);
            }
        }
        let mut db = Database::new();
        let mut done = BTreeSet::new();
        for rq in &self.queries {
            for (ai, a) in rq.query.atoms.iter().enumerate() {
                if !done.insert(a.label.clone()) {
                    continue;
                }
                let rel = self.db.get(&a.label).ok_or_else(|| Error::MissingRelation(a.label.clone()))?;
                match rel.column(x) {
                    Some(col) => {
                        for i in 1..=k {
                            let name = rq.keys[ai].with(x, i).to_string();
                            db.insert(transform_relation(rel, col, &grid, i, k, name)?);
                        }
                    }
                    None => db.insert(rel.clone()),
                }
            }
        }
        Ok(Reduction { queries, db })
    }
}

/// Resolves every interval join variable in lexicographic order.
pub fn reduce_full(q: &Query, db: &Database) -> Result<Reduction> {
    reduce_full_with_limit(q, db, DEFAULT_MEMBER_LIMIT)
}

pub fn reduce_full_with_limit(q: &Query, db: &Database, limit: usize) -> Result<Reduction> {
    let mut state = Reduction::start(q, db)?;
    for x in q.interval_join_vars() {
        state = state.step(&x, limit)?;
    }
    Ok(state)
}

/// Members of the reduction of `q` without data, in the order produced by
/// [`reduce_full`].
pub fn reduce_query(q: &Query, limit: usize) -> Result<Vec<ReducedQuery>> {
    let mut qs = vec![ReducedQuery::from_query(q)];
    for x in q.interval_join_vars() {
        let holders = q.atoms_with(&x);
        let perms = permutations(holders.len());
        if qs.len().saturating_mul(perms.len()) > limit {
            return Err(Error::SizeLimitExceeded { what: "reduction members".into(), limit });
        }
        let mut next = Vec::with_capacity(qs.len() * perms.len());
        for rq in &qs {
            for p in &perms {
                let sigma: Vec<usize> = p.iter().map(|&j| holders[j]).collect();
                next.push(onestep_query(rq, &x, &sigma)?);
            }
        }
        qs = next;
    }
    Ok(qs)
}

/// Hypergraphs of the reduction of `h`: every vertex in two or more edges
/// is resolved, in lexicographic order.
pub fn tau(h: &Hypergraph, limit: usize) -> Result<Vec<Hypergraph>> {
    let count = predict_counts(h).queries;
    if count > limit as u128 {
        return Err(Error::SizeLimitExceeded { what: "reduction members".into(), limit });
    }
    Ok(tau_iter(h).collect())
}

/// Lazy version of [`tau`].
pub fn tau_iter(h: &Hypergraph) -> impl Iterator<Item = Hypergraph> + '_ {
    let join = h.join_vertices();
    let holders: Vec<Vec<usize>> =
        join.iter().map(|x| (0..h.edges.len()).filter(|&e| h.edges[e].vertices.contains(x)).collect()).collect();
    let mut perms: Vec<Vec<usize>> = holders.iter().map(|hs| (0..hs.len()).collect()).collect();
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut edges = h.edges.clone();
        for (xi, x) in join.iter().enumerate() {
            for (p, &j) in perms[xi].iter().enumerate() {
                let e = &mut edges[holders[xi][j]];
                e.vertices.remove(x);
                e.vertices.extend((1..=p + 1).map(|t| fresh_name(x, t)));
            }
        }
        // odometer, last variable fastest
        done = true;
        for p in perms.iter_mut().rev() {
            if next_perm(p) {
                done = false;
                break;
            }
            p.sort_unstable();
        }
        Some(Hypergraph { edges })
    })
}

fn next_perm(p: &mut [usize]) -> bool {
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

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedCounts {
    /// Members of the reduction: product of `k!` over join variables.
    pub queries: u128,
    /// Variants of each relation: product of `k` over its join variables.
    pub variants_per_edge: Vec<(String, u128)>,
}

pub fn predict_counts(h: &Hypergraph) -> PredictedCounts {
    let join = h.join_vertices();
    let k = |x: &String| h.degree(x) as u128;
    let queries = join.iter().map(|x| (1..=k(x)).product::<u128>()).product();
    let variants_per_edge = h
        .edges
        .iter()
        .map(|e| (e.label.clone(), join.iter().filter(|x| e.vertices.contains(*x)).map(k).product()))
        .collect();
    PredictedCounts { queries, variants_per_edge }
}

/// Size bound for the `i`-th variant built from `n` rows on a tree of
/// height `h`.
pub fn variant_size_bound(n: usize, h: usize, i: usize) -> u128 {
    n as u128 * (2 * h as u128 + 1) * binomial((h + i - 1) as u64, (i - 1) as u64)
}

/// Members that coincide after simplification, with the simplified shape.
#[derive(Clone, Debug)]
pub struct SimplifiedQuery {
    /// Atoms labeled by original label, singleton variables removed.
    pub shape: Query,
    /// Concrete members with their own relations, projected the same way.
    pub variants: Vec<ReducedQuery>,
}

/// Drops variables that occur in one atom and projects schemas. Members
/// with the same projected schema per original label are grouped; each
/// variant still reads its own relations, so the disjunction over all
/// variants keeps the truth value.
pub fn simplify(queries: &[ReducedQuery]) -> Vec<SimplifiedQuery> {
    let mut out: Vec<SimplifiedQuery> = Vec::new();
    let mut index: BTreeMap<Vec<(String, Vec<String>)>, usize> = BTreeMap::new();
    for rq in queries {
        let q = &rq.query;
        let keep = |v: &Variable| q.degree(&v.name) >= 2;
        let atoms: Vec<Atom> = q
            .atoms
            .iter()
            .map(|a| Atom::new(a.label.clone(), a.vars.iter().filter(|v| keep(v)).cloned().collect()))
            .collect();
        let projected = ReducedQuery { query: Query { atoms }, keys: rq.keys.clone() };
        let shape = projected.shape();
        let sig: Vec<(String, Vec<String>)> =
            shape.atoms.iter().map(|a| (a.label.clone(), a.vars.iter().map(|v| v.name.clone()).collect())).collect();
        match index.get(&sig) {
            Some(&i) => out[i].variants.push(projected),
            None => {
                index.insert(sig, out.len());
                out.push(SimplifiedQuery { shape, variants: vec![projected] });
            }
        }
    }
    out
}

/// Simplification on hypergraphs: singleton vertices dropped, labeled
/// duplicates merged.
pub fn simplify_hypergraphs(hs: &[Hypergraph]) -> Vec<Hypergraph> {
    let mut out: Vec<Hypergraph> = Vec::new();
    let mut seen = BTreeSet::new();
    for h in hs {
        let d = h.drop_singleton_vertices();
        let mut sig: Vec<(String, Vec<String>)> =
            d.edges.iter().map(|e| (e.label.clone(), e.vertices.iter().cloned().collect())).collect();
        sig.sort();
        if seen.insert(sig) {
            out.push(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    #[test]
    fn key_display() {
        let k = ReducedRelationKey::plain("R").with("B", 1).with("A", 2);
        assert_eq!(k.to_string(), "R{A=2,B=1}");
    }

    #[test]
    fn onestep_hypergraph_on_repeated_edges() {
        let h = Hypergraph::from_letters(&["ABC", "ABC", "A"]);
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let a = onestep_hypergraph(&h, "A", &s(&["e1", "e2", "e3"])).unwrap();
        assert_eq!(a.to_string(), "e1{A_1,B,C}, e2{A_1,A_2,B,C}, e3{A_1,A_2,A_3}");
        let b = onestep_hypergraph(&h, "A", &s(&["e3", "e2", "e1"])).unwrap();
        assert_eq!(b.to_string(), "e1{A_1,A_2,A_3,B,C}, e2{A_1,A_2,B,C}, e3{A_1}");
        assert!(matches!(onestep_hypergraph(&h, "A", &s(&["e1", "e2"])), Err(Error::InvalidPermutation(_))));
    }

    #[test]
    fn onestep_query_replaces_in_place() {
        let q = parse_query("R([A],[B]), S([B],[C]), T([A],[C])").unwrap();
        let rq = onestep_query(&ReducedQuery::from_query(&q), "A", &[2, 0]).unwrap();
        assert_eq!(rq.query.to_string(), "R{A=2}(A_1,A_2,[B]), S([B],[C]), T{A=1}(A_1,[C])");
        assert!(matches!(onestep_query(&rq, "A", &[0, 2]), Err(Error::NotIntervalVariable(_))));
        let clash = parse_query("R([A], A_1), S([A])").unwrap();
        assert!(matches!(onestep_query(&ReducedQuery::from_query(&clash), "A", &[0, 1]), Err(Error::NameCollision(_))));
    }

    #[test]
    fn counts_for_triangle() {
        let q = parse_query("R([A],[B]), S([B],[C]), T([A],[C])").unwrap();
        let c = predict_counts(&q.hypergraph());
        assert_eq!(c.queries, 8);
        assert!(c.variants_per_edge.iter().all(|(_, n)| *n == 4));
        assert_eq!(tau(&q.hypergraph(), 100).unwrap().len(), 8);
        assert_eq!(reduce_query(&q, 100).unwrap().len(), 8);
    }
}
