//! Labeled multi-hypergraphs and their acyclicity notions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

mod acyclic;
mod iso;

pub use acyclic::*;
pub use iso::{canonical_form, isomorphism_classes, CanonicalForm};

/// Largest vertex count accepted by the exhaustive subset checks.
pub const SUBSET_CHECK_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub label: String,
    pub vertices: BTreeSet<String>,
}

/// Hypergraph with labeled edges; equal vertex sets under different labels
/// are distinct edges. The vertex set is the union of the edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Hypergraph {
    pub edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn new(edges: Vec<(String, BTreeSet<String>)>) -> Self {
        Hypergraph { edges: edges.into_iter().map(|(label, vertices)| Edge { label, vertices }).collect() }
    }

    /// Edges given as strings of one-letter vertices, labeled `e1`, `e2`, ….
    pub fn from_letters(edges: &[&str]) -> Self {
        Hypergraph::new(
            edges
                .iter()
                .enumerate()
                .map(|(i, e)| (format!("e{}", i + 1), e.chars().map(|c| c.to_string()).collect()))
                .collect(),
        )
    }

    pub fn vertices(&self) -> BTreeSet<String> {
        self.edges.iter().flat_map(|e| e.vertices.iter().cloned()).collect()
    }

    pub fn degree(&self, v: &str) -> usize {
        self.edges.iter().filter(|e| e.vertices.contains(v)).count()
    }

    pub fn edge(&self, label: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.label == label)
    }

    /// Vertices in at least two edges.
    pub fn join_vertices(&self) -> Vec<String> {
        self.vertices().into_iter().filter(|v| self.degree(v) >= 2).collect()
    }

    /// Removes vertices that occur in a single edge, then edges left empty.
    pub fn drop_singleton_vertices(&self) -> Hypergraph {
        let keep: BTreeSet<String> = self.join_vertices().into_iter().collect();
        Hypergraph {
            edges: self
                .edges
                .iter()
                .map(|e| Edge { label: e.label.clone(), vertices: e.vertices.intersection(&keep).cloned().collect() })
                .filter(|e| !e.vertices.is_empty())
                .collect(),
        }
    }

    /// Same edges up to label, as a multiset of vertex sets.
    pub fn same_structure(&self, other: &Hypergraph) -> bool {
        let mut a: Vec<&BTreeSet<String>> = self.edges.iter().map(|e| &e.vertices).collect();
        let mut b: Vec<&BTreeSet<String>> = other.edges.iter().map(|e| &e.vertices).collect();
        a.sort();
        b.sort();
        a == b
    }

    pub(crate) fn masked(&self) -> Result<Masked> {
        let names: Vec<String> = self.vertices().into_iter().collect();
        if names.len() > 64 {
            return Err(Error::SizeLimitExceeded { what: "vertex count".into(), limit: 64 });
        }
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let edges =
            self.edges.iter().map(|e| e.vertices.iter().fold(0u64, |m, v| m | 1 << index[v.as_str()])).collect();
        Ok(Masked { names, edges })
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let vs: Vec<&str> = e.vertices.iter().map(String::as_str).collect();
            write!(f, "{}{{{}}}", e.label, vs.join(","))?;
        }
        Ok(())
    }
}

/// Vertices as bit positions, in name order.
#[derive(Clone, Debug)]
pub(crate) struct Masked {
    pub names: Vec<String>,
    pub edges: Vec<u64>,
}

impl Masked {
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn all(&self) -> u64 {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.n()) - 1
        }
    }

    pub fn set_names(&self, m: u64) -> BTreeSet<String> {
        bits(m).map(|i| self.names[i].clone()).collect()
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drop_singletons_removes_private_vertices_and_empty_edges() {
        let h = Hypergraph::from_letters(&["AB", "BC", "D"]);
        let d = h.drop_singleton_vertices();
        assert_eq!(d.to_string(), "e1{B}, e2{B}");
        assert_eq!(h.join_vertices(), ["B"]);
    }
}
