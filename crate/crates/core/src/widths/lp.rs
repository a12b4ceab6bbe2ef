//! Exact fractional edge covers by the simplex method on rationals.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{bits, Hypergraph};
use crate::rational::Rational;

/// Optimal fractional edge cover of a vertex set, with a matching fractional
/// vertex packing that certifies optimality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCover {
    pub value: Rational,
    pub weights: Vec<(String, Rational)>,
    pub packing: Vec<(String, Rational)>,
}

impl EdgeCover {
    /// Cover and packing are feasible and have equal totals.
    pub fn verify(&self, h: &Hypergraph, bag: &BTreeSet<String>) -> bool {
        let weight = |l: &str| self.weights.iter().find(|(e, _)| e == l).map(|(_, w)| w.clone()).unwrap_or_default();
        let y = |v: &str| self.packing.iter().find(|(u, _)| u == v).map(|(_, w)| w.clone()).unwrap_or_default();
        let nonneg = self.weights.iter().chain(&self.packing).all(|(_, w)| !w.is_negative());
        let covered = bag.iter().all(|v| {
            let s =
                h.edges.iter().filter(|e| e.vertices.contains(v)).fold(Rational::zero(), |a, e| a + weight(&e.label));
            s >= Rational::one()
        });
        let packed = h.edges.iter().all(|e| {
            let s = e.vertices.iter().filter(|v| bag.contains(*v)).fold(Rational::zero(), |a, v| a + y(v));
            s <= Rational::one()
        });
        let sw = self.weights.iter().fold(Rational::zero(), |a, (_, w)| a + w.clone());
        let sy = self.packing.iter().fold(Rational::zero(), |a, (_, w)| a + w.clone());
        nonneg && covered && packed && sw == self.value && sy == self.value
    }
}

/// `ρ*(bag)`: minimum total edge weight putting weight at least one on every
/// vertex of `bag`.
pub fn rho_star(h: &Hypergraph, bag: &BTreeSet<String>) -> Result<EdgeCover> {
    let m = h.masked()?;
    let mut mask = 0u64;
    for v in bag {
        match m.names.iter().position(|n| n == v) {
            Some(i) => mask |= 1 << i,
            None => return Err(Error::UncoverableVertex(v.clone())),
        }
    }
    let (value, x, y) = solve_cover(&m.edges, mask).map_err(|i| Error::UncoverableVertex(m.names[i].clone()))?;
    Ok(EdgeCover {
        value,
        weights: h.edges.iter().map(|e| e.label.clone()).zip(x).collect(),
        packing: bits(mask).map(|i| m.names[i].clone()).zip(y).collect(),
    })
}

/// Solves the packing LP `max Σ y_v` s.t. `Σ_{v∈e} y_v ≤ 1` with Bland's
/// rule, reading the cover off the final objective row. Returns the value,
/// the edge weights and the vertex weights (in bit order of `bag`), or the
/// index of a vertex no edge covers.
pub(crate) fn solve_cover(
    edges: &[u64],
    bag: u64,
) -> std::result::Result<(Rational, Vec<Rational>, Vec<Rational>), usize> {
    let vars: Vec<usize> = bits(bag).collect();
    for &v in &vars {
        if !edges.iter().any(|e| e >> v & 1 == 1) {
            return Err(v);
        }
    }
    let n = vars.len();
    let m = edges.len();
    let width = n + m + 1;
    let zero = Rational::zero();
    let one = Rational::one();
    // rows 0..m constraints, row m objective (z - Σy = 0)
    let mut t = vec![vec![zero.clone(); width]; m + 1];
    for (r, e) in edges.iter().enumerate() {
        for (c, &v) in vars.iter().enumerate() {
            if e >> v & 1 == 1 {
                t[r][c] = one.clone();
            }
        }
        t[r][n + r] = one.clone();
        t[r][width - 1] = one.clone();
    }
    for x in t[m].iter_mut().take(n) {
        *x = -one.clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n + m).find(|&c| t[m][c].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..m {
            if t[r][enter].is_positive() {
                let ratio = &t[r][width - 1] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // bounded: every column meets a row with a positive entry
        let (pr, _) = leave.expect("packing LP is bounded once every vertex is covered");
        let piv = t[pr][enter].clone();
        let prow: Vec<Rational> = t[pr].iter().map(|x| x / &piv).collect();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x = &*x - &(&f * p);
                }
            }
        }
        t[pr] = prow;
        basis[pr] = enter;
    }
    let value = t[m][width - 1].clone();
    let x: Vec<Rational> = (0..m).map(|r| t[m][n + r].clone()).collect();
    let mut y = vec![zero; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = t[r][width - 1].clone();
        }
    }
    Ok((value, x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> BTreeSet<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn triangle_needs_three_halves() {
        let h = Hypergraph::from_letters(&["AB", "BC", "AC"]);
        let c = rho_star(&h, &set("ABC")).unwrap();
        assert_eq!(c.value, Rational::new(3, 2));
        assert!(c.verify(&h, &set("ABC")));
        assert_eq!(rho_star(&h, &set("AB")).unwrap().value, Rational::one());
        assert_eq!(rho_star(&h, &BTreeSet::new()).unwrap().value, Rational::zero());
    }

    #[test]
    fn uncovered_vertex_is_an_error() {
        let h = Hypergraph::from_letters(&["AB"]);
        assert!(matches!(rho_star(&h, &set("AC")), Err(Error::UncoverableVertex(v)) if v == "C"));
    }
}
