//! Segment trees over the elementary segments of a set of endpoints.
//!
//! With sorted endpoints `p1 < … < pm` the leaves, left to right, are
//! `(-∞,p1), [p1,p1], (p1,p2), …, [pm,pm], (pm,∞)`, padded on the right with
//! empty placeholders up to a power of two so that every leaf has depth `h`.
//! Nodes are bitstrings: `0` goes left, `1` goes right, the root is `ε`.

use std::collections::HashMap;
use std::fmt;

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::Rational;

/// Leaf layout of a segment tree; enough to compute canonical partitions
/// and leaves without storing any subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    endpoints: Vec<Rational>,
    height: usize,
}

impl Grid {
    pub fn new(mut endpoints: Vec<Rational>) -> Result<Self> {
        endpoints.sort();
        endpoints.dedup();
        let leaves = 2 * endpoints.len() + 1;
        let height = leaves.next_power_of_two().trailing_zeros() as usize;
        if height > Bitstring::MAX_LEN {
            return Err(Error::SizeLimitExceeded { what: "segment tree height".into(), limit: Bitstring::MAX_LEN });
        }
        Ok(Grid { endpoints, height })
    }

    pub fn of_intervals<'a>(xs: impl IntoIterator<Item = &'a Interval>) -> Result<Self> {
        Grid::new(xs.into_iter().flat_map(|x| [x.l.clone(), x.r.clone()]).collect())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn endpoints(&self) -> &[Rational] {
        &self.endpoints
    }

    /// Leaves holding real elementary segments.
    pub fn real_leaves(&self) -> u64 {
        2 * self.endpoints.len() as u64 + 1
    }

    fn leaf_index(&self, p: &Rational) -> u64 {
        match self.endpoints.binary_search(p) {
            Ok(j) => 2 * j as u64 + 1,
            Err(j) => 2 * j as u64,
        }
    }

    /// Leaf whose elementary segment contains `p`.
    pub fn leaf(&self, p: &Rational) -> Bitstring {
        Bitstring::new(self.leaf_index(p), self.height)
    }

    /// Leaf holding the left endpoint of `x`.
    pub fn leaf_of(&self, x: &Interval) -> Bitstring {
        self.leaf(&x.l)
    }

    fn leaf_range(&self, x: &Interval) -> Result<(u64, u64)> {
        let lo = self.endpoints.binary_search(&x.l);
        let hi = self.endpoints.binary_search(&x.r);
        match (lo, hi) {
            (Ok(a), Ok(b)) => Ok((2 * a as u64 + 1, 2 * b as u64 + 1)),
            _ => Err(Error::UnknownInterval(x.to_string())),
        }
    }

    /// Canonical partition of `x`, left to right. Both endpoints must be on
    /// the grid.
    pub fn canonical_partition(&self, x: &Interval) -> Result<Vec<Bitstring>> {
        let (lo, hi) = self.leaf_range(x)?;
        let mut out = Vec::new();
        self.decompose(Bitstring::EMPTY, 0, 1u64 << self.height, lo, hi, &mut out);
        Ok(out)
    }

    fn decompose(&self, node: Bitstring, start: u64, width: u64, lo: u64, hi: u64, out: &mut Vec<Bitstring>) {
        let end = start + width - 1;
        if hi < start || end < lo {
            return;
        }
        if lo <= start && end <= hi {
            out.push(node);
            return;
        }
        let half = width / 2;
        self.decompose(node.child(false), start, half, lo, hi, out);
        self.decompose(node.child(true), start + half, half, lo, hi, out);
    }

    /// Leaves below `node` as an index range.
    pub fn leaves_under(&self, node: Bitstring) -> (u64, u64) {
        let d = self.height - node.len();
        let start = node.index() << d;
        (start, start + (1u64 << d) - 1)
    }

    /// Union of the elementary segments below `node`.
    pub fn segment(&self, node: Bitstring) -> Segment {
        let (a, b) = self.leaves_under(node);
        let last = self.real_leaves() - 1;
        if a > last {
            return Segment::Empty;
        }
        let b = b.min(last);
        let e = &self.endpoints;
        let lower = if a % 2 == 1 {
            Bound::Closed(e[(a / 2) as usize].clone())
        } else if a == 0 {
            Bound::Infinite
        } else {
            Bound::Open(e[(a / 2 - 1) as usize].clone())
        };
        let upper = if b % 2 == 1 {
            Bound::Closed(e[(b / 2) as usize].clone())
        } else if b == last {
            Bound::Infinite
        } else {
            Bound::Open(e[(b / 2) as usize].clone())
        };
        Segment::Range { lower, upper }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Infinite,
    Open(Rational),
    Closed(Rational),
}

/// Elementary segment or union of adjacent ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Empty,
    Range { lower: Bound, upper: Bound },
}

impl Segment {
    pub fn contains_point(&self, p: &Rational) -> bool {
        match self {
            Segment::Empty => false,
            Segment::Range { lower, upper } => {
                let lo = match lower {
                    Bound::Infinite => true,
                    Bound::Open(x) => x < p,
                    Bound::Closed(x) => x <= p,
                };
                let hi = match upper {
                    Bound::Infinite => true,
                    Bound::Open(x) => p < x,
                    Bound::Closed(x) => p <= x,
                };
                lo && hi
            }
        }
    }

    /// `self ⊆ x`.
    pub fn within(&self, x: &Interval) -> bool {
        match self {
            Segment::Empty => true,
            Segment::Range { lower, upper } => {
                let lo = match lower {
                    Bound::Infinite => false,
                    Bound::Open(a) | Bound::Closed(a) => &x.l <= a,
                };
                let hi = match upper {
                    Bound::Infinite => false,
                    Bound::Open(b) | Bound::Closed(b) => b <= &x.r,
                };
                lo && hi
            }
        }
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Segment) -> bool {
        let (Segment::Range { lower: l1, upper: u1 }, Segment::Range { lower: l2, upper: u2 }) = (self, other) else {
            return matches!(other, Segment::Empty);
        };
        // lower bounds: -∞ < [x < (x ; upper bounds: x) < x] < +∞
        let lkey = |b: &Bound| match b {
            Bound::Infinite => None,
            Bound::Open(x) => Some((x.clone(), 1)),
            Bound::Closed(x) => Some((x.clone(), 0)),
        };
        let ukey = |b: &Bound| match b {
            Bound::Infinite => None,
            Bound::Open(x) => Some((x.clone(), 0)),
            Bound::Closed(x) => Some((x.clone(), 1)),
        };
        let lower_ok = match (lkey(l1), lkey(l2)) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        };
        let upper_ok = match (ukey(u1), ukey(u2)) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a >= b,
        };
        lower_ok && upper_ok
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Empty => f.write_str("∅"),
            Segment::Range { lower, upper } => {
                match lower {
                    Bound::Infinite => f.write_str("(-∞")?,
                    Bound::Open(x) => write!(f, "({x}")?,
                    Bound::Closed(x) => write!(f, "[{x}")?,
                }
                match upper {
                    Bound::Infinite => f.write_str(",∞)"),
                    Bound::Open(x) => write!(f, ",{x})"),
                    Bound::Closed(x) => write!(f, ",{x}]"),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPartition {
    pub interval: Interval,
    pub nodes: Vec<Bitstring>,
}

/// Segment tree with the canonical subset of every node.
#[derive(Clone, Debug)]
pub struct SegmentTree {
    grid: Grid,
    intervals: Vec<Interval>,
    subsets: HashMap<Bitstring, Vec<usize>>,
}

impl SegmentTree {
    /// Builds over the distinct members of `xs`.
    pub fn build(xs: &[Interval]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptyInput("segment tree needs at least one interval".into()));
        }
        let mut intervals = xs.to_vec();
        intervals.sort();
        intervals.dedup();
        let grid = Grid::of_intervals(&intervals)?;
        let mut subsets: HashMap<Bitstring, Vec<usize>> = HashMap::new();
        for (i, x) in intervals.iter().enumerate() {
            for v in grid.canonical_partition(x)? {
                subsets.entry(v).or_default().push(i);
            }
        }
        Ok(SegmentTree { grid, intervals, subsets })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn height(&self) -> usize {
        self.grid.height
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn leaf_of(&self, x: &Interval) -> Bitstring {
        self.grid.leaf_of(x)
    }

    pub fn leaf(&self, p: &Rational) -> Bitstring {
        self.grid.leaf(p)
    }

    pub fn canonical_partition(&self, x: &Interval) -> Result<CanonicalPartition> {
        Ok(CanonicalPartition { interval: x.clone(), nodes: self.grid.canonical_partition(x)? })
    }

    /// Stored intervals whose canonical partition contains `node`.
    pub fn canonical_subset(&self, node: Bitstring) -> Vec<&Interval> {
        self.subsets.get(&node).map_or_else(Vec::new, |ix| ix.iter().map(|&i| &self.intervals[i]).collect())
    }

    /// Nodes with a non-empty canonical subset.
    pub fn occupied_nodes(&self) -> Vec<Bitstring> {
        let mut v: Vec<Bitstring> = self.subsets.keys().copied().collect();
        v.sort();
        v
    }

    /// Stored intervals containing `p`, collected on the root-to-leaf path.
    pub fn stab_query(&self, p: &Rational) -> Vec<&Interval> {
        let leaf = self.grid.leaf(p);
        let mut out = Vec::new();
        for v in leaf.ancestors() {
            if let Some(ix) = self.subsets.get(&v) {
                out.extend(ix.iter().map(|&i| &self.intervals[i]));
            }
        }
        out
    }

    /// One line per node in preorder: bitstring, segment, canonical subset.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![Bitstring::EMPTY];
        while let Some(v) = stack.pop() {
            let subset: Vec<String> = self.canonical_subset(v).iter().map(|x| x.to_string()).collect();
            out.push_str(&"  ".repeat(v.len()));
            out.push_str(&v.to_string());
            out.push(' ');
            out.push_str(&self.grid.segment(v).to_string());
            if !subset.is_empty() {
                out.push_str(" {");
                out.push_str(&subset.join(", "));
                out.push('}');
            }
            out.push('\n');
            if v.len() < self.grid.height {
                stack.push(v.child(true));
                stack.push(v.child(false));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    fn example() -> SegmentTree {
        SegmentTree::build(&[Interval::from_ints(1, 4), Interval::from_ints(3, 4)]).unwrap()
    }

    #[test]
    fn worked_example_layout() {
        let t = example();
        assert_eq!(t.height(), 3);
        let cp = |l, r| t.canonical_partition(&Interval::from_ints(l, r)).unwrap().nodes;
        assert_eq!(cp(1, 4), vec![bs("001"), bs("01"), bs("10")]);
        assert_eq!(cp(3, 4), vec![bs("011"), bs("10")]);
        assert_eq!(t.leaf(&Rational::from_int(3)), bs("011"));
        assert_eq!(t.leaf(&Rational::from_int(1)), bs("001"));
        assert_eq!(t.leaf(&Rational::new(7, 2)), bs("100"));
        assert_eq!(t.grid().segment(bs("111")), Segment::Empty);
        assert_eq!(t.grid().segment(bs("11")).to_string(), "(4,∞)");
        assert_eq!(t.grid().segment(bs("0")).to_string(), "(-∞,3]");
    }

    #[test]
    fn dump_golden() {
        let want = "\
ε (-∞,∞)
  0 (-∞,3]
    00 (-∞,1]
      000 (-∞,1)
      001 [1,1] {[1,4]}
    01 (1,3] {[1,4]}
      010 (1,3)
      011 [3,3] {[3,4]}
  1 (3,∞)
    10 (3,4] {[1,4], [3,4]}
      100 (3,4)
      101 [4,4]
    11 (4,∞)
      110 (4,∞)
      111 ∅
";
        assert_eq!(example().dump(), want);
    }

    #[test]
    fn stabbing_and_errors() {
        let t = example();
        assert_eq!(t.stab_query(&Rational::from_int(2)).len(), 1);
        assert_eq!(t.stab_query(&Rational::from_int(4)).len(), 2);
        assert!(t.stab_query(&Rational::from_int(5)).is_empty());
        assert!(matches!(t.canonical_partition(&Interval::from_ints(2, 4)), Err(Error::UnknownInterval(_))));
        assert!(matches!(SegmentTree::build(&[]), Err(Error::EmptyInput(_))));
    }
}
