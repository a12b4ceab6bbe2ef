use std::cmp::Ordering;

use super::View;
use crate::database::{Database, Value};
use crate::error::Result;
use crate::query::Query;

/// Generic worst-case optimal join over sorted tries, stopping at the first
/// answer. Variables are taken by descending degree, ties by name; those in
/// a single atom are projected away.
pub fn wcoj_bool(q: &Query, db: &Database) -> Result<(bool, Option<Vec<usize>>)> {
    super::require_equi_join(q)?;
    let views = View::bind(q, db)?;
    let mut found = None;
    GenericJoin::new(&views).run(&mut |_, rows| {
        found = Some(rows.to_vec());
        false
    });
    Ok((found.is_some(), found))
}

/// Join of views on their shared variables.
pub(crate) struct GenericJoin<'a> {
    pub order: Vec<String>,
    tries: Vec<Trie<'a>>,
}

/// Distinct projections of one view onto its variables in global order,
/// sorted, each with one source row.
struct Trie<'a> {
    depths: Vec<usize>,
    rows: Vec<(Vec<&'a Value>, usize)>,
}

impl<'a> GenericJoin<'a> {
    pub fn new(views: &'a [View<'a>]) -> Self {
        let mut names: Vec<(usize, String)> = Vec::new();
        for v in views {
            for n in &v.vars {
                if !names.iter().any(|(_, m)| m == n) {
                    let deg = views.iter().filter(|w| w.vars.contains(n)).count();
                    names.push((deg, n.clone()));
                }
            }
        }
        names.retain(|(d, _)| *d >= 2);
        names.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let order: Vec<String> = names.into_iter().map(|(_, n)| n).collect();
        Self::with_order(views, order)
    }

    /// Join over exactly the variables of `order`, in that order; other
    /// columns are projected away.
    pub fn with_order(views: &'a [View<'a>], order: Vec<String>) -> Self {
        let tries = views
            .iter()
            .map(|v| {
                let mut depths = Vec::new();
                let mut cols = Vec::new();
                for (d, n) in order.iter().enumerate() {
                    if let Some(c) = v.vars.iter().position(|m| m == n) {
                        depths.push(d);
                        cols.push(c);
                    }
                }
                let mut rows: Vec<(Vec<&Value>, usize)> = (0..v.len()).map(|r| (v.key(r, &cols), r)).collect();
                rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
                rows.dedup_by(|a, b| a.0 == b.0);
                Trie { depths, rows }
            })
            .collect();
        GenericJoin { order, tries }
    }

    /// Calls `emit(values, rows)` for each answer until it returns false.
    /// `rows` holds one source row per view.
    pub fn run(&self, emit: &mut dyn FnMut(&[&Value], &[usize]) -> bool) {
        if self.tries.iter().any(|t| t.rows.is_empty()) {
            return;
        }
        let ranges: Vec<(usize, usize)> = self.tries.iter().map(|t| (0, t.rows.len())).collect();
        let mut values = Vec::with_capacity(self.order.len());
        self.step(0, &ranges, &mut values, emit);
    }

    fn step<'v>(
        &'v self,
        d: usize,
        ranges: &[(usize, usize)],
        values: &mut Vec<&'v Value>,
        emit: &mut dyn FnMut(&[&Value], &[usize]) -> bool,
    ) -> bool {
        if d == self.order.len() {
            let rows: Vec<usize> = self.tries.iter().zip(ranges).map(|(t, r)| t.rows[r.0].1).collect();
            return emit(values, &rows);
        }
        let part: Vec<(usize, usize)> = self
            .tries
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.depths.iter().position(|&x| x == d).map(|lvl| (i, lvl)))
            .collect();
        let &(lead, lead_lvl) = part.iter().min_by_key(|(i, _)| ranges[*i].1 - ranges[*i].0).unwrap();
        let (mut lo, hi) = ranges[lead];
        let lead_rows = &self.tries[lead].rows;
        while lo < hi {
            let val = lead_rows[lo].0[lead_lvl];
            let end = lo + lead_rows[lo..hi].partition_point(|r| r.0[lead_lvl] <= val);
            let mut next = ranges.to_vec();
            next[lead] = (lo, end);
            let mut ok = true;
            for &(i, lvl) in &part {
                if i == lead {
                    continue;
                }
                let (a, b) = ranges[i];
                let rows = &self.tries[i].rows[a..b];
                let s = rows.partition_point(|r| r.0[lvl].cmp(val) == Ordering::Less);
                let e = rows.partition_point(|r| r.0[lvl] <= val);
                if s == e {
                    ok = false;
                    break;
                }
                next[i] = (a + s, a + e);
            }
            if ok {
                values.push(val);
                if !self.step(d + 1, &next, values, emit) {
                    return false;
                }
                values.pop();
            }
            lo = end;
        }
        true
    }
}
