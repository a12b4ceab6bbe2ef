use std::collections::BTreeMap;

use crate::database::{Database, Value};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::query::{Query, VarKind};

/// Default cap on the product of relation sizes the oracle accepts.
pub const DEFAULT_MAX_ORACLE_CELLS: u128 = 10_000_000;

/// Checks one tuple per atom against the query directly: point variables
/// agree, interval variables have a common point.
pub fn check_assignment(q: &Query, db: &Database, rows: &[usize]) -> Result<bool> {
    if rows.len() != q.atoms.len() {
        return Ok(false);
    }
    let mut points: BTreeMap<&str, &Value> = BTreeMap::new();
    let mut spans: BTreeMap<&str, Interval> = BTreeMap::new();
    for (a, &ri) in q.atoms.iter().zip(rows) {
        let cols = db.columns_for(a)?;
        let rel = db.get(&a.label).unwrap();
        if ri >= rel.len() {
            return Ok(false);
        }
        let row = rel.row(ri);
        for (v, &c) in a.vars.iter().zip(&cols) {
            match v.kind {
                VarKind::Point => {
                    if let Some(prev) = points.insert(&v.name, &row[c]) {
                        if prev != &row[c] {
                            return Ok(false);
                        }
                    }
                }
                VarKind::Interval => {
                    let x = row[c].as_interval().unwrap();
                    let next = match spans.get(v.name.as_str()) {
                        Some(cur) => match cur.intersect(x) {
                            Some(i) => i,
                            None => return Ok(false),
                        },
                        None => x.clone(),
                    };
                    spans.insert(&v.name, next);
                }
            }
        }
    }
    Ok(true)
}

/// Exhaustive backtracking over one tuple per atom, in atom order. Returns
/// the truth value and, when true, the row chosen for each atom.
pub fn oracle_eval(q: &Query, db: &Database) -> Result<(bool, Option<Vec<usize>>)> {
    oracle_eval_capped(q, db, DEFAULT_MAX_ORACLE_CELLS)
}

pub fn oracle_eval_capped(q: &Query, db: &Database, cap: u128) -> Result<(bool, Option<Vec<usize>>)> {
    let cols = db.bind_all(q)?;
    let rels: Vec<_> = q.atoms.iter().map(|a| db.get(&a.label).unwrap()).collect();
    let cells = rels.iter().fold(1u128, |acc, r| acc.saturating_mul(r.len() as u128));
    if cells > cap {
        return Err(Error::TooLargeForOracle { cells, cap });
    }
    let names: Vec<String> = q.variables().into_iter().map(|v| v.name).collect();
    let slot = |n: &str| names.iter().position(|m| m == n).unwrap();
    let plan: Vec<Vec<(usize, usize, VarKind)>> = q
        .atoms
        .iter()
        .zip(&cols)
        .map(|(a, cs)| a.vars.iter().zip(cs).map(|(v, &c)| (slot(&v.name), c, v.kind)).collect())
        .collect();

    #[derive(Clone)]
    enum State {
        Free,
        Point(Value),
        Span(Interval),
    }
    struct Search<'a> {
        rels: Vec<&'a crate::database::Relation>,
        plan: Vec<Vec<(usize, usize, VarKind)>>,
        state: Vec<State>,
        chosen: Vec<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, depth: usize) -> bool {
            if depth == self.rels.len() {
                return true;
            }
            let rel = self.rels[depth];
            'rows: for ri in 0..rel.len() {
                let row = rel.row(ri);
                let saved: Vec<(usize, State)> =
                    self.plan[depth].iter().map(|&(s, _, _)| (s, self.state[s].clone())).collect();
                for &(s, c, kind) in &self.plan[depth] {
                    let next = match (&self.state[s], kind) {
                        (State::Free, VarKind::Point) => State::Point(row[c].clone()),
                        (State::Free, VarKind::Interval) => State::Span(row[c].as_interval().unwrap().clone()),
                        (State::Point(p), _) if *p == row[c] => continue,
                        (State::Span(cur), _) => match cur.intersect(row[c].as_interval().unwrap()) {
                            Some(i) => State::Span(i),
                            None => {
                                restore(&mut self.state, saved);
                                continue 'rows;
                            }
                        },
                        _ => {
                            restore(&mut self.state, saved);
                            continue 'rows;
                        }
                    };
                    self.state[s] = next;
                }
                self.chosen.push(ri);
                if self.go(depth + 1) {
                    return true;
                }
                self.chosen.pop();
                restore(&mut self.state, saved);
            }
            false
        }
    }
    fn restore(state: &mut [State], saved: Vec<(usize, State)>) {
        for (s, st) in saved.into_iter().rev() {
            state[s] = st;
        }
    }
    let mut search = Search { rels, plan, state: vec![State::Free; names.len()], chosen: Vec::new() };
    if search.go(0) {
        Ok((true, Some(search.chosen)))
    } else {
        Ok((false, None))
    }
}
