//! Evaluation engines and the end-to-end pipeline.

mod decomp;
mod oracle;
mod pipeline;
mod wcoj;
mod yannakakis;

pub use decomp::decomp_eval;
pub use oracle::{check_assignment, oracle_eval, oracle_eval_capped, DEFAULT_MAX_ORACLE_CELLS};
pub use pipeline::{eval_ij, Engine, EvalOptions, EvalReport, ShapeReport, Strategy, Timings};
pub use wcoj::wcoj_bool;
pub use yannakakis::yannakakis_bool;

use crate::database::{Database, Relation, Value};
use crate::error::{Error, Result};
use crate::query::Query;

fn require_equi_join(q: &Query) -> Result<()> {
    match q.interval_join_vars().into_iter().next() {
        Some(x) => Err(Error::NotEquiJoin(x)),
        None => Ok(()),
    }
}

/// An atom read through its relation: variable `i` is column `cols[i]`.
#[derive(Clone, Debug)]
pub(crate) struct View<'a> {
    pub vars: Vec<String>,
    pub rel: &'a Relation,
    pub cols: Vec<usize>,
}

impl<'a> View<'a> {
    pub fn bind(q: &Query, db: &'a Database) -> Result<Vec<View<'a>>> {
        q.atoms
            .iter()
            .map(|a| {
                Ok(View {
                    vars: a.vars.iter().map(|v| v.name.clone()).collect(),
                    cols: db.columns_for(a)?,
                    rel: db.get(&a.label).unwrap(),
                })
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rel.len()
    }

    /// Values of row `r` at the given variable positions.
    pub fn key(&self, r: usize, positions: &[usize]) -> Vec<&'a Value> {
        let row = self.rel.row(r);
        positions.iter().map(|&p| &row[self.cols[p]]).collect()
    }

    /// Positions of shared variables in `self` and in `other`, by name.
    pub fn shared_columns(&self, other: &View) -> (Vec<usize>, Vec<usize>) {
        let mut names: Vec<&String> = self.vars.iter().filter(|v| other.vars.contains(v)).collect();
        names.sort();
        (
            names.iter().map(|n| self.vars.iter().position(|v| v == *n).unwrap()).collect(),
            names.iter().map(|n| other.vars.iter().position(|v| v == *n).unwrap()).collect(),
        )
    }
}
