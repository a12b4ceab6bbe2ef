use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use serde::Serialize;

use super::{decomp_eval, oracle_eval_capped, wcoj_bool, yannakakis_bool, DEFAULT_MAX_ORACLE_CELLS};
use crate::database::Database;
use crate::error::{Error, Result};
use crate::hypergraph::is_alpha_acyclic;
use crate::query::Query;
use crate::reduction::{reduce_full_with_limit, simplify, DEFAULT_MEMBER_LIMIT};
use crate::widths::{fhtw, TreeDecomposition, DEFAULT_VERTEX_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum Strategy {
    /// Yannakakis on acyclic members, a decomposition otherwise, the generic
    /// join when the width computation is out of reach.
    #[default]
    Auto,
    OracleOnly,
    /// Yannakakis on acyclic members, the generic join otherwise.
    ReduceYannakakis,
    /// A decomposition for every member, the generic join as fallback.
    ReduceDecomp,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "auto" => Ok(Strategy::Auto),
            "oracle" | "oracleonly" => Ok(Strategy::OracleOnly),
            "yannakakis" | "reduceyannakakis" => Ok(Strategy::ReduceYannakakis),
            "decomp" | "reducedecomp" => Ok(Strategy::ReduceDecomp),
            _ => Err(Error::BadValue(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub strategy: Strategy,
    pub parallel: bool,
    pub max_oracle_cells: u128,
    pub vertex_cap: usize,
    pub member_limit: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            strategy: Strategy::Auto,
            parallel: false,
            max_oracle_cells: DEFAULT_MAX_ORACLE_CELLS,
            vertex_cap: DEFAULT_VERTEX_CAP,
            member_limit: DEFAULT_MEMBER_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Engine {
    Oracle,
    Yannakakis,
    Decomposition,
    GenericJoin,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub shape: String,
    pub engine: Engine,
    pub variants: usize,
    /// Width of the decomposition used, as a rational string.
    pub width: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub reduce_ms: f64,
    pub simplify_ms: f64,
    pub plan_ms: f64,
    pub evaluate_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub result: bool,
    pub strategy: Strategy,
    pub members: usize,
    pub shapes: Vec<ShapeReport>,
    /// Row counts of the transformed relations.
    pub relation_sizes: BTreeMap<String, usize>,
    pub timings: Timings,
    /// Evaluation stopped at the first true member.
    pub early_exit: bool,
    /// Input row chosen for each atom, by atom label, when true.
    pub witness: Option<BTreeMap<String, usize>>,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

enum Plan {
    Yannakakis,
    Decomposition(TreeDecomposition, String),
    GenericJoin,
}

/// Evaluates an interval, equality or mixed join. Every strategy other than
/// the oracle resolves all interval join variables, simplifies, and ORs the
/// members with an early exit.
pub fn eval_ij(q: &Query, db: &Database, opts: &EvalOptions) -> Result<EvalReport> {
    let start = Instant::now();
    db.bind_all(q)?;
    if opts.strategy == Strategy::OracleOnly {
        let (result, rows) = oracle_eval_capped(q, db, opts.max_oracle_cells)?;
        let t = ms(start);
        return Ok(EvalReport {
            result,
            strategy: opts.strategy,
            members: 1,
            shapes: vec![ShapeReport { shape: q.to_string(), engine: Engine::Oracle, variants: 1, width: None }],
            relation_sizes: BTreeMap::new(),
            timings: Timings { evaluate_ms: t, total_ms: t, ..Timings::default() },
            early_exit: false,
            witness: rows.map(|r| label_rows(q, &r)),
        });
    }
    let t0 = Instant::now();
    let red = reduce_full_with_limit(q, db, opts.member_limit)?;
    let reduce_ms = ms(t0);
    let t1 = Instant::now();
    let simplified = simplify(&red.queries);
    let simplify_ms = ms(t1);
    let t2 = Instant::now();
    let mut plans = Vec::with_capacity(simplified.len());
    let mut shapes = Vec::with_capacity(simplified.len());
    for s in &simplified {
        let h = s.shape.hypergraph();
        let acyclic = is_alpha_acyclic(&h);
        let plan = match opts.strategy {
            Strategy::ReduceYannakakis if acyclic => Plan::Yannakakis,
            Strategy::Auto if acyclic => Plan::Yannakakis,
            Strategy::ReduceYannakakis => Plan::GenericJoin,
            _ => match fhtw(&h, opts.vertex_cap) {
                Ok((w, td)) => Plan::Decomposition(td, w.to_string()),
                Err(Error::SizeLimitExceeded { .. }) => Plan::GenericJoin,
                Err(e) => return Err(e),
            },
        };
        let (engine, width) = match &plan {
            Plan::Yannakakis => (Engine::Yannakakis, None),
            Plan::Decomposition(_, w) => (Engine::Decomposition, Some(w.clone())),
            Plan::GenericJoin => (Engine::GenericJoin, None),
        };
        shapes.push(ShapeReport { shape: s.shape.to_string(), engine, variants: s.variants.len(), width });
        plans.push(plan);
    }
    let plan_ms = ms(t2);
    let t3 = Instant::now();
    let jobs: Vec<(usize, usize)> =
        simplified.iter().enumerate().flat_map(|(si, s)| (0..s.variants.len()).map(move |vi| (si, vi))).collect();
    let stop = AtomicBool::new(false);
    let run = |&(si, vi): &(usize, usize)| -> Result<Option<Vec<usize>>> {
        if stop.load(Ordering::Relaxed) {
            return Ok(None);
        }
        let variant = &simplified[si].variants[vi];
        let (ok, rows) = match &plans[si] {
            Plan::Yannakakis => yannakakis_bool(&variant.query, &red.db)?,
            Plan::Decomposition(td, _) => decomp_eval(&variant.query, &red.db, td)?,
            Plan::GenericJoin => wcoj_bool(&variant.query, &red.db)?,
        };
        if !ok {
            return Ok(None);
        }
        stop.store(true, Ordering::Relaxed);
        let rows = rows.expect("true results carry rows");
        Ok(Some(variant.query.atoms.iter().zip(&rows).map(|(a, &r)| red.db.get(&a.label).unwrap().origin(r)).collect()))
    };
    let found = find_first(&jobs, opts.parallel, &run)?;
    let evaluate_ms = ms(t3);
    Ok(EvalReport {
        result: found.is_some(),
        strategy: opts.strategy,
        members: red.queries.len(),
        shapes,
        relation_sizes: red.db.relations.iter().map(|(k, r)| (k.clone(), r.len())).collect(),
        timings: Timings { reduce_ms, simplify_ms, plan_ms, evaluate_ms, total_ms: ms(start) },
        early_exit: found.is_some(),
        witness: found.map(|r| label_rows(q, &r)),
    })
}

fn label_rows(q: &Query, rows: &[usize]) -> BTreeMap<String, usize> {
    q.atoms.iter().zip(rows).map(|(a, &r)| (a.label.clone(), r)).collect()
}

type Job = (usize, usize);

#[cfg(feature = "parallel")]
fn find_first(
    jobs: &[Job],
    parallel: bool,
    run: &(dyn Fn(&Job) -> Result<Option<Vec<usize>>> + Sync),
) -> Result<Option<Vec<usize>>> {
    if parallel {
        use rayon::prelude::*;
        return jobs
            .par_iter()
            .map(run)
            .find_map_any(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None));
    }
    find_first_serial(jobs, run)
}

#[cfg(not(feature = "parallel"))]
fn find_first(
    jobs: &[Job],
    _parallel: bool,
    run: &(dyn Fn(&Job) -> Result<Option<Vec<usize>>> + Sync),
) -> Result<Option<Vec<usize>>> {
    find_first_serial(jobs, run)
}

fn find_first_serial(jobs: &[Job], run: &dyn Fn(&Job) -> Result<Option<Vec<usize>>>) -> Result<Option<Vec<usize>>> {
    for j in jobs {
        if let Some(rows) = run(j)? {
            return Ok(Some(rows));
        }
    }
    Ok(None)
}
