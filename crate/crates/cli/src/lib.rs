//! Command-line front end: database files, subcommands and JSON reports.

pub mod args;
pub mod error;
pub mod io;
pub mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use ijoin::eval::{eval_ij, EvalOptions, Strategy};
use ijoin::gen::{gen_synthetic, GenSpec};
use ijoin::hypergraph::{classify, is_alpha_acyclic, isomorphism_classes, BergeCycle};
use ijoin::reduction::{predict_counts, reduce_full_with_limit, simplify, simplify_hypergraphs, tau};
use ijoin::widths::ijw_fhtw_upper;
use ijoin::{parse_query, Database, Query};
use serde::Serialize;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};
pub use io::{load_database, save_database};
pub use report::RunReport;

use args::{AnalyzeArgs, BenchArgs, DataArgs, EvalArgs, GenArgs, OracleArgs, QueryArg, ReduceArgs, WidthsArgs};
use report::{digest_database, digest_text, InputDigest};

/// What a command prints.
#[derive(Debug)]
pub enum Output {
    Report(Box<RunReport>),
    Csv(String),
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Report(r) => f.write_str(&r.to_json()),
            Output::Csv(s) => f.write_str(s),
        }
    }
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    let report = match cmd {
        Command::Analyze(a) => analyze(a)?,
        Command::Reduce(a) => reduce(a)?,
        Command::Eval(a) => eval(a)?,
        Command::Oracle(a) => oracle(a)?,
        Command::Widths(a) => widths(a)?,
        Command::Gen(a) => gen(a)?,
        Command::Bench(a) => return bench(a),
    };
    Ok(Output::Report(Box::new(report)))
}

fn to_value(x: impl Serialize) -> serde_json::Value {
    serde_json::to_value(x).expect("output serializes")
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn read_query(arg: &QueryArg, report: &mut RunReport) -> CliResult<Query> {
    let (text, path) = match (&arg.query, &arg.query_file) {
        (Some(t), _) => (t.clone(), None),
        (None, Some(p)) => (fs::read_to_string(p).map_err(|e| CliError::io(p, e))?, Some(p.display().to_string())),
        (None, None) => return Err(CliError::Usage("a query is required".into())),
    };
    report.inputs.push(InputDigest { kind: "query", path, sha256: digest_text(&text) });
    Ok(parse_query(&text)?)
}

fn read_database(path: &Path, report: &mut RunReport) -> CliResult<Database> {
    report.inputs.push(InputDigest {
        kind: "database",
        path: Some(path.display().to_string()),
        sha256: digest_database(path)?,
    });
    load_database(path)
}

#[derive(Serialize)]
struct AnalyzeOutput {
    query: String,
    interval_join_variables: Vec<String>,
    alpha: bool,
    gamma: Option<bool>,
    iota: bool,
    berge: bool,
    /// A Berge cycle of length at least three when the query is not
    /// iota-acyclic.
    berge_cycle: Option<BergeCycle>,
    /// Every reduced hypergraph is alpha-acyclic; absent above the limit.
    iota_semantic: Option<bool>,
    tau: u128,
    variants_per_relation: BTreeMap<String, u128>,
    simplified: Option<usize>,
    classes: Option<usize>,
}

fn analyze(a: &AnalyzeArgs) -> CliResult<RunReport> {
    let mut report = RunReport::new("analyze", a);
    let start = Instant::now();
    let q = read_query(&a.query, &mut report)?;
    let h = q.hypergraph();
    let c = classify(&h);
    let counts = predict_counts(&h);
    let (iota_semantic, simplified, classes) = if counts.queries <= a.member_limit as u128 {
        let members = tau(&h, a.member_limit)?;
        let simple = simplify_hypergraphs(&members);
        let classes = isomorphism_classes(&simple).ok().map(|c| c.len());
        (Some(members.iter().all(is_alpha_acyclic)), Some(simple.len()), classes)
    } else {
        (None, None, None)
    };
    report.output = to_value(AnalyzeOutput {
        query: q.to_string(),
        interval_join_variables: q.interval_join_vars(),
        alpha: c.alpha,
        gamma: c.gamma,
        iota: c.iota,
        berge: c.berge,
        berge_cycle: c.berge_cycle,
        iota_semantic,
        tau: counts.queries,
        variants_per_relation: counts.variants_per_edge.into_iter().collect(),
        simplified,
        classes,
    });
    report.timings_ms.insert("total".into(), ms(start));
    Ok(report)
}

#[derive(Serialize)]
struct MemberWidth {
    hypergraph: String,
    fhtw: String,
    class: usize,
}

#[derive(Serialize)]
struct WidthsOutput {
    query: String,
    tau: u128,
    simplified: usize,
    classes: Vec<String>,
    members: Vec<MemberWidth>,
    ijw_fhtw_upper: String,
    /// The value bounds the sharp width from above.
    upper_bound: bool,
}

fn widths(a: &WidthsArgs) -> CliResult<RunReport> {
    let mut report = RunReport::new("widths", a);
    let start = Instant::now();
    let q = read_query(&a.query, &mut report)?;
    let h = q.hypergraph();
    let w = ijw_fhtw_upper(&h, a.vertex_cap, a.member_limit)?;
    let hs: Vec<_> = w.members.iter().map(|(g, _)| g.clone()).collect();
    let groups = isomorphism_classes(&hs)?;
    let mut class_of = vec![0; hs.len()];
    for (ci, g) in groups.iter().enumerate() {
        for &i in g {
            class_of[i] = ci;
        }
    }
    report.output = to_value(WidthsOutput {
        query: q.to_string(),
        tau: predict_counts(&h).queries,
        simplified: hs.len(),
        classes: groups.iter().map(|g| w.members[g[0]].1.to_string()).collect(),
        members: w
            .members
            .iter()
            .zip(&class_of)
            .map(|((g, f), &class)| MemberWidth { hypergraph: g.to_string(), fhtw: f.to_string(), class })
            .collect(),
        ijw_fhtw_upper: w.value.to_string(),
        upper_bound: w.upper_bound,
    });
    report.timings_ms.insert("total".into(), ms(start));
    Ok(report)
}

#[derive(Serialize)]
struct ReduceOutput {
    query: String,
    members: usize,
    simplified: usize,
    relation_sizes: BTreeMap<String, usize>,
    out: String,
}

fn reduce(a: &ReduceArgs) -> CliResult<RunReport> {
    let mut report = RunReport::new("reduce", a);
    let q = read_query(&a.query, &mut report)?;
    let db = read_database(&a.db, &mut report)?;
    db.bind_all(&q)?;
    let t0 = Instant::now();
    let red = reduce_full_with_limit(&q, &db, a.member_limit)?;
    report.timings_ms.insert("reduce".into(), ms(t0));
    let simplified = simplify(&red.queries).len();
    let t1 = Instant::now();
    save_database(&red.db, &a.out)?;
    let members: String = red.queries.iter().map(|m| format!("{m}\n")).collect();
    let list = a.out.join("members.txt");
    fs::write(&list, members).map_err(|e| CliError::io(&list, e))?;
    report.timings_ms.insert("write".into(), ms(t1));
    report.output = to_value(ReduceOutput {
        query: q.to_string(),
        members: red.queries.len(),
        simplified,
        relation_sizes: red.db.relations.iter().map(|(k, r)| (k.clone(), r.len())).collect(),
        out: a.out.display().to_string(),
    });
    Ok(report)
}

/// Moves the engine timings from the output to the report.
fn eval_report(report: &mut RunReport, r: ijoin::EvalReport) {
    let t = &r.timings;
    for (k, v) in [
        ("reduce", t.reduce_ms),
        ("simplify", t.simplify_ms),
        ("plan", t.plan_ms),
        ("evaluate", t.evaluate_ms),
        ("total", t.total_ms),
    ] {
        report.timings_ms.insert(k.into(), v);
    }
    let mut out = to_value(&r);
    if let Some(o) = out.as_object_mut() {
        o.remove("timings");
    }
    report.output = out;
}

fn eval(a: &EvalArgs) -> CliResult<RunReport> {
    let mut report = RunReport::new("eval", a);
    let q = read_query(&a.query, &mut report)?;
    let db = read_database(&a.db, &mut report)?;
    let opts = EvalOptions {
        strategy: a.strategy,
        parallel: a.parallel,
        max_oracle_cells: a.max_oracle_cells,
        vertex_cap: a.vertex_cap,
        member_limit: a.member_limit,
    };
    eval_report(&mut report, eval_ij(&q, &db, &opts)?);
    Ok(report)
}

fn oracle(a: &OracleArgs) -> CliResult<RunReport> {
    let mut report = RunReport::new("oracle", a);
    let q = read_query(&a.query, &mut report)?;
    let db = read_database(&a.db, &mut report)?;
    let opts =
        EvalOptions { strategy: Strategy::OracleOnly, max_oracle_cells: a.max_oracle_cells, ..EvalOptions::default() };
    eval_report(&mut report, eval_ij(&q, &db, &opts)?);
    Ok(report)
}

fn spec_for(rows: usize, d: &DataArgs) -> GenSpec {
    let base = GenSpec::scaled(rows);
    GenSpec {
        rows,
        domain: d.domain.unwrap_or(base.domain),
        max_width: d.max_width,
        point_domain: d.point_domain.unwrap_or(base.point_domain),
    }
}

#[derive(Serialize)]
struct GenOutput {
    query: String,
    seed: u64,
    spec: GenSpec,
    relation_sizes: BTreeMap<String, usize>,
    out: String,
    /// Digest of what was written, computed like an input digest.
    sha256: String,
}

fn gen(a: &GenArgs) -> CliResult<RunReport> {
    let mut report = RunReport::new("gen", a);
    let start = Instant::now();
    let q = read_query(&a.query, &mut report)?;
    let spec = spec_for(a.rows, &a.data);
    let db = gen_synthetic(&q, &spec, a.seed);
    save_database(&db, &a.out)?;
    report.output = to_value(GenOutput {
        query: q.to_string(),
        seed: a.seed,
        relation_sizes: db.relations.iter().map(|(k, r)| (k.clone(), r.len())).collect(),
        spec,
        out: a.out.display().to_string(),
        sha256: digest_database(&a.out)?,
    });
    report.timings_ms.insert("total".into(), ms(start));
    Ok(report)
}

#[derive(Serialize)]
struct BenchOutput {
    query: String,
    runs: usize,
    true_runs: usize,
    out: String,
}

fn bench(a: &BenchArgs) -> CliResult<Output> {
    let mut report = RunReport::new("bench", a);
    let q = read_query(&a.query, &mut report)?;
    let opts =
        EvalOptions { strategy: a.strategy, parallel: a.parallel, vertex_cap: a.vertex_cap, ..EvalOptions::default() };
    let mut csv = String::from("n,seed,phase,seconds\n");
    let (mut runs, mut true_runs) = (0, 0);
    for &n in &a.sizes {
        for &seed in &a.seeds {
            let db = gen_synthetic(&q, &spec_for(n, &a.data), seed);
            let r = eval_ij(&q, &db, &opts)?;
            let t = &r.timings;
            for (phase, v) in [
                ("reduce", t.reduce_ms),
                ("simplify", t.simplify_ms),
                ("plan", t.plan_ms),
                ("evaluate", t.evaluate_ms),
                ("total", t.total_ms),
            ] {
                csv.push_str(&format!("{n},{seed},{phase},{:.6}\n", v / 1e3));
            }
            runs += 1;
            true_runs += usize::from(r.result);
        }
    }
    let Some(out) = &a.out else {
        return Ok(Output::Csv(csv));
    };
    fs::write(out, &csv).map_err(|e| CliError::io(out, e))?;
    report.output = to_value(BenchOutput { query: q.to_string(), runs, true_runs, out: out.display().to_string() });
    Ok(Output::Report(Box::new(report)))
}
