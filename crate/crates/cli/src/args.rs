use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ijoin::eval::DEFAULT_MAX_ORACLE_CELLS;
use ijoin::widths::DEFAULT_VERTEX_CAP;
use ijoin::Strategy;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ijoin", version, about = "Analyze, reduce and evaluate Boolean queries with intersection joins")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Acyclicity classes, a Berge cycle witness and reduction counts
    Analyze(AnalyzeArgs),
    /// Rewrite into equality joins and write the transformed database
    Reduce(ReduceArgs),
    /// Evaluate through the reduction
    Eval(EvalArgs),
    /// Evaluate by brute force
    Oracle(OracleArgs),
    /// Fractional hypertree widths of the reduced queries
    Widths(WidthsArgs),
    /// Time the phases of `eval` over a sweep of sizes and seeds
    Bench(BenchArgs),
    /// Write a seeded synthetic database for a query
    Gen(GenArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Reduce(_) => "reduce",
            Command::Eval(_) => "eval",
            Command::Oracle(_) => "oracle",
            Command::Widths(_) => "widths",
            Command::Bench(_) => "bench",
            Command::Gen(_) => "gen",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
#[group(required = true, multiple = false)]
pub struct QueryArg {
    /// Query text, e.g. "R([A],[B]), S([B],[C]), T([A],[C])"
    #[arg(short, long)]
    pub query: Option<String>,
    /// File holding the query text
    #[arg(long)]
    pub query_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub query: QueryArg,
    /// Enumerate the reduced hypergraphs only up to this many members
    #[arg(long, default_value_t = 100_000)]
    pub member_limit: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WidthsArgs {
    #[command(flatten)]
    pub query: QueryArg,
    /// Largest vertex count for the exact width computation
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: usize,
    #[arg(long, default_value_t = 100_000)]
    pub member_limit: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub query: QueryArg,
    /// Database directory or `.json` file
    #[arg(long)]
    pub db: PathBuf,
    /// Output directory for `members.txt` and one CSV per relation
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub member_limit: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub query: QueryArg,
    #[arg(long)]
    pub db: PathBuf,
    /// auto, yannakakis, decomp or oracle
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
    /// Evaluate the members of the disjunction on a thread pool
    #[arg(long)]
    pub parallel: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ORACLE_CELLS)]
    pub max_oracle_cells: u128,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub member_limit: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub query: QueryArg,
    #[arg(long)]
    pub db: PathBuf,
    /// Refuse inputs whose candidate combinations exceed this
    #[arg(long, default_value_t = DEFAULT_MAX_ORACLE_CELLS)]
    pub max_oracle_cells: u128,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DataArgs {
    /// Interval left ends are drawn from 0..domain [default: 4 * rows]
    #[arg(long)]
    pub domain: Option<u64>,
    /// Interval widths are drawn from 0..=max-width
    #[arg(long, default_value_t = 8)]
    pub max_width: u64,
    /// Point values are drawn from 0..point-domain [default: rows]
    #[arg(long)]
    pub point_domain: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub query: QueryArg,
    /// Rows per relation
    #[arg(long, default_value_t = 100)]
    pub rows: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub data: DataArgs,
    /// Output directory, or a `.json` file
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    pub query: QueryArg,
    /// Rows per relation, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1024,2048,4096")]
    pub sizes: Vec<usize>,
    /// One run per seed and size
    #[arg(long = "seed", value_delimiter = ',', default_value = "1")]
    pub seeds: Vec<u64>,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
    #[arg(long)]
    pub parallel: bool,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: usize,
    /// Write the CSV here and print a report instead of the CSV
    #[arg(long)]
    pub out: Option<PathBuf>,
}
