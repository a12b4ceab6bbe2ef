//! Boolean conjunctive queries with interval and point variables.
//!
//! Intersection joins are rewritten into disjunctions of equality joins over
//! segment-tree bitstrings, which are then evaluated with classic join
//! algorithms. See the README for an overview of the modules.

pub mod bitstring;
pub mod database;
pub mod error;
pub mod hypergraph;
pub mod interval;
pub mod query;
pub mod rational;
pub mod segtree;

pub use bitstring::Bitstring;
pub use database::{Database, Relation, Value};
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use interval::Interval;
pub use query::{parse_query, Atom, Query, VarKind, Variable};
pub use rational::Rational;
pub mod eval;
pub mod gen;
pub mod predicate;
pub mod reduction;
pub mod widths;

pub use eval::{eval_ij, EvalOptions, EvalReport, Strategy};
