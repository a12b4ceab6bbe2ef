use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Point,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

impl Variable {
    pub fn point(name: impl Into<String>) -> Self {
        Variable { name: name.into(), kind: VarKind::Point }
    }

    pub fn interval(name: impl Into<String>) -> Self {
        Variable { name: name.into(), kind: VarKind::Interval }
    }

    pub fn is_interval(&self) -> bool {
        self.kind == VarKind::Interval
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Point => f.write_str(&self.name),
            VarKind::Interval => write!(f, "[{}]", self.name),
        }
    }
}

/// `label(vars…)`. Labels are unique within a query; self-joins carry
/// `R#1`, `R#2`, … and share the base name `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub label: String,
    pub vars: Vec<Variable>,
}

impl Atom {
    pub fn new(label: impl Into<String>, vars: Vec<Variable>) -> Self {
        Atom { label: label.into(), vars }
    }

    pub fn base_name(&self) -> &str {
        base_name(&self.label)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn has(&self, name: &str) -> bool {
        self.position(name).is_some()
    }
}

pub fn base_name(label: &str) -> &str {
    label.split_once('#').map_or(label, |(b, _)| b)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.label)?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Boolean conjunctive query. Atoms with no variables are allowed; they
/// only ask for a non-empty relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub atoms: Vec<Atom>,
}

impl Query {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyInput("query has no atoms".into()));
        }
        let mut labels = BTreeSet::new();
        let mut kinds: BTreeMap<&str, VarKind> = BTreeMap::new();
        for a in &atoms {
            if !labels.insert(a.label.as_str()) {
                return Err(Error::InvalidQuery(format!("duplicate atom label `{}`", a.label)));
            }
            let mut seen = BTreeSet::new();
            for v in &a.vars {
                if !seen.insert(v.name.as_str()) {
                    return Err(Error::InvalidQuery(format!("variable `{}` repeated in atom `{}`", v.name, a.label)));
                }
                if let Some(k) = kinds.insert(&v.name, v.kind) {
                    if k != v.kind {
                        return Err(Error::InvalidQuery(format!("variable `{}` used as point and interval", v.name)));
                    }
                }
            }
        }
        Ok(Query { atoms })
    }

    /// Variables sorted by name.
    pub fn variables(&self) -> Vec<Variable> {
        let set: BTreeSet<&Variable> = self.atoms.iter().flat_map(|a| &a.vars).collect();
        set.into_iter().cloned().collect()
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.atoms.iter().flat_map(|a| &a.vars).find(|v| v.name == name)
    }

    pub fn atoms_with(&self, name: &str) -> Vec<usize> {
        (0..self.atoms.len()).filter(|&i| self.atoms[i].has(name)).collect()
    }

    pub fn degree(&self, name: &str) -> usize {
        self.atoms.iter().filter(|a| a.has(name)).count()
    }

    /// Interval variables occurring in at least two atoms, by name.
    pub fn interval_join_vars(&self) -> Vec<String> {
        self.variables().into_iter().filter(|v| v.is_interval() && self.degree(&v.name) >= 2).map(|v| v.name).collect()
    }

    /// No interval variable is shared between atoms.
    pub fn is_equi_join(&self) -> bool {
        self.interval_join_vars().is_empty()
    }

    pub fn is_interval_join(&self) -> bool {
        self.atoms.iter().flat_map(|a| &a.vars).all(Variable::is_interval)
    }

    pub fn is_self_join_free(&self) -> bool {
        let bases: BTreeSet<&str> = self.atoms.iter().map(Atom::base_name).collect();
        bases.len() == self.atoms.len()
    }

    pub fn atom(&self, label: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.label == label)
    }

    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph::new(
            self.atoms.iter().map(|a| (a.label.clone(), a.vars.iter().map(|v| v.name.clone()).collect())).collect(),
        )
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Query {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_query(s)
    }
}

/// Parses `R([A],[B]), S(B,[C])`. A relation name used more than once
/// yields labels `R#1`, `R#2`, … in order of appearance.
pub fn parse_query(text: &str) -> Result<Query> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let mut raw: Vec<(String, Vec<Variable>)> = Vec::new();
    p.skip_ws();
    if p.at_end() {
        return Err(Error::EmptyInput("query text is empty".into()));
    }
    loop {
        let name = p.name()?;
        p.expect('(')?;
        let mut vars = vec![p.var()?];
        loop {
            p.skip_ws();
            match p.peek() {
                Some(',') => {
                    p.pos += 1;
                    vars.push(p.var()?);
                }
                Some(')') => {
                    p.pos += 1;
                    break;
                }
                _ => return Err(p.error("expected `,` or `)`")),
            }
        }
        raw.push((name, vars));
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(',') => p.pos += 1,
            Some(_) => return Err(p.error("expected `,` between atoms")),
        }
    }
    let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
    for (n, _) in &raw {
        *uses.entry(n.as_str()).or_default() += 1;
    }
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut atoms = Vec::with_capacity(raw.len());
    for (n, vars) in &raw {
        let label = if uses[n.as_str()] > 1 {
            let c = seen.entry(n.clone()).or_default();
            *c += 1;
            format!("{n}#{c}")
        } else {
            n.clone()
        };
        atoms.push(Atom::new(label, vars.clone()));
    }
    Query::new(atoms)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> Error {
        let before: String = self.chars[..self.pos.min(self.chars.len())].iter().collect();
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Syntax { line, column, message: msg.to_string() }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return Err(self.error("expected a name"));
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn var(&mut self) -> Result<Variable> {
        self.skip_ws();
        if self.peek() == Some('[') {
            self.pos += 1;
            let n = self.name()?;
            self.expect(']')?;
            Ok(Variable::interval(n))
        } else {
            Ok(Variable::point(self.name()?))
        }
    }
}
