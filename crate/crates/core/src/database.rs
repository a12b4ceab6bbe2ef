use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::query::{base_name, Atom, Query, VarKind, Variable};
use crate::rational::Rational;

/// A cell: a point value (rational or bitstring) or a closed interval.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Num(Arc<Rational>),
    Bits(Bitstring),
    Interval(Arc<Interval>),
}

impl Value {
    pub fn num(r: Rational) -> Self {
        Value::Num(Arc::new(r))
    }

    pub fn int(n: i64) -> Self {
        Value::num(Rational::from_int(n))
    }

    pub fn interval(i: Interval) -> Self {
        Value::Interval(Arc::new(i))
    }

    pub fn as_interval(&self) -> Option<&Interval> {
        match self {
            Value::Interval(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_bits(&self) -> Option<Bitstring> {
        match self {
            Value::Bits(b) => Some(*b),
            _ => None,
        }
    }

    pub fn kind(&self) -> VarKind {
        match self {
            Value::Interval(_) => VarKind::Interval,
            _ => VarKind::Point,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(r) => write!(f, "{r}"),
            Value::Bits(b) => write!(f, "{}", b.to_bits_string()),
            Value::Interval(i) => write!(f, "{i}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bits(b) => write!(f, "{b:?}"),
            _ => write!(f, "{self}"),
        }
    }
}

/// Relation stored row-major in one buffer. `origin`, when present, maps
/// each row to the row of the input relation it was derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub schema: Vec<Variable>,
    data: Vec<Value>,
    len: usize,
    origin: Option<Vec<u32>>,
}

impl Relation {
    pub fn new(name: impl Into<String>, schema: Vec<Variable>) -> Self {
        Relation { name: name.into(), schema, data: Vec::new(), len: 0, origin: None }
    }

    pub fn from_rows(name: impl Into<String>, schema: Vec<Variable>, rows: Vec<Vec<Value>>) -> Result<Self> {
        let mut r = Relation::new(name, schema);
        for row in rows {
            r.try_push(row)?;
        }
        Ok(r)
    }

    pub fn arity(&self) -> usize {
        self.schema.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn row(&self, i: usize) -> &[Value] {
        let a = self.arity();
        &self.data[i * a..(i + 1) * a]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Value]> + '_ {
        (0..self.len).map(move |i| self.row(i))
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|v| v.name == name)
    }

    /// Source row in the input relation this row came from.
    pub fn origin(&self, i: usize) -> usize {
        self.origin.as_ref().map_or(i, |o| o[i] as usize)
    }

    pub fn has_origin(&self) -> bool {
        self.origin.is_some()
    }

    pub fn reserve(&mut self, rows: usize) {
        self.data.reserve(rows * self.arity());
    }

    /// Appends without kind checks.
    pub fn push(&mut self, row: impl IntoIterator<Item = Value>) {
        let before = self.data.len();
        self.data.extend(row);
        debug_assert_eq!(self.data.len() - before, self.arity());
        self.len += 1;
        if let Some(o) = &mut self.origin {
            o.push(self.len as u32 - 1);
        }
    }

    pub fn push_with_origin(&mut self, row: impl IntoIterator<Item = Value>, origin: usize) {
        if self.origin.is_none() {
            self.origin = Some((0..self.len as u32).collect());
        }
        self.data.extend(row);
        self.len += 1;
        self.origin.as_mut().unwrap().push(origin as u32);
    }

    pub fn try_push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.arity() {
            return Err(Error::ArityMismatch { relation: self.name.clone(), expected: self.arity(), found: row.len() });
        }
        for (v, var) in row.iter().zip(&self.schema) {
            if v.kind() != var.kind {
                return Err(Error::KindMismatch {
                    relation: self.name.clone(),
                    column: var.name.clone(),
                    message: format!("value {v} does not fit a {} column", kind_word(var.kind)),
                });
            }
        }
        self.push(row);
        Ok(())
    }

    /// Projection onto `cols` keeping the first occurrence of each tuple.
    pub fn project(&self, name: impl Into<String>, cols: &[usize]) -> Relation {
        let schema = cols.iter().map(|&c| self.schema[c].clone()).collect();
        let mut out = Relation::new(name, schema);
        let mut seen: HashSet<Vec<Value>> = HashSet::with_capacity(self.len);
        for i in 0..self.len {
            let row = self.row(i);
            let key: Vec<Value> = cols.iter().map(|&c| row[c].clone()).collect();
            if seen.insert(key.clone()) {
                out.push_with_origin(key, self.origin(i));
            }
        }
        if out.is_empty() {
            out.origin = Some(Vec::new());
        }
        out
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Relation {
        self.name = name.into();
        self
    }

    /// Point columns whose values are all bitstrings.
    pub fn bit_columns(&self) -> Vec<bool> {
        (0..self.arity()).map(|c| self.len > 0 && self.rows().all(|r| matches!(r[c], Value::Bits(_)))).collect()
    }
}

fn kind_word(k: VarKind) -> &'static str {
    match k {
        VarKind::Point => "point",
        VarKind::Interval => "interval",
    }
}

/// Atom bound to a relation: variable `j` of the atom reads column `cols[j]`.
#[derive(Clone, Copy, Debug)]
pub struct Binding<'a> {
    pub relation: &'a Relation,
    pub cols: &'a [usize],
}

/// Relations keyed by name. Lookups by atom label fall back to the base name
/// before `#`, so one stored relation can serve every copy of a self-join.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Database {
    pub relations: BTreeMap<String, Relation>,
}

impl Database {
    pub fn new() -> Self {
        Database::default()
    }

    pub fn insert(&mut self, r: Relation) {
        self.relations.insert(r.name.clone(), r);
    }

    pub fn get(&self, label: &str) -> Option<&Relation> {
        self.relations.get(label).or_else(|| self.relations.get(base_name(label)))
    }

    pub fn total_rows(&self) -> usize {
        self.relations.values().map(Relation::len).sum()
    }

    /// Column of the relation behind `atom` for each atom variable. Equal
    /// arity binds by position; otherwise every variable must name a column.
    pub fn columns_for(&self, atom: &Atom) -> Result<Vec<usize>> {
        let rel = self.get(&atom.label).ok_or_else(|| Error::MissingRelation(atom.label.clone()))?;
        let cols: Vec<usize> = if rel.arity() == atom.vars.len() {
            (0..rel.arity()).collect()
        } else {
            atom.vars
                .iter()
                .map(|v| {
                    rel.column(&v.name).ok_or(Error::ArityMismatch {
                        relation: rel.name.clone(),
                        expected: atom.vars.len(),
                        found: rel.arity(),
                    })
                })
                .collect::<Result<_>>()?
        };
        for (v, &c) in atom.vars.iter().zip(&cols) {
            if rel.schema[c].kind != v.kind {
                return Err(Error::KindMismatch {
                    relation: rel.name.clone(),
                    column: rel.schema[c].name.clone(),
                    message: format!("atom `{}` uses it as a {} variable", atom.label, kind_word(v.kind)),
                });
            }
        }
        Ok(cols)
    }

    /// Checks every atom binds, returning column maps in atom order.
    pub fn bind_all(&self, q: &Query) -> Result<Vec<Vec<usize>>> {
        q.atoms.iter().map(|a| self.columns_for(a)).collect()
    }

    /// Every interval in the relations behind `q`, in atom order.
    pub fn intervals_of<'a>(&'a self, q: &'a Query, var: &'a str) -> Result<Vec<&'a Interval>> {
        let mut out = Vec::new();
        for a in &q.atoms {
            if let Some(j) = a.position(var) {
                let cols = self.columns_for(a)?;
                let rel = self.get(&a.label).unwrap();
                out.extend(rel.rows().filter_map(|r| r[cols[j]].as_interval()));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binds_positionally_or_by_name() {
        let rel = Relation::from_rows(
            "R",
            vec![Variable::interval("A"), Variable::point("B")],
            vec![vec![Value::interval(Interval::from_ints(1, 2)), Value::int(3)]],
        )
        .unwrap();
        let mut db = Database::new();
        db.insert(rel);
        let same = Atom::new("R#2", vec![Variable::interval("X"), Variable::point("Y")]);
        assert_eq!(db.columns_for(&same).unwrap(), vec![0, 1]);
        let proj = Atom::new("R", vec![Variable::point("B")]);
        assert_eq!(db.columns_for(&proj).unwrap(), vec![1]);
        let wrong = Atom::new("R", vec![Variable::point("X"), Variable::point("Y")]);
        assert!(matches!(db.columns_for(&wrong), Err(Error::KindMismatch { .. })));
        assert!(matches!(db.columns_for(&Atom::new("S", vec![])), Err(Error::MissingRelation(_))));
    }

    #[test]
    fn rejects_wrong_kinds() {
        let mut r = Relation::new("R", vec![Variable::interval("A")]);
        assert!(r.try_push(vec![Value::int(1)]).is_err());
        assert!(r.try_push(vec![]).is_err());
    }

    #[test]
    fn projection_dedupes_and_tracks_origin() {
        let mut r = Relation::new("R", vec![Variable::point("A"), Variable::point("B")]);
        for (a, b) in [(1, 1), (1, 2), (2, 2)] {
            r.push([Value::int(a), Value::int(b)]);
        }
        let p = r.project("P", &[0]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.origin(1), 2);
    }
}
