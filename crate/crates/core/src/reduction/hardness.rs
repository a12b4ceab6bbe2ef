use crate::database::{Database, Relation, Value};
use crate::error::{Error, Result};
use crate::hypergraph::find_berge_cycle_between;
use crate::interval::Interval;
use crate::query::{Atom, Query, Variable};
use crate::rational::Rational;

/// `S1(X1,X2), S2(X2,X3), …, Sk(Xk,X1)`.
pub fn cycle_query(k: usize) -> Query {
    assert!(k >= 2);
    let x = |i: usize| Variable::point(format!("X{}", (i - 1) % k + 1));
    Query::new((1..=k).map(|i| Atom::new(format!("S{i}"), vec![x(i), x(i + 1)])).collect()).expect("valid cycle query")
}

/// Encodes a database for [`cycle_query`]`(k)` into one for `target`, an
/// interval join whose hypergraph has a Berge cycle of length `k`. Cycle
/// vertices play `X1 … Xk`; each cycle edge takes the binary relation over
/// its two cycle vertices, a tuple `(a, b)` becoming `[a,a]` and `[b,b]`
/// there and `[-M, M]` in every other column. Other atoms get a single
/// all-`[-M, M]` tuple.
pub fn embed_cycle_query(target: &Query, k: usize, cycle_db: &Database) -> Result<Database> {
    let h = target.hypergraph();
    let cycle = find_berge_cycle_between(&h, k, k).ok_or(Error::NoBergeCycle(k))?;
    let src = cycle_query(k);
    let mut big = Rational::one();
    for a in &src.atoms {
        let rel = cycle_db.get(&a.label).ok_or_else(|| Error::MissingRelation(a.label.clone()))?;
        for row in rel.rows() {
            for v in row {
                match v {
                    Value::Num(r) => big = Rational::max(&big, &(r.abs() + Rational::one())),
                    other => return Err(Error::BadValue(other.to_string())),
                }
            }
        }
    }
    let line = Value::interval(Interval { l: -big.clone(), r: big });
    let mut out = Database::new();
    for atom in &target.atoms {
        let mut rel = Relation::new(atom.label.clone(), atom.vars.clone());
        match cycle.edges.iter().position(|e| *e == atom.label) {
            Some(i) => {
                // edge e(i+1) in one-based terms holds v(i) and v(i+1)
                let first = &cycle.vertices[(i + k - 1) % k];
                let second = &cycle.vertices[i];
                let s = cycle_db.get(&src.atoms[(i + k - 1) % k].label).unwrap();
                for row in s.rows() {
                    let (Value::Num(a), Value::Num(b)) = (&row[0], &row[1]) else { unreachable!() };
                    let cells: Vec<Value> = atom
                        .vars
                        .iter()
                        .map(|v| {
                            if v.name == *first {
                                Value::interval(Interval::point((**a).clone()))
                            } else if v.name == *second {
                                Value::interval(Interval::point((**b).clone()))
                            } else {
                                line.clone()
                            }
                        })
                        .collect();
                    rel.push(cells);
                }
            }
            None => rel.push(vec![line.clone(); atom.vars.len()]),
        }
        out.insert(rel);
    }
    Ok(out)
}
