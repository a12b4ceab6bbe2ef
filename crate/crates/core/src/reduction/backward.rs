use crate::bitstring::Bitstring;
use crate::database::{Database, Relation, Value};
use crate::error::{Error, Result};
use crate::interval::{close_all, RawInterval};
use crate::query::Query;
use crate::rational::Rational;

use super::{fresh_name, ReducedQuery};

/// `[0.u, 0.u + 2^-|u|)` as a half-open interval of `[0, 1)`.
pub fn dyadic_interval(u: Bitstring) -> RawInterval {
    let n = u.len();
    let step = Rational::pow2_neg(n);
    let l = &Rational::from_int(u.bits() as i64) * &step;
    let r = &l + &step;
    RawInterval { l, r, left_open: false, right_open: true }
}

/// Turns a database over one member of the reduction of `q` back into a
/// database over `q`: each group `X_1 … X_i` of a tuple becomes the dyadic
/// interval of `X_1 ∘ … ∘ X_i`. All bitstrings must have one length.
/// Member and result agree on truth and relation sizes.
pub fn backward_transform(q: &Query, member: &ReducedQuery, db: &Database) -> Result<Database> {
    if !q.is_self_join_free() {
        return Err(Error::SelfJoinUnsupported);
    }
    let mut width: Option<usize> = None;
    // per output relation: rows of cells, interval cells pending closure
    enum Cell {
        Ready(Value),
        Pending(usize),
    }
    let mut raws: Vec<RawInterval> = Vec::new();
    let mut staged: Vec<(Relation, Vec<Vec<Cell>>, Vec<usize>)> = Vec::new();
    for (ai, atom) in q.atoms.iter().enumerate() {
        let red = &member.query.atoms[ai];
        let cols = db.columns_for(red)?;
        let rel = db.get(&red.label).unwrap();
        let key = &member.keys[ai];
        let mut rows = Vec::with_capacity(rel.len());
        let mut origins = Vec::with_capacity(rel.len());
        for (ri, row) in rel.rows().enumerate() {
            let cell = |name: &str| -> Result<&Value> {
                let p = red.position(name).ok_or_else(|| Error::NotIntervalVariable(name.to_string()))?;
                Ok(&row[cols[p]])
            };
            let mut out = Vec::with_capacity(atom.vars.len());
            for v in &atom.vars {
                match key.positions.get(&v.name) {
                    Some(&i) => {
                        let mut u = Bitstring::EMPTY;
                        for j in 1..=i {
                            let b = cell(&fresh_name(&v.name, j))?.as_bits().ok_or_else(|| Error::KindMismatch {
                                relation: red.label.clone(),
                                column: fresh_name(&v.name, j),
                                message: "expected a bitstring".into(),
                            })?;
                            match width {
                                None => width = Some(b.len()),
                                Some(w) if w != b.len() => return Err(Error::MixedBitstringLengths(w, b.len())),
                                _ => {}
                            }
                            u = u.concat(b);
                        }
                        raws.push(dyadic_interval(u));
                        out.push(Cell::Pending(raws.len() - 1));
                    }
                    None => out.push(Cell::Ready(cell(&v.name)?.clone())),
                }
            }
            rows.push(out);
            origins.push(rel.origin(ri));
        }
        staged.push((Relation::new(atom.label.clone(), atom.vars.clone()), rows, origins));
    }
    let closed = close_all(&raws);
    let mut out = Database::new();
    for (mut rel, rows, origins) in staged {
        for (row, o) in rows.into_iter().zip(origins) {
            let cells: Vec<Value> = row
                .into_iter()
                .map(|c| match c {
                    Cell::Ready(v) => v,
                    Cell::Pending(i) => Value::interval(closed[i].clone()),
                })
                .collect();
            rel.push_with_origin(cells, o);
        }
        out.insert(rel);
    }
    Ok(out)
}
