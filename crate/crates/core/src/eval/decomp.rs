use std::collections::BTreeSet;

use super::wcoj::GenericJoin;
use super::yannakakis::semijoin_tree;
use super::View;
use crate::database::{Database, Relation};
use crate::error::{Error, Result};
use crate::query::{Query, Variable};
use crate::widths::TreeDecomposition;

/// Materializes each bag as the join of the atoms' projections onto it,
/// then runs semi-joins along the decomposition tree.
pub fn decomp_eval(q: &Query, db: &Database, td: &TreeDecomposition) -> Result<(bool, Option<Vec<usize>>)> {
    super::require_equi_join(q)?;
    if !td.is_valid_for(&q.hypergraph()) {
        return Err(Error::InvalidDecomposition("bags do not cover the query".into()));
    }
    let views = View::bind(q, db)?;
    let mut bag_rels = Vec::with_capacity(td.bags.len());
    let mut bag_atoms: Vec<Vec<usize>> = Vec::with_capacity(td.bags.len());
    let mut bag_sources: Vec<Vec<Vec<usize>>> = Vec::with_capacity(td.bags.len());
    for (bi, bag) in td.bags.iter().enumerate() {
        let members: Vec<usize> = (0..views.len()).filter(|&a| views[a].vars.iter().any(|v| bag.contains(v))).collect();
        let inside: Vec<usize> =
            members.iter().copied().filter(|&a| views[a].vars.iter().all(|v| bag.contains(v))).collect();
        let sub: Vec<View> = members.iter().map(|&a| views[a].restrict(bag)).collect();
        let order: Vec<String> = bag.iter().cloned().collect();
        let mut rel = Relation::new(format!("bag{bi}"), order.iter().map(Variable::point).collect());
        let mut sources = Vec::new();
        GenericJoin::with_order(&sub, order).run(&mut |vals, rows| {
            rel.push(vals.iter().map(|v| (*v).clone()).collect::<Vec<_>>());
            sources.push(inside.iter().map(|a| rows[members.iter().position(|m| m == a).unwrap()]).collect());
            true
        });
        bag_rels.push(rel);
        bag_atoms.push(inside);
        bag_sources.push(sources);
    }
    // atoms without variables only ask for a row
    let empty_atoms: Vec<usize> = (0..views.len()).filter(|&a| views[a].vars.is_empty()).collect();
    if empty_atoms.iter().any(|&a| views[a].len() == 0) {
        return Ok((false, None));
    }
    let bag_views: Vec<View> = bag_rels
        .iter()
        .zip(&td.bags)
        .map(|(r, b)| View { vars: b.iter().cloned().collect(), rel: r, cols: (0..b.len()).collect() })
        .collect();
    let (ok, pick) = semijoin_tree(&bag_views, &td.parent, td.root());
    let Some(pick) = pick.filter(|_| ok) else { return Ok((false, None)) };
    let mut rows = vec![usize::MAX; views.len()];
    for a in empty_atoms {
        rows[a] = 0;
    }
    for (bi, atoms) in bag_atoms.iter().enumerate() {
        for (k, &a) in atoms.iter().enumerate() {
            if rows[a] == usize::MAX {
                rows[a] = bag_sources[bi][pick[bi]][k];
            }
        }
    }
    debug_assert!(rows.iter().all(|&r| r != usize::MAX));
    Ok((true, Some(rows)))
}

impl<'a> View<'a> {
    fn restrict(&self, keep: &BTreeSet<String>) -> View<'a> {
        let idx: Vec<usize> = (0..self.vars.len()).filter(|&i| keep.contains(&self.vars[i])).collect();
        View {
            vars: idx.iter().map(|&i| self.vars[i].clone()).collect(),
            rel: self.rel,
            cols: idx.iter().map(|&i| self.cols[i]).collect(),
        }
    }
}
