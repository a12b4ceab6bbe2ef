use std::collections::HashSet;

use super::View;
use crate::database::{Database, Value};
use crate::error::{Error, Result};
use crate::hypergraph::gyo;
use crate::query::Query;

/// Semi-join reduction along the join tree found by GYO. The query must be
/// an equality join and alpha-acyclic.
pub fn yannakakis_bool(q: &Query, db: &Database) -> Result<(bool, Option<Vec<usize>>)> {
    super::require_equi_join(q)?;
    let tree = gyo(&q.hypergraph()).join_tree.ok_or(Error::NotAcyclic)?;
    let views = View::bind(q, db)?;
    Ok(semijoin_tree(&views, &tree.parent, tree.root))
}

/// Bottom-up semi-joins over a rooted tree of views, then a top-down pass
/// picking one row per view. `None` when the root empties.
pub(crate) fn semijoin_tree(views: &[View], parent: &[Option<usize>], root: usize) -> (bool, Option<Vec<usize>>) {
    let n = views.len();
    let mut children = vec![Vec::new(); n];
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(c);
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![(root, false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            order.push(v);
        } else {
            stack.push((v, true));
            stack.extend(children[v].iter().map(|&c| (c, false)));
        }
    }
    let mut alive: Vec<Vec<usize>> = views.iter().map(|v| (0..v.len()).collect()).collect();
    let shared: Vec<Option<(Vec<usize>, Vec<usize>)>> =
        (0..n).map(|c| parent[c].map(|p| views[c].shared_columns(&views[p]))).collect();
    for &c in &order {
        let Some(p) = parent[c] else { continue };
        let (cc, pc) = shared[c].as_ref().unwrap();
        let keys: HashSet<Vec<&Value>> = alive[c].iter().map(|&r| views[c].key(r, cc)).collect();
        let kept: Vec<usize> = alive[p].iter().copied().filter(|&r| keys.contains(&views[p].key(r, pc))).collect();
        alive[p] = kept;
        if alive[p].is_empty() {
            return (false, None);
        }
    }
    if alive[root].is_empty() || alive.iter().any(Vec::is_empty) {
        return (false, None);
    }
    let mut pick = vec![usize::MAX; n];
    pick[root] = alive[root][0];
    for &v in order.iter().rev() {
        if v == root {
            continue;
        }
        let p = parent[v].unwrap();
        let (cc, pc) = shared[v].as_ref().unwrap();
        let want = views[p].key(pick[p], pc);
        pick[v] = *alive[v].iter().find(|&&r| views[v].key(r, cc) == want).expect("semi-join reduced");
    }
    (true, Some(pick))
}
