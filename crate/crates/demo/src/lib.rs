//! Browser bindings: a segment tree over typed intervals, query analysis and
//! a preview of the reduction to equality joins.
//!
//! Each binding returns a JSON string; the `*_json` functions hold the logic
//! and run natively in tests.

use ijoin::hypergraph::{classify, is_alpha_acyclic, isomorphism_classes};
use ijoin::interval::{close_all, RawInterval};
use ijoin::reduction::{predict_counts, reduce_query, simplify, simplify_hypergraphs, tau};
use ijoin::segtree::SegmentTree;
use ijoin::widths::fhtw;
use ijoin::{parse_query, Bitstring, Interval, Rational};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;
use wasm_bindgen::JsValue;

/// Deepest tree drawn; 64 leaves fit 31 distinct endpoints.
pub const MAX_HEIGHT: usize = 6;
/// Members enumerated before analysis stops counting and only predicts.
pub const MEMBER_LIMIT: usize = 5_000;
const VERTEX_CAP: usize = 10;

fn bits(b: Bitstring) -> String {
    b.to_bits_string()
}

/// Every bracketed interval in `text`, e.g. `[1,4] (2,6] [5,8)`. Open ends
/// are closed with one shared epsilon.
pub fn parse_intervals(text: &str) -> Result<Vec<Interval>, String> {
    let mut raws = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' if start.is_none() => start = Some(i),
            ']' | ')' => {
                let s = start.take().ok_or_else(|| format!("unmatched `{c}` at {i}"))?;
                raws.push(text[s..=i].parse::<RawInterval>().map_err(|e| e.to_string())?);
            }
            _ => {}
        }
    }
    if start.is_some() {
        return Err("unclosed interval".into());
    }
    if raws.is_empty() {
        return Err("no intervals".into());
    }
    Ok(close_all(&raws))
}

#[derive(Serialize)]
pub struct TreeNode {
    pub node: String,
    pub depth: usize,
    pub index: u64,
    pub segment: String,
    /// Positions in `intervals` of the canonical subset.
    pub subset: Vec<usize>,
}

#[derive(Serialize)]
pub struct TreeInterval {
    pub interval: String,
    pub partition: Vec<String>,
    pub leaf: String,
}

#[derive(Serialize)]
pub struct Stab {
    pub point: String,
    pub leaf: String,
    pub path: Vec<String>,
    pub hits: Vec<usize>,
}

#[derive(Serialize)]
pub struct TreeView {
    pub height: usize,
    pub nodes: Vec<TreeNode>,
    pub intervals: Vec<TreeInterval>,
    pub stab: Option<Stab>,
}

/// The whole tree with canonical partitions, and a stabbing query when
/// `point` is not blank.
pub fn segment_tree_json(intervals: &str, point: &str) -> Result<TreeView, String> {
    let xs = parse_intervals(intervals)?;
    let tree = SegmentTree::build(&xs).map_err(|e| e.to_string())?;
    let h = tree.height();
    if h > MAX_HEIGHT {
        return Err(format!("tree height {h} exceeds {MAX_HEIGHT}; use fewer distinct endpoints"));
    }
    let stored = tree.intervals();
    let pos = |x: &Interval| stored.iter().position(|y| y == x).expect("stored interval");
    let mut nodes = Vec::new();
    let mut level = vec![Bitstring::EMPTY];
    for depth in 0..=h {
        for &v in &level {
            nodes.push(TreeNode {
                node: bits(v),
                depth,
                index: v.index(),
                segment: tree.grid().segment(v).to_string(),
                subset: tree.canonical_subset(v).into_iter().map(pos).collect(),
            });
        }
        level = level.iter().flat_map(|&v| [v.child(false), v.child(true)]).collect();
    }
    let intervals = stored
        .iter()
        .map(|x| {
            let cp = tree.canonical_partition(x).map_err(|e| e.to_string())?;
            Ok(TreeInterval {
                interval: x.to_string(),
                partition: cp.nodes.into_iter().map(bits).collect(),
                leaf: bits(tree.leaf_of(x)),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let stab = match point.trim() {
        "" => None,
        p => {
            let p: Rational = p.parse().map_err(|e: ijoin::Error| e.to_string())?;
            let leaf = tree.leaf(&p);
            let mut hits: Vec<usize> = tree.stab_query(&p).into_iter().map(pos).collect();
            hits.sort_unstable();
            Some(Stab { point: p.to_string(), leaf: bits(leaf), path: leaf.ancestors().map(bits).collect(), hits })
        }
    };
    Ok(TreeView { height: h, nodes, intervals, stab })
}

#[derive(Serialize)]
pub struct Analysis {
    pub query: String,
    pub alpha: bool,
    pub gamma: Option<bool>,
    pub iota: bool,
    pub berge: bool,
    pub berge_cycle: Option<String>,
    pub tau: String,
    pub variants: Vec<(String, String)>,
    pub simplified: Option<usize>,
    /// Width of one member per isomorphism class.
    pub class_widths: Option<Vec<String>>,
    pub ijw_fhtw_upper: Option<String>,
}

pub fn analyze_json(query: &str) -> Result<Analysis, String> {
    let q = parse_query(query).map_err(|e| e.to_string())?;
    let h = q.hypergraph();
    let c = classify(&h);
    let counts = predict_counts(&h);
    let (mut simplified, mut class_widths, mut upper) = (None, None, None);
    if counts.queries <= MEMBER_LIMIT as u128 {
        let simple = simplify_hypergraphs(&tau(&h, MEMBER_LIMIT).map_err(|e| e.to_string())?);
        simplified = Some(simple.len());
        if let Ok(classes) = isomorphism_classes(&simple) {
            let ws: Option<Vec<Rational>> =
                classes.iter().map(|g| fhtw(&simple[g[0]], VERTEX_CAP).ok().map(|w| w.0)).collect();
            if let Some(ws) = ws {
                upper = ws.iter().max().map(|w| Rational::max(w, &Rational::one()).to_string());
                class_widths = Some(ws.iter().map(Rational::to_string).collect());
            }
        }
    }
    Ok(Analysis {
        query: q.to_string(),
        alpha: c.alpha,
        gamma: c.gamma,
        iota: c.iota,
        berge: c.berge,
        berge_cycle: c.berge_cycle.map(|b| b.to_string()),
        tau: counts.queries.to_string(),
        variants: counts.variants_per_edge.into_iter().map(|(e, n)| (e, n.to_string())).collect(),
        simplified,
        class_widths,
        ijw_fhtw_upper: upper,
    })
}

#[derive(Serialize)]
pub struct Group {
    pub shape: String,
    pub variants: usize,
    pub alpha: bool,
    pub fhtw: Option<String>,
    pub members: Vec<String>,
}

#[derive(Serialize)]
pub struct Preview {
    pub members: usize,
    pub groups: Vec<Group>,
}

/// Members of the reduction grouped by simplified shape, listing at most
/// `shown` members per group.
pub fn reduce_json(query: &str, shown: usize) -> Result<Preview, String> {
    let q = parse_query(query).map_err(|e| e.to_string())?;
    let members = reduce_query(&q, MEMBER_LIMIT).map_err(|e| e.to_string())?;
    let groups = simplify(&members)
        .into_iter()
        .map(|s| {
            let h = s.shape.hypergraph();
            Group {
                shape: s.shape.to_string(),
                variants: s.variants.len(),
                alpha: is_alpha_acyclic(&h),
                fhtw: fhtw(&h, VERTEX_CAP).ok().map(|w| w.0.to_string()),
                members: s.variants.iter().take(shown).map(|v| v.to_string()).collect(),
            }
        })
        .collect();
    Ok(Preview { members: members.len(), groups })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn segment_tree(intervals: &str, point: &str) -> Result<String, JsValue> {
    to_js(segment_tree_json(intervals, point))
}

#[wasm_bindgen]
pub fn analyze(query: &str) -> Result<String, JsValue> {
    to_js(analyze_json(query))
}

#[wasm_bindgen]
pub fn reduce(query: &str, shown: usize) -> Result<String, JsValue> {
    to_js(reduce_json(query, shown))
}
