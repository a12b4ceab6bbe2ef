use ijoin_demo::{analyze_json, parse_intervals, reduce_json, segment_tree_json, MAX_HEIGHT};

#[test]
fn intervals_parse_with_open_ends() {
    let xs = parse_intervals("[1,4] (2, 6]  [5,8)").unwrap();
    assert_eq!(xs.len(), 3);
    assert_eq!(xs[0].to_string(), "[1,4]");
    assert!(xs[2].r < "8".parse().unwrap());
    assert!(parse_intervals("[1,4").is_err());
    assert!(parse_intervals("nothing").is_err());
}

#[test]
fn tree_view_is_consistent() {
    let v = segment_tree_json("[1,4] [2,6] [5,8] [3,3]", "3").unwrap();
    assert_eq!(v.nodes.len(), (1 << (v.height + 1)) - 1);
    // each interval appears in the subset of exactly its partition nodes
    for (i, x) in v.intervals.iter().enumerate() {
        let holders: Vec<&str> = v.nodes.iter().filter(|n| n.subset.contains(&i)).map(|n| n.node.as_str()).collect();
        let mut want: Vec<&str> = x.partition.iter().map(String::as_str).collect();
        want.sort();
        let mut got = holders.clone();
        got.sort();
        assert_eq!(got, want, "{}", x.interval);
    }
    let stab = v.stab.unwrap();
    assert_eq!(stab.path.len(), v.height + 1);
    assert_eq!(stab.path.last().unwrap(), &stab.leaf);
    let hit: Vec<&str> = stab.hits.iter().map(|&i| v.intervals[i].interval.as_str()).collect();
    assert_eq!(hit, ["[1,4]", "[2,6]", "[3,3]"]);
}

#[test]
fn tall_trees_are_refused() {
    let many: String = (0..40).map(|i| format!("[{},{}] ", 2 * i, 2 * i + 1)).collect();
    let err = segment_tree_json(&many, "").err().unwrap();
    assert!(err.contains(&MAX_HEIGHT.to_string()));
}

#[test]
fn analysis_of_known_queries() {
    let tri = analyze_json("R([A],[B]), S([B],[C]), T([A],[C])").unwrap();
    assert!(!tri.alpha && !tri.iota);
    assert_eq!(tri.tau, "8");
    assert_eq!(tri.ijw_fhtw_upper.as_deref(), Some("1.5"));
    assert!(tri.berge_cycle.is_some());

    let star = analyze_json("R([A],[B]), S([A],[C]), T([A],[D])").unwrap();
    assert!(star.iota && star.berge_cycle.is_none());
    assert_eq!(star.ijw_fhtw_upper.as_deref(), Some("1"));

    assert!(analyze_json("R([A],").is_err());
}

#[test]
fn reduction_preview_groups_members() {
    let p = reduce_json("R([A],[B],[C]), S([B],[C]), T([A],[B])", 2).unwrap();
    assert_eq!(p.members, 24);
    assert_eq!(p.groups.len(), 3);
    assert_eq!(p.groups.iter().map(|g| g.variants).sum::<usize>(), 24);
    assert!(p.groups.iter().all(|g| g.members.len() <= 2));
    let mut ws: Vec<&str> = p.groups.iter().map(|g| g.fhtw.as_deref().unwrap()).collect();
    ws.sort();
    assert_eq!(ws, ["1", "1", "1.5"]);
}
