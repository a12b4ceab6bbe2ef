use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use ijoin_cli::io::relation_csv;
use ijoin_cli::{load_database, run, save_database, Cli, Output, RunReport};
use serde_json::Value;

const TRIANGLE: &str = "R([A],[B]), S([B],[C]), T([A],[C])";

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn report(args: &[&str]) -> RunReport {
    let cli = Cli::try_parse_from(std::iter::once("ijoin").chain(args.iter().copied())).unwrap();
    match run(&cli.command).unwrap() {
        Output::Report(r) => *r,
        Output::Csv(_) => panic!("expected a report"),
    }
}

fn output(args: &[&str]) -> Value {
    report(args).output
}

fn golden(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/run_report.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, r: &RunReport) {
    let doc: Value = serde_json::from_str(&r.to_json()).unwrap();
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", r.command);
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn analyze_triangle() {
    let out = output(&["analyze", "-q", TRIANGLE]);
    assert_eq!(out["tau"], 8);
    assert_eq!(out["alpha"], false);
    assert_eq!(out["gamma"], false);
    assert_eq!(out["iota"], false);
    assert_eq!(out["berge_cycle"]["edges"].as_array().unwrap().len(), 3);
    assert_eq!(out, golden("analyze_triangle"));
}

#[test]
fn analyze_goldens() {
    let iota = output(&["analyze", "-q", "R([A],[B],[C]), S([A],[B],[C]), T([A])"]);
    assert_eq!((iota["iota"].as_bool(), iota["tau"].as_u64()), (Some(true), Some(24)));
    assert_eq!(iota, golden("analyze_iota"));
    let mixed = output(&["analyze", "-q", "R([A],[B],[C]), S([B],[C]), T([A],[B])"]);
    assert_eq!((mixed["alpha"].as_bool(), mixed["iota"].as_bool()), (Some(true), Some(false)));
    assert_eq!((mixed["tau"].as_u64(), mixed["simplified"].as_u64()), (Some(24), Some(3)));
    assert_eq!(mixed, golden("analyze_acyclic_not_iota"));
}

#[test]
fn analyze_reports_counts_beyond_the_limit() {
    let out = output(&["analyze", "-q", TRIANGLE, "--member-limit", "4"]);
    assert_eq!(out["tau"], 8);
    assert!(out["simplified"].is_null() && out["iota_semantic"].is_null());
}

#[test]
fn widths_goldens() {
    let tri = output(&["widths", "-q", TRIANGLE]);
    assert_eq!(tri["ijw_fhtw_upper"], "1.5");
    assert_eq!(tri, golden("widths_triangle"));

    let clique = output(&["widths", "-q", "R([A],[B]), S([A],[C]), T([A],[D]), U([B],[C]), V([B],[D]), W([C],[D])"]);
    assert_eq!(clique["ijw_fhtw_upper"], "2");
    assert_eq!((clique["tau"].as_u64(), clique["simplified"].as_u64()), (Some(1296), Some(81)));
    assert!(clique["classes"].as_array().unwrap().iter().all(|w| w == "2"));
    assert_eq!(clique["classes"].as_array().unwrap().len(), 6);
    assert_eq!(clique, golden("widths_clique4"));

    let lw4 = output(&["widths", "-q", "R([A],[B],[C]), S([B],[C],[D]), T([C],[D],[A]), U([D],[A],[B])"]);
    let mut classes: Vec<&str> = lw4["classes"].as_array().unwrap().iter().map(|w| w.as_str().unwrap()).collect();
    classes.sort();
    assert_eq!(classes, ["1.5", "1.5", "1.5", "1.5", "2", "5/3"]);
    assert_eq!(lw4["ijw_fhtw_upper"], "2");
    assert_eq!(lw4, golden("widths_lw4"));
}

#[test]
fn eval_agrees_with_oracle() {
    let tmp = tempfile::tempdir().unwrap();
    let queries = [TRIANGLE, "R([A],B), S([A]), T(B)", "R([A],[B]), S([B],[C]), T([C],[A]), U([A])", "R(A,B), S(B,C)"];
    let mut truths = 0;
    for (qi, q) in queries.iter().enumerate() {
        for seed in 0..6 {
            let dir = tmp.path().join(format!("q{qi}s{seed}"));
            let dir = dir.to_str().unwrap();
            let seed = seed.to_string();
            output(&["gen", "-q", q, "--rows", "6", "--seed", &seed, "--max-width", "3", "--out", dir]);
            let want = output(&["oracle", "-q", q, "--db", dir])["result"].clone();
            for strategy in ["auto", "yannakakis", "decomp"] {
                let got = output(&["eval", "-q", q, "--db", dir, "--strategy", strategy]);
                assert_eq!(got["result"], want, "{q} seed {seed} {strategy}");
            }
            let par = output(&["eval", "-q", q, "--db", dir, "--parallel"]);
            assert_eq!(par["result"], want);
            truths += usize::from(want == true);
        }
    }
    assert!(truths > 0 && truths < 24, "{truths} true instances");
}

#[test]
fn open_ends_are_respected() {
    let open = data("open");
    let open = open.to_str().unwrap();
    assert_eq!(output(&["eval", "-q", TRIANGLE, "--db", open])["result"], false);
    assert_eq!(output(&["oracle", "-q", TRIANGLE, "--db", open])["result"], false);
    // the same data with closed ends intersects at A = 1, C = 1
    let tmp = tempfile::tempdir().unwrap();
    for f in ["R.csv", "S.csv", "T.csv"] {
        let text = fs::read_to_string(data("open").join(f)).unwrap();
        fs::write(tmp.path().join(f), text.replace('(', "[").replace(')', "]")).unwrap();
    }
    let closed = tmp.path().to_str().unwrap();
    assert_eq!(output(&["eval", "-q", TRIANGLE, "--db", closed])["result"], true);
    assert_eq!(output(&["oracle", "-q", TRIANGLE, "--db", closed])["result"], true);
}

#[test]
fn canonical_inputs_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let db = load_database(&data("mixed")).unwrap();
    let out = tmp.path().join("mixed");
    save_database(&db, &out).unwrap();
    assert_eq!(dir_bytes(&out), dir_bytes(&data("mixed")));

    let db = load_database(&data("mixed.json")).unwrap();
    let out = tmp.path().join("mixed.json");
    save_database(&db, &out).unwrap();
    assert_eq!(fs::read(&out).unwrap(), fs::read(data("mixed.json")).unwrap());
    assert_eq!(relation_csv(&db.relations["S"]), "X:bits\n01\n\n");

    // CSV and JSON carry the same database
    let json = tmp.path().join("again.json");
    save_database(&load_database(&data("mixed")).unwrap(), &json).unwrap();
    assert_eq!(load_database(&json).unwrap(), load_database(&data("mixed")).unwrap());
}

#[test]
fn cells_parse_exactly() {
    let db = load_database(&data("mixed")).unwrap();
    let r = &db.relations["R"];
    assert_eq!(r.row(0)[0].to_string(), "[1,4]");
    assert_eq!(r.row(0)[1], ijoin::Value::num(ijoin::Rational::new(13, 4)));
    assert_eq!(r.row(1)[0].to_string(), "[-0.5,1/3]");
    assert_eq!(db.relations["S"].row(1)[0], ijoin::Value::Bits(ijoin::Bitstring::EMPTY));
    assert!(db.relations["T"].is_empty());
}

#[test]
fn gen_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for (name, seed) in [("a", "7"), ("b", "7"), ("c", "8")] {
        let dir = tmp.path().join(name);
        let r = output(&["gen", "-q", TRIANGLE, "--rows", "50", "--seed", seed, "--out", dir.to_str().unwrap()]);
        outs.push((dir_bytes(&dir), r["sha256"].clone()));
    }
    assert_eq!(outs[0], outs[1]);
    assert_ne!(outs[0].0, outs[2].0);
    let json = tmp.path().join("a.json");
    output(&["gen", "-q", TRIANGLE, "--rows", "50", "--seed", "7", "--out", json.to_str().unwrap()]);
    assert_eq!(load_database(&json).unwrap(), load_database(&tmp.path().join("a")).unwrap());
}

#[test]
fn reports_validate_and_repeat() {
    let v = validator();
    let tmp = tempfile::tempdir().unwrap();
    let db = tmp.path().join("db");
    let db = db.to_str().unwrap();
    let red = tmp.path().join("red");
    let bench = tmp.path().join("bench.csv");
    let runs: Vec<Vec<&str>> = vec![
        vec!["gen", "-q", TRIANGLE, "--rows", "20", "--seed", "3", "--out", db],
        vec!["analyze", "-q", TRIANGLE],
        vec!["analyze", "-q", "R(A,B), S(B,C)"],
        vec!["widths", "-q", TRIANGLE],
        vec!["eval", "-q", TRIANGLE, "--db", db],
        vec!["eval", "-q", TRIANGLE, "--db", db, "--strategy", "decomp"],
        vec!["oracle", "-q", TRIANGLE, "--db", db],
        vec!["reduce", "-q", TRIANGLE, "--db", db, "--out", red.to_str().unwrap()],
        vec!["bench", "-q", TRIANGLE, "--sizes", "8,16", "--seed", "1,2", "--out", bench.to_str().unwrap()],
    ];
    for args in &runs {
        let a = report(args);
        assert_valid(&v, &a);
        let b = report(args);
        assert_eq!(a.without_timings().to_json(), b.without_timings().to_json(), "{args:?}");
    }
    let members = fs::read_to_string(red.join("members.txt")).unwrap();
    assert_eq!(members.lines().count(), 8);
    assert_eq!(fs::read_to_string(&bench).unwrap().lines().count(), 1 + 2 * 2 * 5);
}

#[test]
fn reduce_writes_a_loadable_database() {
    let tmp = tempfile::tempdir().unwrap();
    let db = tmp.path().join("db");
    let red = tmp.path().join("red");
    output(&["gen", "-q", TRIANGLE, "--rows", "10", "--seed", "1", "--out", db.to_str().unwrap()]);
    let out = output(&["reduce", "-q", TRIANGLE, "--db", db.to_str().unwrap(), "--out", red.to_str().unwrap()]);
    assert_eq!(out["members"], 8);
    let loaded = load_database(&red).unwrap();
    assert_eq!(loaded.relations.len(), 12);
    for (name, rel) in &loaded.relations {
        assert_eq!(out["relation_sizes"][name], rel.len());
        assert!(rel.rows().all(|r| r.iter().all(|v| v.as_bits().is_some())), "{name}");
    }
}

#[test]
fn bench_prints_csv() {
    let cli = Cli::try_parse_from(["ijoin", "bench", "-q", "R([A],B), S([A]), T(B)", "--sizes", "16,32"]).unwrap();
    let Output::Csv(csv) = run(&cli.command).unwrap() else { panic!("expected CSV") };
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,seed,phase,seconds");
    assert_eq!(lines.len(), 1 + 2 * 5);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ijoin");
    let tmp = tempfile::tempdir().unwrap();
    let db = tmp.path().join("db");
    // an empty relation makes the query false; the exit code is still zero
    fs::create_dir(&db).unwrap();
    for (f, text) in [("R.csv", "[A],[B]\n[0,1],[0,1]\n"), ("S.csv", "[B],[C]\n"), ("T.csv", "[A],[C]\n[0,1],[0,1]\n")]
    {
        fs::write(db.join(f), text).unwrap();
    }
    let ok = Process::new(bin).args(["eval", "-q", TRIANGLE, "--db"]).arg(&db).output().unwrap();
    assert!(ok.status.success());
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["output"]["result"], false);

    fs::write(db.join("S.csv"), "[B],[C]\n[0,1]\n").unwrap();
    let bad = Process::new(bin).args(["eval", "-q", TRIANGLE, "--db"]).arg(&db).output().unwrap();
    assert!(!bad.status.success());
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(msg.contains("S.csv, line 2"), "{msg}");

    let syntax = Process::new(bin).args(["analyze", "-q", "R([A],"]).output().unwrap();
    assert!(!syntax.status.success());
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("syntax error"));
}

#[test]
fn kind_mismatch_names_the_column() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("R.csv"), "A,[B]\n1,[0,1]\n").unwrap();
    let cli = Cli::try_parse_from(["ijoin", "eval", "-q", "R([A],[B])", "--db", tmp.path().to_str().unwrap()]).unwrap();
    let err = run(&cli.command).unwrap_err().to_string();
    assert!(err.contains("`R`") && err.contains("`A`"), "{err}");
}
