use std::path::Path;
use std::process::{Command, Output};

use pivotminor::families::{tri_family, TriKind};
use pivotminor::io::parse_graph;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pivotminor"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_kkbar_4_is_the_eight_vertex_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "--family", "kkbar", "--t", "4"]);
    assert_eq!(code(&out), 0);
    let g = parse_graph(&stdout(&out)).unwrap();
    assert_eq!(g.order(), 8);
    assert_eq!(g, tri_family(TriKind::KKbar, 4));
}

#[test]
fn empty_trace_verifies_against_its_own_input() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["gen", "--family", "grid", "--m", "2", "--n", "3", "--out", "g.txt"])), 0);
    std::fs::write(dir.path().join("t.json"), "[]").unwrap();
    let out = run(dir.path(), &["verify", "--input", "g.txt", "--trace", "t.json", "--target", "iso:g.txt"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn flipped_grid_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ["--family", "flipped-grid", "--n", "15", "--seed", "7"];
    let mut args = vec!["extract"];
    args.extend(gen);
    args.extend(["--target", "path:2", "--trace-out", "t.json", "--result-out", "r.txt"]);
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let mut args = vec!["gen"];
    args.extend(gen);
    args.extend(["--out", "g.txt", "--spec-out", "s.json"]);
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let out = run(dir.path(), &["verify", "--input", "g.txt", "--trace", "t.json", "--target", "path:2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(dir.path(), &["verify", "--input", "g.txt", "--trace", "t.json", "--target", "path:3"]);
    assert_eq!(code(&out), 1);

    // the same extraction from the files
    let out = run(
        dir.path(),
        &["extract", "--input", "g.txt", "--spec", "s.json", "--target", "path:2", "--trace-out", "t2.json"],
    );
    assert_eq!(code(&out), 0);
    let a = std::fs::read(dir.path().join("t.json")).unwrap();
    let b = std::fs::read(dir.path().join("t2.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for fam in ["flipped-grid", "x-flip"] {
        let a = run(dir.path(), &["gen", "--family", fam, "--n", "5", "--seed", "11", "--spec-out", "a.json"]);
        let sa = std::fs::read(dir.path().join("a.json")).unwrap();
        let b = run(dir.path(), &["gen", "--family", fam, "--n", "5", "--seed", "11", "--spec-out", "b.json"]);
        let sb = std::fs::read(dir.path().join("b.json")).unwrap();
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(sa, sb);
        let c = run(dir.path(), &["gen", "--family", fam, "--n", "5", "--seed", "12"]);
        assert_ne!(a.stdout, c.stdout);
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["gen", "--family", "flipped-grid", "--n", "3"])), 2);
    assert_eq!(code(&run(dir.path(), &["gen", "--family", "x-flip", "--n", "3"])), 2);
    assert_eq!(code(&run(dir.path(), &["gen", "--family", "nonsense"])), 2);
    assert_eq!(code(&run(dir.path(), &["gen", "--family", "path"])), 2);
    assert_eq!(code(&run(dir.path(), &["extract", "--family", "kk", "--t", "3", "--target", "tree:3"])), 2);
}

#[test]
fn oracle_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--family", "kk", "--t", "3", "--out", "kk.txt"]);
    run(dir.path(), &["gen", "--family", "kkbar", "--t", "3", "--out", "kkbar.txt"]);
    run(dir.path(), &["gen", "--family", "path", "--n", "5", "--out", "p5.txt"]);
    run(dir.path(), &["gen", "--family", "path", "--n", "4", "--out", "p4.txt"]);
    let contains = |host: &str, pattern: &str, extra: &[&str]| {
        let mut args = vec!["oracle", "contains", "--host", host, "--pattern", pattern];
        args.extend(extra);
        code(&run(dir.path(), &args))
    };
    assert_eq!(contains("kk.txt", "p5.txt", &[]), 1);
    assert_eq!(contains("kk.txt", "p5.txt", &["--max-states", "2"]), 3);
    assert_eq!(contains("kkbar.txt", "p4.txt", &["--witness-out", "w.json"]), 0);
    let out = run(dir.path(), &["verify", "--input", "kkbar.txt", "--trace", "w.json", "--target", "iso:p4.txt"]);
    assert_eq!(code(&out), 0);
    // K_3△K̄_3 has nested neighbourhoods, so no induced P_4
    assert_eq!(contains("kkbar.txt", "p4.txt", &["--mode", "induced"]), 1);
    run(dir.path(), &["gen", "--family", "path", "--n", "7", "--out", "p7.txt"]);
    assert_eq!(contains("p7.txt", "p4.txt", &["--mode", "induced", "--witness-out", "m.json"]), 0);
}

#[test]
fn kk_extraction_and_kk_target() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--family", "kk", "--t", "4", "--out", "kk.txt"]);
    let out = run(dir.path(), &["extract", "--family", "kk", "--t", "4", "--target", "path:2", "--trace-out", "t.json"]);
    assert_eq!(code(&out), 0);
    // the KK outcome yields K_t△K_t, not P_t
    let out = run(dir.path(), &["verify", "--input", "kk.txt", "--trace", "t.json", "--target", "kk:2"]);
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["verify", "--input", "kk.txt", "--trace", "t.json", "--target", "path:2"]);
    assert_eq!(code(&out), 1);
    std::fs::write(dir.path().join("e.json"), "[]").unwrap();
    let out = run(dir.path(), &["verify", "--input", "kk.txt", "--trace", "e.json", "--target", "kk:4"]);
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["verify", "--input", "kk.txt", "--trace", "e.json", "--target", "kk:3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn one_flip_route() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--family", "flipped-grid", "--n", "3", "--m", "9", "--seed", "5", "--out", "g.txt", "--spec-out", "s.json"]);
    let out = run(
        dir.path(),
        &["extract", "--input", "g.txt", "--spec", "s.json", "--target", "one-flip", "--trace-out", "t.json"],
    );
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["verify", "--input", "g.txt", "--trace", "t.json", "--target", "one-flip:3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    run(dir.path(), &["gen", "--family", "x-flip", "--n", "15", "--seed", "9", "--out", "x.txt", "--spec-out", "x.json"]);
    let out = run(
        dir.path(),
        &["extract", "--input", "x.txt", "--one-flip", "x.json", "--target", "path:2", "--trace-out", "xt.json"],
    );
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["replay", "--input", "x.txt", "--trace", "xt.json"]);
    assert_eq!(code(&out), 0);
    assert!(parse_graph(&stdout(&out)).unwrap().is_path());
}

#[test]
fn rankdepth_treemodel_export() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--family", "kk", "--t", "3", "--out", "k.txt"]);
    let out = run(dir.path(), &["rankdepth", "--input", "k.txt"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).trim().parse::<usize>().is_ok());

    let out = run(dir.path(), &["export", "--input", "k.txt", "--format", "treemodel", "--out", "m.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(dir.path(), &["treemodel-validate", "--input", "k.txt", "--model", "m.json"])), 0);
    run(dir.path(), &["gen", "--family", "path", "--n", "6", "--out", "p.txt"]);
    assert_eq!(code(&run(dir.path(), &["treemodel-validate", "--input", "p.txt", "--model", "m.json"])), 1);

    let out = run(dir.path(), &["export", "--input", "k.txt", "--format", "decomposition", "--out", "d.json"]);
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["rankdepth", "--input", "k.txt", "--decomposition", "d.json"]);
    assert_eq!(code(&out), 0);

    let out = run(dir.path(), &["export", "--input", "k.txt", "--format", "dot"]);
    assert!(stdout(&out).starts_with("graph G {"));
}
