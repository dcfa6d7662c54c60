use std::path::Path;
use std::process::{Command, Output};

use cubetorus::io::PackingRecord;
use cubetorus::packing::sparse_packing_3d;
use cubetorus::{regular_tiling, Symmetry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubetorus")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn enumerate_prints_counts() {
    let o = cli(&["enumerate", "--dim", "3"]);
    assert!(o.status.success());
    let last = stdout(&o).lines().last().unwrap().split_whitespace().map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(last, ["8", "9", "9"]);
}

#[test]
fn enumerate_limit_exits_three() {
    let o = cli(&["--limit", "5", "enumerate", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn enumerate_writes_database() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("db");
    let o = cli(&["enumerate", "--dim", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let db = cubetorus::io::OrbitDatabase::open(&out).unwrap();
    assert_eq!(db.load_level(2, 4).unwrap().0.len(), 2);
}

#[test]
fn canon_identifies_relabelled_copies() {
    let dir = tempfile::tempdir().unwrap();
    let p = sparse_packing_3d();
    let q = Symmetry::random(3, &mut ChaCha8Rng::seed_from_u64(4)).apply(&p).unwrap();
    let body = PackingRecord::from_set(&p).to_text() + &PackingRecord::from_set(&q).to_text();
    let file = write(dir.path(), "two.txt", &body);
    let o = cli(&["canon", &file]);
    assert!(o.status.success());
    let keys: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(keys.len(), 2);
    assert_eq!(keys[0], keys[1]);
}

#[test]
fn analyze_regular_tiling() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "r4.txt", &PackingRecord::from_set(&regular_tiling(4).unwrap()).to_text());
    let o = cli(&["analyze", &file, "--moments", "--format", "json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"m2\":\"625/16\""));
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.txt", "d=2 n=2\n0 0\n1 1\n");
    assert_eq!(cli(&["canon", &file]).status.code(), Some(2));
    assert!(cli(&["canon", &file, "--raw"]).status.success());
    assert_eq!(cli(&["random", "--dim", "9"]).status.code(), Some(2));
}

#[test]
fn generators_are_reproducible() {
    for kind in ["random", "greedy", "metropolis"] {
        let args = ["--seed", "7", kind, "--dim", "4", "--runs", "3", "--iterations", "50", "--format", "json"];
        let a = stdout(&cli(&args));
        let mut args1 = vec!["--threads", "1"];
        args1.extend_from_slice(&args);
        let b = stdout(&cli(&args1));
        assert_eq!(a, b, "{kind}");
        let recs = cubetorus::io::parse_json_lines(&a, false).unwrap();
        assert_eq!(recs.len(), 3);
        for r in recs {
            assert!([8, 9, 10, 12, 16].contains(&r.labels.len()), "{kind}: size {}", r.labels.len());
            assert_eq!(r.meta.unwrap().nonextendible, Some(true));
        }
    }
}

#[test]
fn flips_and_blocking() {
    let o = cli(&["flips", "--dim", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("orbits 9 "));
    let o = cli(&["blocking", "--dim", "3", "--size", "4"]);
    assert!(stdout(&o).starts_with("3 orbits"));
    let dir = tempfile::tempdir().unwrap();
    let set = cubetorus::analysis::blocking::quoted_blocking_set_4d();
    let file = write(dir.path(), "b.txt", &PackingRecord::from_set(&set).to_text());
    let o = cli(&["blocking", "--dim", "4", "--verify", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("blocking=false"));
}

#[test]
fn verify_paper_small_tier() {
    let o = cli(&["verify-paper", "--dim", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("9 tiling orbits"));
    assert!(out.contains("4/4 checks passed"));
}
