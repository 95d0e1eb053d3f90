use std::path::Path;
use std::process::Command;

fn lab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ismr-lab")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let path = out.to_str().unwrap().to_string();
    all.extend(["--out", &path]);
    let o = lab(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

const QEC: &[&str] = &["qec-threshold", "--p", "2", "--L-list", "3", "--tau-list", "0.05", "--trials", "30000"];

#[test]
fn same_seed_same_bytes_other_seed_other_rows() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(dir.path(), "a.csv", &[QEC, &["--seed", "11"]].concat());
    let b = run_to(dir.path(), "b.csv", &[QEC, &["--seed", "11"]].concat());
    let c = run_to(dir.path(), "c.csv", &[QEC, &["--seed", "12"]].concat());
    assert_eq!(a, b);
    let body = |s: &str| s.lines().skip(2).collect::<Vec<_>>().join("\n");
    assert_ne!(body(&a), body(&c));
    assert!(a.starts_with("#{"));
    assert!(!a.contains('\r'));
}

#[test]
fn replay_from_header_alone() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_to(
        dir.path(),
        "first.csv",
        &["switch-empirical", "--w", "2", "--k", "1", "--keep", "0.01", "--t", "1", "--trials", "5000", "--seed", "4"],
    );
    let header_only = dir.path().join("header.csv");
    std::fs::write(&header_only, first.lines().next().unwrap()).unwrap();
    let again = run_to(dir.path(), "again.csv", &["run", "--config", header_only.to_str().unwrap()]);
    assert_eq!(first, again);

    let j = run_to(dir.path(), "g.json", &["game-brute", "--p", "3", "--n", "4", "--seed", "2"]);
    let replay = run_to(dir.path(), "g2.json", &["run", "--config", dir.path().join("g.json").to_str().unwrap()]);
    assert_eq!(j, replay);
}

#[test]
fn config_file_runs_and_malformed_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"subcommand": "resource-estimate", "row": "all", "d_list": "3", "c_q": 1.0, "hidden": 1.0, "seed": 0}"#)
        .unwrap();
    let out = run_to(dir.path(), "r.csv", &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.lines().count(), 5);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"subcommand\": \"anf\",\n  \"tree\": ,\n}").unwrap();
    let o = lab(&["run", "--config", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");

    let missing = dir.path().join("missing.json");
    std::fs::write(&missing, r#"{"subcommand": "qec-threshold", "trials": 10}"#).unwrap();
    let o = lab(&["run", "--config", missing.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));
}

#[test]
fn every_subcommand_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.json");
    std::fs::write(&tree, r#"{"var":0,"left":{"var":1,"left":{"bit":1},"right":{"bit":0}},"right":{"bit":1}}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["ismr-verify", "--p", "2", "--x", "1100", "--y", "1"],
        vec!["game-brute", "--p", "3", "--n", "3", "--dist", "hamming-binary", "--r", "2"],
        vec!["game-bound", "--p", "3", "--n-max", "5"],
        vec!["sim-php", "--n", "4", "--graph", "grid3d", "--shots", "20"],
        vec!["sim-qupit", "--p", "3", "--n", "3", "--shots", "10"],
        vec!["switch-empirical", "--w", "2", "--k", "1", "--keep", "0.01", "--t", "2", "--trials", "1000"],
        vec!["anf", "--tree", tree.to_str().unwrap()],
        vec!["qec-threshold", "--L-list", "3", "--trials", "1000"],
        vec!["nn-decompose", "--c", "1", "--w", "1", "--k", "4", "--n", "8"],
        vec!["resource-estimate", "--row", "exact-const-k", "--d-list", "3"],
    ];
    for c in cases {
        let o = lab(&[c.as_slice(), &["--seed", "1"]].concat());
        assert!(o.status.success(), "{c:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty());
    }
    let o = lab(&["ismr-verify", "--p", "3", "--x", "11", "--y", "0", "--seed", "1"]);
    assert!(!o.status.success());
}
