use std::path::Path;
use std::process::{Command, Output};

use hyperlab::bounds::bound_table;
use hyperlab::constructions::{double_path_pair, loose_path};
use hyperlab::efgame::duplicator_wins;
use hyperlab::hypercore::{density, shg};
use hyperlab::randmodel::{sample, ExperimentConfig};
use hyperlab::rational::{format_rational, parse_rational};
use hyperlab::Hypergraph;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlab")).args(args).env_remove("HYPERLAB_SEED").output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

fn write(dir: &Path, name: &str, g: &Hypergraph) -> String {
    let p = dir.join(name);
    shg::write(&p, g).unwrap();
    p.display().to_string()
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["schema"], 1);
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn density_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let g = loose_path(3, 4).unwrap();
    let f = write(dir.path(), "p.shg", &g);
    let v = json_ok(&["density", &f]);
    let rho = density(&g).unwrap();
    assert_eq!(v["num"].to_string(), rho.numer().to_string());
    assert_eq!(v["den"].to_string(), rho.denom().to_string());
}

#[test]
fn construct_double_path_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("dp");
    let v = json_ok(&["construct", "double-path", "--s", "3", "--l", "1", "--m", "2", "--out", prefix.to_str().unwrap()]);
    let w = double_path_pair(3, 1, 2).unwrap();
    assert_eq!(v["alpha"], format_rational(&w.alpha));
    assert_eq!(v["h"], shg::to_string(w.pair.inner()));
    assert_eq!(v["g"], shg::to_string(w.pair.outer()));
    assert_eq!(v["verification"]["balance_checked"], true);
    let h = shg::read(dir.path().join("dp.h.shg")).unwrap();
    assert_eq!(&h, w.pair.inner());

    let c = json_ok(&[
        "classify-pair",
        "--outer",
        &format!("{}.g.shg", prefix.display()),
        "--inner",
        &format!("{}.h.shg", prefix.display()),
        "--alpha",
        &format_rational(&w.alpha),
    ]);
    assert_eq!(c["class"], "neutral");
}

#[test]
fn bounds_table_matches_library() {
    let v = json_ok(&["bounds", "--s", "3", "--k", "6"]);
    let rows = v["rows"].as_array().unwrap();
    let lib = bound_table(3, 6).unwrap();
    assert_eq!(rows.len(), lib.len());
    for (row, b) in rows.iter().zip(&lib) {
        assert_eq!(row["bound"], b.label);
        assert_eq!(parse_rational(row["value"].as_str().unwrap()).unwrap(), b.value);
        assert_eq!(row["params"]["k"], 6);
    }
    let q = json_ok(&["bounds", "--s", "3", "--k", "4", "--qk", "13/8"]);
    assert!(q["in_q_k"].is_boolean());
}

#[test]
fn sample_is_seeded_and_matches_library() {
    let args = ["sample", "--s", "3", "--n", "30", "--alpha", "3/2", "--trial", "4", "--shg"];
    let a = Command::new(env!("CARGO_BIN_EXE_hyperlab")).args(args).env("HYPERLAB_SEED", "99").output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_hyperlab"))
        .args(args)
        .args(["--seed", "99"])
        .env_remove("HYPERLAB_SEED")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let cfg = ExperimentConfig::with_alpha(3, 30, parse_rational("3/2").unwrap(), 1, 99).unwrap();
    let g = sample(&cfg, 4).unwrap();
    assert_eq!(shg::parse(&String::from_utf8(a.stdout).unwrap()).unwrap(), g);
}

#[test]
fn game_winner_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let one = Hypergraph::from_edges(3, [[1, 2, 3]], 1..=3).unwrap();
    let two = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5]], 1..=5).unwrap();
    let (l, r) = (write(dir.path(), "l.shg", &one), write(dir.path(), "r.shg", &two));
    for k in 1..=3 {
        let v = json_ok(&["game", "--left", &l, "--right", &r, "--rounds", &k.to_string(), "--formula"]);
        let dup = duplicator_wins(&one, &two, k).unwrap();
        assert_eq!(v["winner"], if dup { "duplicator" } else { "spoiler" }, "k = {k}");
        if !dup {
            assert_eq!(v["verified"], true);
            assert!(v["formula"].is_string());
        }
    }
}

#[test]
fn probe_csv_has_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "e.shg", &Hypergraph::from_edges(3, [[1, 2, 3]], 1..=3).unwrap());
    let out = run(&["probe", "--motif", &edge, "--alphas", "1,2", "--ns", "8,10", "--trials", "4", "--csv", "--sequential"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,n,p,estimate,lo,hi");
    assert_eq!(lines.len(), 5);
}

#[test]
fn parallel_and_sequential_agree() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "e.shg", &Hypergraph::from_edges(3, [[1, 2, 3]], 1..=3).unwrap());
    let strip = |mut v: Value| {
        v["wall_ms"] = Value::Null;
        for r in v["reports"].as_array_mut().unwrap() {
            r["wall_ms"] = Value::Null;
        }
        v
    };
    let base = ["scan", "--motif", &edge, "--n", "12", "--alphas", "2,5/2", "--trials", "40", "--seed", "5"];
    let par = strip(json_ok(&base));
    let mut seq_args = base.to_vec();
    seq_args.push("--sequential");
    assert_eq!(par, strip(json_ok(&seq_args)));
}

#[test]
fn exit_codes() {
    let out = run(&["parse", "exists x (x ="]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "syntax");

    let out = run(&["construct", "cycle-pair", "--s", "3", "--k", "5", "--a1", "0", "--a2", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let big = write(dir.path(), "big.shg", &loose_path(3, 6).unwrap());
    let out = run(&["--enum-cap", "5", "balance", &big]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "capacity");

    let out = run(&["density", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_with_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.shg", &Hypergraph::from_edges(3, [[1, 2, 3]], 1..=4).unwrap());
    let t = json_ok(&["eval", "--graph", &f, "--formula", "exists z N(x, y, z)", "--assign", "x=1,y=2"]);
    assert_eq!(t["value"], true);
    let f2 = json_ok(&["eval", "--graph", &f, "--formula", "exists z N(x, y, z)", "--assign", "x=1,y=4"]);
    assert_eq!(f2["value"], false);
    let out = run(&["eval", "--graph", &f, "--formula", "exists z N(x, y, z)", "--assign", "x=1"]);
    assert_eq!(error_kind(&out), "unbound");
}
