use std::process::Command;

use graphk::bdm::{bdm, nbdm};
use graphk::ctm::{enumerate_census, RuntimeCensus};
use graphk::graph::{generate, write_edges, Family, GeneratorSpec, Graph};
use graphk::matrix::BitMatrix;
use graphk::rng::SplitMix64;
use graphk::table::{desk_table, Block, BlockDistribution};

fn run(bin: &str, args: &[&str]) -> String {
    let out = Command::new(bin).args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "{bin} {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn census_3_2() -> RuntimeCensus {
    RuntimeCensus::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/census_3_2.tsv")).unwrap()
}

#[test]
fn census_to_table_to_bdm() {
    let census = census_3_2();
    let table = BlockDistribution::from_census(&census, 2).unwrap().symmetrize();
    let zero = table.entry(Block::zeros(2)).unwrap().km;
    assert_eq!(zero, table.min_km());
    let mut rng = SplitMix64::new(11);
    for _ in 0..20 {
        let m = BitMatrix::random(10, &mut rng);
        let a = bdm(&m, &table, 2).unwrap();
        assert_eq!(a.value, bdm(&m.complement(), &table, 2).unwrap().value);
    }
    let rebuilt = BlockDistribution::from_census(&census, 3).unwrap().symmetrize();
    let builtin = desk_table();
    assert_eq!(rebuilt.len(), builtin.len());
    for (b, e) in builtin.entries() {
        assert!((rebuilt.entry(b).unwrap().km - e.km).abs() < 1e-12);
    }
}

#[test]
fn frozen_census_matches_enumeration() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/census_2_2.tsv");
    let frozen = RuntimeCensus::load(path).unwrap();
    let fresh = enumerate_census(2, 2, 1000, 0..331_776, 4).unwrap();
    assert_eq!(frozen, fresh);
}

#[test]
fn builtin_table_is_closed_under_symmetry() {
    let t = desk_table();
    assert!(t.meta().symmetrized);
    assert_eq!(t.side(), 3);
    for (b, e) in t.entries() {
        assert_eq!(t.entry(b.complement()).map(|c| c.km), Some(e.km));
        for s in b.dihedral() {
            assert_eq!(t.entry(s).map(|c| c.km), Some(e.km));
        }
    }
    // never produced by a 3-state machine
    assert!(t.entry(Block::zeros(3)).is_none());
    assert!(t.entry(Block::ones(3)).is_none());
    assert_eq!(t.km_block(Block::zeros(3)).unwrap().km, t.max_km() + 1.0);
}

#[test]
fn wheel_in_rim_order_beats_random_orderings() {
    let t = desk_table();
    let g = generate(&GeneratorSpec::new(Family::Wheel { n: 18 }, 0)).unwrap();
    let consecutive = bdm(g.adjacency(), &t, 3).unwrap().value;
    let mut rng = SplitMix64::new(5);
    let mut values: Vec<f64> = (0..100)
        .map(|_| {
            let order = rng.permutation(18);
            bdm(g.reorder(&order).unwrap().adjacency(), &t, 3).unwrap().value
        })
        .collect();
    values.sort_by(f64::total_cmp);
    assert!(consecutive < values[50], "{consecutive} vs median {}", values[50]);
}

#[test]
fn nbdm_orders_structure_below_noise() {
    let t = desk_table();
    let ring = generate(&GeneratorSpec::new(Family::Ws { n: 30, k: 4, p: 0.0 }, 0)).unwrap();
    let noise = generate(&GeneratorSpec::new(Family::ErGnp { n: 30, p: 0.5 }, 0)).unwrap();
    let a = nbdm(&ring, &t, 3, 50, 1).unwrap().normalized;
    let b = nbdm(&noise, &t, 3, 50, 1).unwrap().normalized;
    let e = nbdm(&Graph::empty(30), &t, 3, 10, 0).unwrap().normalized;
    assert!(e < a && a < b, "empty {e} ring {a} noise {b}");
}

#[test]
fn ctm_cli_enumerate_merge_and_build() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).display().to_string();
    let bin = env!("CARGO_BIN_EXE_ctm");
    run(
        bin,
        &[
            "enumerate",
            "--states",
            "2",
            "--shard",
            "0..100000",
            "--out",
            &p("a.tsv"),
        ],
    );
    run(
        bin,
        &[
            "enumerate",
            "--states",
            "2",
            "--shard",
            "100000..331776",
            "--out",
            &p("b.tsv"),
        ],
    );
    run(bin, &["merge", &p("a.tsv"), &p("b.tsv"), "--out", &p("all.tsv")]);
    let merged = RuntimeCensus::load(p("all.tsv")).unwrap();
    assert_eq!(merged, enumerate_census(2, 2, 1000, 0..331_776, 4).unwrap());
    let out = Command::new(bin)
        .args([
            "table",
            "build",
            "--census",
            &p("all.tsv"),
            "--d",
            "1",
            "--out",
            &p("x.tsv"),
        ])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the supported range"));

    let census = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/census_3_2.tsv");
    run(
        bin,
        &["table", "build", "--census", census, "--d", "2", "--out", &p("t.tsv")],
    );
    run(
        bin,
        &["table", "symmetrize", "--table", &p("t.tsv"), "--out", &p("s.tsv")],
    );
    let sym = BlockDistribution::load(p("s.tsv")).unwrap();
    assert!(sym.meta().symmetrized);
    assert_eq!(sym.len(), 16);
}

#[test]
fn graphk_cli_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("ws.txt");
    let bin = env!("CARGO_BIN_EXE_graphk");
    let spec = r#"{"family":"ws","n":40,"k":4,"p":0.1,"seed":3}"#;
    run(bin, &["gen", "--spec", spec, "--out", graph.to_str().unwrap()]);
    let g = graphk::graph::read_edges(&graph).unwrap();
    assert_eq!(g.edge_count(), 80);

    let json = run(
        bin,
        &["bdm", "--graph", graph.to_str().unwrap(), "--perms", "20", "--json"],
    );
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let direct = nbdm(&g, &desk_table(), 3, 20, 0).unwrap();
    assert_eq!(v["normalized"].as_f64().unwrap(), direct.normalized);

    let aut = run(bin, &["aut", "--graph", graph.to_str().unwrap()]);
    assert!(aut.starts_with("order\t"));

    let ring = dir.path().join("ring.txt");
    write_edges(
        &generate(&GeneratorSpec::new(Family::Ws { n: 12, k: 2, p: 0.0 }, 0)).unwrap(),
        &ring,
    )
    .unwrap();
    let aut = run(bin, &["aut", "--graph", ring.to_str().unwrap()]);
    assert!(aut.contains("order\t24\n"), "{aut}");

    let out = dir.path().join("exp");
    run(bin, &["exp", "table1-fixture", "--out", out.to_str().unwrap()]);
    let first = std::fs::read(out.join("table1.csv")).unwrap();
    run(bin, &["exp", "table1-fixture", "--out", out.to_str().unwrap()]);
    assert_eq!(first, std::fs::read(out.join("table1.csv")).unwrap());
}

#[test]
fn graphk_cli_reports_errors() {
    let bin = env!("CARGO_BIN_EXE_graphk");
    let out = Command::new(bin)
        .args(["bdm", "--graph", "/nonexistent/graph.txt"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
