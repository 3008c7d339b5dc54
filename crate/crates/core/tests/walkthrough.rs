use std::path::PathBuf;

use rmc_core::fixture::{self, LM, RL, SUBSTITUTES};
use rmc_core::model::MatrixModel;
use rmc_core::session::{parse_script, replay, Session, SessionConfig};
use rmc_core::similarity::{build_similarity_matrix as build, SimilarityConfig};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/walkthrough")
}

fn bless() -> bool {
    std::env::var_os("RMC_BLESS").is_some()
}

fn run_script() -> (Session, Vec<String>) {
    let text = std::fs::read_to_string(data_dir().join("walkthrough.ndjson")).unwrap();
    let cmds = parse_script(&text).unwrap();
    let mut s = Session::new(SessionConfig { base_dir: Some(data_dir()), ..SessionConfig::default() });
    let digests = replay(&mut s, &cmds).unwrap_or_else(|e| panic!("{e}"));
    (s, digests)
}

#[test]
fn committed_fixture_matches_generator() {
    let path = data_dir().join("players.json");
    let fresh = fixture::soccer_json();
    if bless() {
        std::fs::write(&path, &fresh).unwrap();
    }
    assert_eq!(std::fs::read_to_string(path).unwrap(), fresh);
}

#[test]
fn fixture_shape() {
    let g = fixture::soccer();
    assert_eq!(g.node_count(), 95);
    assert_eq!(g.edge_count(), 1046);
    assert_eq!(g.node_schema().len(), 39);
    let (lm, rl) = (g.node_index(LM).unwrap(), g.node_index(RL).unwrap());
    assert!(g.edge_between(lm, rl).is_none());
    let v = |i: usize, a: &str| g.node(i).value(a);
    assert_eq!(v(lm, "appearances"), v(rl, "appearances"));
    assert_eq!((v(lm, "shots"), v(lm, "goals")), (Some(44.0), Some(6.0)));
    assert_eq!((v(rl, "shots"), v(rl, "goals")), (Some(43.0), Some(5.0)));
    assert!(v(rl, "minutes") > v(lm, "minutes"));
    assert_eq!(v(lm, "possession").unwrap(), 2.0 * v(rl, "possession").unwrap());
    assert_eq!(v(lm, "touches").unwrap(), 2.0 * v(rl, "touches").unwrap());
    for s in SUBSTITUTES {
        assert_eq!(g.node_by_id(s).unwrap().value("goals"), None);
    }
}

#[test]
fn two_standout_rows_cross_in_one_similar_cell() {
    let g = fixture::soccer();
    let cfg = SimilarityConfig::new(["minutes", "appearances", "shots", "goals"]);
    let sim = build(&g, &cfg).unwrap();
    let (lm, rl) = (g.node_index(LM).unwrap(), g.node_index(RL).unwrap());
    assert!(sim.get(lm, rl).unwrap() > 0.85, "{:?}", sim.get(lm, rl));
    let n = g.node_count();
    for star in [lm, rl] {
        let reddish = (0..n).filter(|&j| j != lm && j != rl).filter(|&j| sim.get(star, j).unwrap() < 0.5).count();
        assert!(reddish as f64 >= 0.9 * (n - 2) as f64, "{reddish}");
    }
    // nobody else stands out that way
    for i in (0..n).filter(|&i| i != lm && i != rl) {
        let reddish = (0..n).filter(|&j| j != i).filter(|&j| sim.get(i, j).is_some_and(|s| s < 0.5)).count();
        assert!(reddish < n / 2, "{} has {reddish} dissimilar cells", g.node(i).id);
    }
}

#[test]
fn script_matches_goldens() {
    let start = std::time::Instant::now();
    let (_, digests) = run_script();
    assert!(start.elapsed().as_secs_f64() < 5.0);
    let path = data_dir().join("walkthrough.digests");
    let text = digests.join("\n") + "\n";
    if bless() {
        std::fs::write(&path, &text).unwrap();
    }
    assert_eq!(std::fs::read_to_string(path).unwrap(), text);
}

#[test]
fn edits_change_substitute_similarity() {
    let (s, _) = run_script();
    let after = s.model().unwrap();
    let mut before = MatrixModel::new(fixture::soccer());
    before.set_similarity_attributes(after.sim_config.clone()).unwrap();
    let g = &after.graph;
    let lm = g.node_index(LM).unwrap();
    for sub in SUBSTITUTES {
        let i = g.node_index(sub).unwrap();
        assert!(g.node(i).value("goals").is_some());
        assert_ne!(after.similarity.get(lm, i), before.similarity.get(lm, i));
    }
    // incrementally maintained cells equal a fresh build
    assert_eq!(after.similarity, build(g, &after.sim_config).unwrap());
}
