//! Deterministic datasets: a 95-player soccer graph for the scripted
//! walk-through and random graphs of arbitrary size for benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::graph::{parse_json, MultivariateGraph};

pub const CLUBS: [&str; 5] = ["BAR", "BAY", "JUV", "LIV", "PSG"];
pub const SQUAD: usize = 19;
pub const CROSS_EDGES: usize = 191;
const SEED: u64 = 2018;

/// Node attributes in schema order. The last four only exist for goalkeepers.
pub const ATTRIBUTES: [&str; 39] = [
    "club",
    "minutes",
    "appearances",
    "shots",
    "goals",
    "possession",
    "touches",
    "assists",
    "passes",
    "pass_accuracy",
    "key_passes",
    "crosses",
    "dribbles",
    "tackles",
    "interceptions",
    "balls_recovered",
    "clearances",
    "blocks",
    "fouls_committed",
    "fouls_suffered",
    "yellow_cards",
    "red_cards",
    "offsides",
    "aerials_won",
    "shots_on_target",
    "big_chances_created",
    "distance_km",
    "sprints",
    "through_balls",
    "long_balls",
    "duels_won",
    "dispossessed",
    "errors",
    "headed_goals",
    "penalty_goals",
    "saves",
    "clean_sheets",
    "goals_conceded",
    "punches",
];

pub const LM: &str = "BAR10";
pub const RL: &str = "BAY10";
pub const DEMBELE: &str = "BAR11";
pub const THIAGO: &str = "BAY09";
/// Substitutes whose goal counts are missing.
pub const SUBSTITUTES: [&str; 3] = ["PSG17", "PSG18", "PSG19"];

fn id(club: usize, k: usize) -> String {
    format!("{}{:02}", CLUBS[club], k + 1)
}

fn label(id: &str) -> String {
    match id {
        LM => "LM".into(),
        RL => "RL".into(),
        DEMBELE => "Dembélé".into(),
        THIAGO => "Thiago".into(),
        other => other.into(),
    }
}

/// Integer stat in `[lo, hi]`.
fn stat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Value {
    json!(rng.gen_range(lo..=hi))
}

fn typical(rng: &mut ChaCha8Rng, club: usize, keeper: bool) -> Map<String, Value> {
    let mut a = Map::new();
    a.insert("club".into(), json!(club + 1));
    a.insert("minutes".into(), stat(rng, 150, 850));
    a.insert("appearances".into(), stat(rng, 2, 9));
    a.insert("shots".into(), if keeper { json!(0) } else { stat(rng, 0, 16) });
    a.insert("goals".into(), if keeper { json!(0) } else { stat(rng, 0, 3) });
    a.insert("possession".into(), stat(rng, 50, 250));
    a.insert("touches".into(), stat(rng, 100, 440));
    a.insert("assists".into(), stat(rng, 0, 3));
    a.insert("passes".into(), stat(rng, 80, 600));
    a.insert("pass_accuracy".into(), json!(rng.gen_range(650..=930) as f64 / 10.0));
    a.insert("key_passes".into(), stat(rng, 0, 20));
    a.insert("crosses".into(), stat(rng, 0, 25));
    a.insert("dribbles".into(), stat(rng, 0, 30));
    a.insert("tackles".into(), stat(rng, 0, 30));
    a.insert("interceptions".into(), stat(rng, 0, 20));
    a.insert("balls_recovered".into(), stat(rng, 5, 60));
    a.insert("clearances".into(), stat(rng, 0, 40));
    a.insert("blocks".into(), stat(rng, 0, 10));
    a.insert("fouls_committed".into(), stat(rng, 0, 15));
    a.insert("fouls_suffered".into(), stat(rng, 0, 20));
    a.insert("yellow_cards".into(), stat(rng, 0, 3));
    a.insert("red_cards".into(), stat(rng, 0, 1));
    a.insert("offsides".into(), stat(rng, 0, 8));
    a.insert("aerials_won".into(), stat(rng, 0, 30));
    a.insert("shots_on_target".into(), if keeper { json!(0) } else { stat(rng, 0, 8) });
    a.insert("big_chances_created".into(), stat(rng, 0, 6));
    a.insert("distance_km".into(), json!(rng.gen_range(150..=1100) as f64 / 10.0));
    a.insert("sprints".into(), stat(rng, 10, 200));
    a.insert("through_balls".into(), stat(rng, 0, 8));
    a.insert("long_balls".into(), stat(rng, 0, 40));
    a.insert("duels_won".into(), stat(rng, 5, 70));
    a.insert("dispossessed".into(), stat(rng, 0, 20));
    a.insert("errors".into(), stat(rng, 0, 3));
    a.insert("headed_goals".into(), if keeper { json!(0) } else { stat(rng, 0, 1) });
    a.insert("penalty_goals".into(), json!(0));
    if keeper {
        a.insert("saves".into(), stat(rng, 10, 45));
        a.insert("clean_sheets".into(), stat(rng, 0, 5));
        a.insert("goals_conceded".into(), stat(rng, 3, 15));
        a.insert("punches".into(), stat(rng, 0, 8));
    }
    a
}

fn set(a: &mut Map<String, Value>, pairs: &[(&str, f64)]) {
    for (k, v) in pairs {
        a.insert((*k).to_string(), json!(v));
    }
}

/// The walk-through dataset as a JSON document: 95 players in five clubs
/// of 19, every teammate pair linked (855 edges) plus 191 cross-club links.
pub fn soccer_json() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut nodes = Vec::new();
    for club in 0..CLUBS.len() {
        for k in 0..SQUAD {
            let pid = id(club, k);
            let mut a = typical(&mut rng, club, k == 0);
            match pid.as_str() {
                LM => set(&mut a, &[("minutes", 980.0), ("appearances", 10.0), ("shots", 44.0), ("goals", 6.0), ("possession", 520.0), ("touches", 900.0), ("shots_on_target", 21.0)]),
                RL => set(&mut a, &[("minutes", 1040.0), ("appearances", 10.0), ("shots", 43.0), ("goals", 5.0), ("possession", 260.0), ("touches", 450.0), ("shots_on_target", 19.0)]),
                s if SUBSTITUTES.contains(&s) => {
                    let j = SUBSTITUTES.iter().position(|x| *x == s).unwrap() as f64;
                    set(&mut a, &[("minutes", 45.0 + 20.0 * j), ("appearances", 5.0 + j), ("shots", 14.0 + 3.0 * j)]);
                    a.remove("goals");
                }
                _ => {}
            }
            let attrs: Map<String, Value> = ATTRIBUTES.iter().filter_map(|name| a.get(*name).map(|v| (name.to_string(), v.clone()))).collect();
            nodes.push(json!({"id": pid, "label": label(&pid), "attrs": attrs}));
        }
    }

    let mut edges = Vec::new();
    for club in 0..CLUBS.len() {
        for i in 0..SQUAD {
            for j in i + 1..SQUAD {
                // a few teammates also shared earlier clubs
                let weight = match rng.gen_range(0..100) {
                    0..=2 => 2,
                    3 => 3,
                    _ => 1,
                };
                edges.push(json!({"source": id(club, i), "target": id(club, j), "weight": weight}));
            }
        }
    }

    // Cross-club links avoid the LM/RL neighbourhood so the only path
    // between them inside it runs through Dembélé and Thiago.
    let guarded = ["BAR09", LM, DEMBELE, THIAGO, RL, "BAY11"];
    let mut candidates = Vec::new();
    for ca in 0..CLUBS.len() {
        for cb in ca + 1..CLUBS.len() {
            for i in 0..SQUAD {
                for j in 0..SQUAD {
                    let (a, b) = (id(ca, i), id(cb, j));
                    if !(guarded.contains(&a.as_str()) && guarded.contains(&b.as_str())) {
                        candidates.push((a, b));
                    }
                }
            }
        }
    }
    candidates.shuffle(&mut rng);
    edges.push(json!({"source": DEMBELE, "target": THIAGO, "weight": 1}));
    for (a, b) in candidates.into_iter().take(CROSS_EDGES - 1) {
        edges.push(json!({"source": a, "target": b, "weight": 1}));
    }

    let doc = json!({"nodes": nodes, "edges": edges});
    let mut out = serde_json::to_string_pretty(&doc).expect("fixture serializes");
    out.push('\n');
    out
}

pub fn soccer() -> MultivariateGraph {
    parse_json(soccer_json().as_bytes()).expect("fixture is valid")
}

/// A random graph with `n` nodes, six node attributes with about 10%
/// missing values, and edges present with probability `density`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> MultivariateGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["a", "b", "c", "d", "e", "f"];
    let nodes: Vec<Value> = (0..n)
        .map(|i| {
            let attrs: Map<String, Value> = names
                .iter()
                .map(|k| {
                    let v = if rng.gen_bool(0.1) { Value::Null } else { json!(rng.gen_range(0..1000) as f64 / 10.0) };
                    (k.to_string(), v)
                })
                .collect();
            json!({"id": format!("n{i:04}"), "attrs": attrs})
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push(json!({"source": format!("n{i:04}"), "target": format!("n{j:04}"), "weight": rng.gen_range(1..=5)}));
            }
        }
    }
    parse_json(json!({"nodes": nodes, "edges": edges}).to_string().as_bytes()).expect("random graph is valid")
}
