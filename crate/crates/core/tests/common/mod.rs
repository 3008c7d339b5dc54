#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use rmc_core::graph::{parse_json, MultivariateGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Graph with `n` nodes `v0..`, `d` attributes `a0..` of which a fraction
/// `missing` is absent, and edges with probability `density`.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, d: usize, missing: f64, density: f64) -> MultivariateGraph {
    let nodes: Vec<Value> = (0..n)
        .map(|i| {
            let attrs: Map<String, Value> = (0..d)
                .map(|k| {
                    let v = if r.gen_bool(missing) { Value::Null } else { json!(r.gen_range(-50.0..50.0)) };
                    (format!("a{k}"), v)
                })
                .collect();
            json!({"id": format!("v{i}"), "attrs": attrs})
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(density) {
                edges.push(json!({"source": format!("v{i}"), "target": format!("v{j}"), "weight": r.gen_range(1..6)}));
            }
        }
    }
    parse_json(json!({"nodes": nodes, "edges": edges}).to_string().as_bytes()).unwrap()
}

/// Independent similarity: per attribute, min-max normalization over the
/// present values; mean absolute difference over attributes both have.
pub fn oracle_similarity(g: &MultivariateGraph, attrs: &[&str], i: usize, j: usize) -> Option<f64> {
    if i == j {
        return Some(1.0);
    }
    let mut total = 0.0;
    let mut count = 0;
    for a in attrs {
        let def = g.node_attribute(a).unwrap();
        let (lo, hi) = (def.observed_min, def.observed_max);
        let norm = |v: f64| if hi > lo { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.5 };
        if let (Some(x), Some(y)) = (g.node(i).value(a), g.node(j).value(a)) {
            total += (norm(x) - norm(y)).abs();
            count += 1;
        }
    }
    (count > 0).then(|| 1.0 - total / count as f64)
}

/// Node and edge indices touched by a region, enumerated cell by cell.
pub fn brute_force_objects(
    g: &MultivariateGraph,
    order: &[usize],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for r in rows {
        for c in cols.clone() {
            nodes.insert(order[r]);
            nodes.insert(order[c]);
            if r != c {
                if let Some(e) = g.edges().iter().position(|e| {
                    let (s, t) = (g.node_index(&e.source).unwrap(), g.node_index(&e.target).unwrap());
                    (s, t) == (order[r], order[c]) || (t, s) == (order[r], order[c])
                }) {
                    edges.insert(e);
                }
            }
        }
    }
    (nodes, edges)
}
