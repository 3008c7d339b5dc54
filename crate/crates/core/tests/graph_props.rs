mod common;

use proptest::prelude::*;

use rmc_core::graph::{parse_csv_pair, parse_dataset, parse_json, DatasetBytes, GraphError};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(seed in any::<u64>(), n in 0usize..25, d in 0usize..6, density in 0.0f64..0.6) {
        let g = common::random_graph(&mut common::rng(seed), n, d, 0.2, density);
        let back = parse_json(g.to_json().as_bytes()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_json(), g.to_json());
    }

    #[test]
    fn cell_counts_partition_the_matrix(n in 0usize..400) {
        let g = common::random_graph(&mut common::rng(n as u64), n, 0, 0.0, 0.0);
        let c = g.stats().cell_counts;
        prop_assert_eq!(c.total, n * n);
        prop_assert_eq!(c.adjacency, c.similarity);
        prop_assert_eq!(c.diagonal, n);
        prop_assert_eq!(c.adjacency + c.similarity + c.diagonal, c.total);
    }
}

#[test]
fn ninety_five_nodes() {
    let g = common::random_graph(&mut common::rng(0), 95, 1, 0.0, 0.0);
    let c = g.stats().cell_counts;
    assert_eq!((c.total, c.adjacency, c.similarity, c.diagonal), (9025, 4465, 4465, 95));
}

#[test]
fn csv_pair_matches_json() {
    let nodes = "id,label,x,y\na,Alpha,1,\nb,,2,5\n";
    let edges = "source,target,weight\na,b,3\n";
    let g = parse_dataset(DatasetBytes::CsvPair { nodes: nodes.as_bytes(), edges: edges.as_bytes() }).unwrap();
    let j = parse_json(br#"{"nodes":[{"id":"a","label":"Alpha","attrs":{"x":1,"y":null}},{"id":"b","attrs":{"x":2,"y":5}}],"edges":[{"source":"a","target":"b","weight":3}]}"#).unwrap();
    assert_eq!(g, j);
    assert_eq!(g.node(0).value("y"), None);
}

#[test]
fn invalid_datasets() {
    let bad = |json: &str| parse_json(json.as_bytes()).unwrap_err();
    assert!(matches!(bad("{"), GraphError::Parse(_)));
    assert!(matches!(bad(r#"{"nodes":[{"id":"a"},{"id":"a"}]}"#), GraphError::DuplicateNode(_)));
    assert!(matches!(bad(r#"{"nodes":[{"id":"a"}],"edges":[{"source":"a","target":"z"}]}"#), GraphError::DanglingEndpoint { .. }));
    assert!(matches!(bad(r#"{"nodes":[{"id":"a"}],"edges":[{"source":"a","target":"a"}]}"#), GraphError::SelfLoop { .. }));
    let two = r#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[{"source":"a","target":"b"},{"source":"b","target":"a"}]}"#;
    assert!(matches!(bad(two), GraphError::DuplicateEdge { .. }));
    let neg = r#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[{"source":"a","target":"b","weight":-1}]}"#;
    assert!(matches!(bad(neg), GraphError::InvalidWeight { .. }));
    assert!(parse_csv_pair(b"id,x\na,zz\n", b"source,target\n").is_err());
}
