mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use rmc_core::similarity::{build_similarity_matrix, update_similarity_row, SimilarityConfig, SimilarityError};

fn attrs(d: usize) -> Vec<String> {
    (0..d).map(|k| format!("a{k}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_agrees_with_oracle(seed in any::<u64>(), n in 1usize..20, d in 1usize..8) {
        let mut r = common::rng(seed);
        let g = common::random_graph(&mut r, n, d, 0.2, 0.1);
        let names = attrs(d);
        let m = build_similarity_matrix(&g, &SimilarityConfig::new(names.clone())).unwrap();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        for i in 0..n {
            prop_assert_eq!(m.get(i, i), Some(1.0));
            for j in 0..n {
                prop_assert_eq!(m.get(i, j), m.get(j, i));
                let want = common::oracle_similarity(&g, &refs, i, j);
                match (m.get(i, j), want) {
                    (Some(a), Some(b)) => {
                        prop_assert!((0.0..=1.0).contains(&a));
                        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
                    }
                    (a, b) => prop_assert_eq!(a, b),
                }
            }
        }
    }

    #[test]
    fn selection_order_is_irrelevant(seed in any::<u64>(), n in 2usize..15, d in 2usize..8) {
        let mut r = common::rng(seed);
        let g = common::random_graph(&mut r, n, d, 0.2, 0.0);
        let mut names = attrs(d);
        let a = build_similarity_matrix(&g, &SimilarityConfig::new(names.clone())).unwrap();
        names.shuffle(&mut r);
        let b = build_similarity_matrix(&g, &SimilarityConfig::new(names)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn row_update_equals_rebuild(seed in any::<u64>(), n in 2usize..20, d in 1usize..8) {
        let mut r = common::rng(seed);
        let mut g = common::random_graph(&mut r, n, d, 0.2, 0.0);
        let cfg = SimilarityConfig::new(attrs(d));
        let mut m = build_similarity_matrix(&g, &cfg).unwrap();
        for _ in 0..5 {
            let id = format!("v{}", r.gen_range(0..n));
            let attr = format!("a{}", r.gen_range(0..d));
            let def = g.node_attribute(&attr).unwrap().clone();
            // stay inside the observed range so normalization is unchanged
            let v = if r.gen_bool(0.2) { None } else { Some(r.gen_range(def.observed_min..=def.observed_max)) };
            g.set_node_value(&id, &attr, v).unwrap();
            update_similarity_row(&mut m, &g, &cfg, &id).unwrap();
            prop_assert_eq!(&m, &build_similarity_matrix(&g, &cfg).unwrap());
        }
    }
}

#[test]
fn empty_and_unknown_selections_fail() {
    let g = common::random_graph(&mut common::rng(1), 3, 2, 0.0, 0.0);
    assert_eq!(build_similarity_matrix(&g, &SimilarityConfig::new(Vec::<String>::new())), Err(SimilarityError::EmptySelection));
    assert!(matches!(build_similarity_matrix(&g, &SimilarityConfig::new(["zz"])), Err(SimilarityError::UnknownAttribute(_))));
}
