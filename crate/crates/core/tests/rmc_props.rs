mod common;

use proptest::prelude::*;
use rand::Rng;

use rmc_core::ordering::{order_nodes, OrderStrategy};
use rmc_core::rmc::{collect_objects, AxisMode, DefaultAttributes, MatrixContext, Region, RmcError, RmcState, ScaleBy, Side, What};
use rmc_core::layout::Viewport;

fn ctx(n: usize) -> MatrixContext {
    MatrixContext { n, viewport: Viewport::new(900.0, 900.0) }
}

fn defaults() -> DefaultAttributes {
    DefaultAttributes { nodes: vec!["a0".into()], edges: vec!["weight".into()] }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn object_counts_match_enumeration(seed in any::<u64>(), n in 2usize..30) {
        let mut r = common::rng(seed);
        let g = common::random_graph(&mut r, n, 2, 0.0, 0.3);
        let ord = order_nodes(&g, &OrderStrategy::DegreeDesc, None).unwrap();
        let order: Vec<usize> = (0..n).map(|p| ord.node_at(p)).collect();
        let (row0, col0) = (r.gen_range(0..n), r.gen_range(0..n));
        let (rows, cols) = (r.gen_range(1..=n - row0), r.gen_range(1..=n - col0));
        let region = Region::new(row0, col0, rows, cols);
        let (nodes, edges) = common::brute_force_objects(&g, &order, region.row_range(), region.col_range());
        let got_nodes = collect_objects(&region, What::Nodes, &g, &ord);
        let got_edges = collect_objects(&region, What::Edges, &g, &ord);
        prop_assert!(got_nodes.len() <= rows + cols);
        prop_assert!(got_edges.len() <= rows * cols);
        prop_assert_eq!(got_nodes.indices().iter().copied().collect::<std::collections::BTreeSet<_>>(), nodes);
        prop_assert_eq!(got_edges.indices().iter().copied().collect::<std::collections::BTreeSet<_>>(), edges);
        prop_assert_eq!(got_nodes.len(), got_nodes.indices().iter().collect::<std::collections::BTreeSet<_>>().len());
    }

    #[test]
    fn live_regions_stay_disjoint(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let n = 40;
        let mut st = RmcState::new();
        for _ in 0..30 {
            let (row0, col0) = (r.gen_range(0..n), r.gen_range(0..n));
            let region = Region::new(row0, col0, r.gen_range(1..=(n - row0).min(6)), r.gen_range(1..=(n - col0).min(6)));
            let _ = st.create(&ctx(n), region, r.gen_bool(0.5), None, &defaults());
        }
        let live = st.rmcs();
        for (i, a) in live.iter().enumerate() {
            prop_assert!(a.region.in_bounds(n));
            for b in &live[i + 1..] {
                prop_assert!(!a.region.conflicts_with(&b.region));
            }
        }
    }
}

#[test]
fn fig5_cases() {
    let g = common::random_graph(&mut common::rng(3), 10, 2, 0.0, 0.5);
    let ord = order_nodes(&g, &OrderStrategy::Input, None).unwrap();
    assert_eq!(collect_objects(&Region::new(0, 6, 4, 1), What::Nodes, &g, &ord).len(), 5);
    assert_eq!(collect_objects(&Region::new(0, 6, 2, 2), What::Nodes, &g, &ord).len(), 4);
}

#[test]
fn lifecycle_errors() {
    let mut st = RmcState::new();
    let c = ctx(10);
    let id = st.create(&c, Region::new(0, 5, 2, 2), false, None, &defaults()).unwrap();
    assert!(matches!(st.create(&c, Region::new(1, 8, 1, 1), false, None, &defaults()), Err(RmcError::Overlap(_))));
    assert!(matches!(st.create(&c, Region::new(9, 9, 2, 1), false, None, &defaults()), Err(RmcError::OutOfBounds(..))));
    assert_eq!(st.scale(&c, id, ScaleBy::Factor(0.0), AxisMode::Both), Err(RmcError::InvalidScale));
    assert_eq!(st.scale(&c, 99, ScaleBy::Factor(2.0), AxisMode::Both), Err(RmcError::UnknownRmc(99)));
    let g = common::random_graph(&mut common::rng(4), 10, 1, 0.0, 0.5);
    let ord = order_nodes(&g, &OrderStrategy::Input, None).unwrap();
    assert_eq!(st.resize(&c, id, Side::Bottom, -2, &g, &ord), Err(RmcError::Vanish));
    st.resize(&c, id, Side::Bottom, 1, &g, &ord).unwrap();
    assert_eq!(st.get(id).unwrap().region.rows, 3);
    st.dismiss(id).unwrap();
    assert!(st.rmcs().is_empty());
}
