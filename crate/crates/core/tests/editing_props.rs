mod common;

use proptest::prelude::*;
use rand::Rng;

use rmc_core::editing::{commit_edit, redo, undo, EditError, EditSource, History};
use rmc_core::model::MatrixModel;
use rmc_core::scene::ObjectRef;
use rmc_core::similarity::build_similarity_matrix;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn undo_all_restores_and_redo_replays(seed in any::<u64>(), steps in 1usize..25) {
        let mut r = common::rng(seed);
        let mut model = MatrixModel::new(common::random_graph(&mut r, 8, 3, 0.2, 0.4));
        let start = model.clone();
        let mut history = History::default();
        let edges: Vec<_> = model.graph.edges().iter().map(|e| e.key()).collect();
        for stamp in 0..steps as u64 {
            let (object, attr) = if edges.is_empty() || r.gen_bool(0.7) {
                (ObjectRef::Node(format!("v{}", r.gen_range(0..8))), format!("a{}", r.gen_range(0..3)))
            } else {
                (ObjectRef::Edge(edges[r.gen_range(0..edges.len())].clone()), "weight".to_string())
            };
            let old = model.value_of(&object, &attr).unwrap();
            // sometimes leave the observed range to force renormalization
            let v = r.gen_range(0.0..80.0);
            commit_edit(&mut model, &mut history, &object, &attr, old, v, EditSource::NumericEntry, stamp).unwrap();
            prop_assert_eq!(&model.similarity, &build_similarity_matrix(&model.graph, &model.sim_config).unwrap());
        }
        let end = model.clone();
        while undo(&mut model, &mut history).unwrap().is_some() {}
        prop_assert_eq!(&model, &start);
        while redo(&mut model, &mut history).unwrap().is_some() {}
        prop_assert_eq!(&model, &end);
    }
}

#[test]
fn rejected_values_leave_no_trace() {
    let mut model = MatrixModel::new(common::random_graph(&mut common::rng(9), 4, 2, 0.0, 1.0));
    let before = model.clone();
    let mut h = History::default();
    let node = ObjectRef::Node("v0".into());
    let old = model.value_of(&node, "a0").unwrap();
    assert!(matches!(commit_edit(&mut model, &mut h, &node, "a0", old, f64::NAN, EditSource::Drag, 0), Err(EditError::NonFinite(_))));
    let edge = ObjectRef::Edge(model.graph.edges()[0].key());
    let w = model.value_of(&edge, "weight").unwrap();
    assert!(matches!(commit_edit(&mut model, &mut h, &edge, "weight", w, -1.0, EditSource::Drag, 1), Err(EditError::NegativeWeight(_))));
    assert_eq!(model, before);
    assert!(!h.can_undo());
}
