use proptest::prelude::*;

use rmc_core::layout::{lod_for_size, solve_axis, solve_layout, FocusRegion, FocusSpan, Lod, Viewport};

/// Up to three spans that do not overlap, built from cut points.
fn spans(count: usize) -> impl Strategy<Value = Vec<FocusSpan>> {
    prop::collection::vec((0..count, 1usize..6, 1.0f64..600.0), 0..4).prop_map(move |raw| {
        let mut out: Vec<FocusSpan> = Vec::new();
        for (start, len, req) in raw {
            let len = len.min(count - start);
            let s = FocusSpan { start, length: len, requested: req };
            if out.iter().all(|o| s.start + s.length <= o.start || o.start + o.length <= s.start) {
                out.push(s);
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn extents_fill_the_axis(count in 1usize..200, extent in 50.0f64..2000.0, sp in (1usize..200).prop_flat_map(spans)) {
        let sp: Vec<FocusSpan> = sp.into_iter().filter(|s| s.start + s.length <= count).collect();
        let axis = solve_axis(count, &sp, extent, 1.0).unwrap();
        let sum: f64 = axis.extents().iter().sum();
        prop_assert!((sum - extent).abs() < 0.5, "{} vs {}", sum, extent);
        prop_assert!(axis.extents().iter().all(|e| *e >= 0.0));
    }

    #[test]
    fn growing_a_focus_never_widens_context(count in 2usize..150, extent in 100.0f64..1500.0, len in 1usize..5, req in 1.0f64..500.0, grow in 1.0f64..400.0) {
        let len = len.min(count - 1);
        let a = solve_axis(count, &[FocusSpan { start: 0, length: len, requested: req }], extent, 1.0).unwrap();
        let b = solve_axis(count, &[FocusSpan { start: 0, length: len, requested: req + grow }], extent, 1.0).unwrap();
        prop_assert!(b.extent(count - 1) <= a.extent(count - 1) + 1e-9);
        prop_assert!(b.extent(0) >= a.extent(0) - 1e-9);
    }
}

#[test]
fn overlapping_spans_are_rejected() {
    let s = [FocusSpan { start: 0, length: 3, requested: 50.0 }, FocusSpan { start: 2, length: 2, requested: 50.0 }];
    assert!(solve_axis(10, &s, 100.0, 1.0).is_err());
    let zero = [FocusSpan { start: 0, length: 0, requested: 50.0 }];
    assert!(solve_axis(10, &zero, 100.0, 1.0).is_err());
}

#[test]
fn region_rect_covers_its_cells() {
    let r = FocusRegion { id: 7, row0: 2, rows: 3, col0: 10, cols: 2, requested_w: 200.0, requested_h: 300.0 };
    let l = solve_layout(20, &[r], &Viewport::new(800.0, 800.0)).unwrap();
    let rect = l.rect_of(7).unwrap();
    assert!((rect.w - 200.0).abs() < 1e-9 && (rect.h - 300.0).abs() < 1e-9);
    let first = l.cell_rect(2, 10);
    assert_eq!((first.x, first.y), (rect.x, rect.y));
}

#[test]
fn lod_thresholds_use_the_shorter_side() {
    assert_eq!(lod_for_size(15.9, 500.0), Lod::Pixel);
    assert_eq!(lod_for_size(16.0, 16.0), Lod::Miniature);
    assert_eq!(lod_for_size(48.0, 300.0), Lod::Compact);
    assert_eq!(lod_for_size(120.0, 120.0), Lod::Medium);
}
