//! Bifocal focus+context layout of matrix rows and columns, and the
//! level-of-detail breakpoints keyed to cell size.
//!
//! Focus spans (the row or column ranges of responsive cells) receive their
//! requested extents; every other index shares the remaining space equally.
//! Extents are kept as reals so that repeated zooming does not drift; the sum
//! over an axis always equals the viewport extent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MINIATURE_PX: f64 = 16.0;
pub const COMPACT_PX: f64 = 48.0;
pub const MEDIUM_PX: f64 = 120.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("axis has no rows or columns")]
    EmptyAxis,
    #[error("focus span {start}+{length} is outside 0..{count}")]
    SpanOutOfBounds { start: usize, length: usize, count: usize },
    #[error("focus spans starting at {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("invalid focus request {0}")]
    InvalidRequest(f64),
    #[error("invalid viewport extent {0}")]
    InvalidViewport(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub width: f64,
    pub height: f64,
    #[serde(default = "default_min_context")]
    pub min_context_extent: f64,
}

fn default_min_context() -> f64 {
    1.0
}

impl Viewport {
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            min_context_extent: 1.0,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.width > 0.0
            && self.height > 0.0
            && self.min_context_extent > 0.0
            && self.width.is_finite()
            && self.height.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    pub fn inset(&self, d: f64) -> Rect {
        let dx = d.min(self.w / 2.0);
        let dy = d.min(self.h / 2.0);
        Rect::new(self.x + dx, self.y + dy, self.w - 2.0 * dx, self.h - 2.0 * dy)
    }

    pub fn contains_point(&self, x: f64, y: f64, eps: f64) -> bool {
        x >= self.x - eps && x <= self.right() + eps && y >= self.y - eps && y <= self.bottom() + eps
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        (x1 > x0 && y1 > y0).then(|| Rect::new(x0, y0, x1 - x0, y1 - y0))
    }

    pub fn area(&self) -> f64 {
        self.w.max(0.0) * self.h.max(0.0)
    }
}

/// Per-index pixel extents along one axis, with prefix offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisLayout {
    extents: Vec<f64>,
    offsets: Vec<f64>,
}

impl AxisLayout {
    fn from_extents(extents: Vec<f64>) -> Self {
        let mut offsets = Vec::with_capacity(extents.len() + 1);
        let mut acc = 0.0;
        offsets.push(0.0);
        for e in &extents {
            acc += e;
            offsets.push(acc);
        }
        Self { extents, offsets }
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn len(&self) -> usize {
        self.extents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extents.is_empty()
    }

    pub fn extent(&self, i: usize) -> f64 {
        self.extents[i]
    }

    /// Start coordinate of index `i`; `offset(len())` is the total.
    pub fn offset(&self, i: usize) -> f64 {
        self.offsets[i]
    }

    pub fn total(&self) -> f64 {
        self.offsets[self.extents.len()]
    }

    /// Pixel range covered by `start..start + len`.
    pub fn span(&self, start: usize, len: usize) -> (f64, f64) {
        let a = self.offsets[start];
        (a, self.offsets[start + len] - a)
    }

    /// Index containing coordinate `p`, if any.
    pub fn index_at(&self, p: f64) -> Option<usize> {
        if self.extents.is_empty() || p < 0.0 || p >= self.total() {
            return None;
        }
        let i = self.offsets.partition_point(|&o| o <= p);
        Some(i.saturating_sub(1).min(self.extents.len() - 1))
    }

    /// Integer pixel boundaries: rounded offsets, so rounded extents still
    /// sum to the rounded total.
    pub fn pixel_boundaries(&self) -> Vec<i64> {
        self.offsets.iter().map(|o| o.round() as i64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocusSpan {
    pub start: usize,
    pub length: usize,
    pub requested: f64,
}

pub fn solve_axis(
    count: usize,
    spans: &[FocusSpan],
    extent: f64,
    min_context: f64,
) -> Result<AxisLayout, LayoutError> {
    if count == 0 {
        return Err(LayoutError::EmptyAxis);
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(LayoutError::InvalidViewport(extent));
    }
    let mut sorted: Vec<&FocusSpan> = spans.iter().collect();
    sorted.sort_by_key(|s| s.start);
    for s in &sorted {
        if s.length == 0 || s.start + s.length > count {
            return Err(LayoutError::SpanOutOfBounds {
                start: s.start,
                length: s.length,
                count,
            });
        }
        if !(s.requested > 0.0 && s.requested.is_finite()) {
            return Err(LayoutError::InvalidRequest(s.requested));
        }
    }
    for w in sorted.windows(2) {
        if w[0].start + w[0].length > w[1].start {
            return Err(LayoutError::Overlap(w[0].start, w[1].start));
        }
    }

    let focus_cells: usize = sorted.iter().map(|s| s.length).sum();
    let context_cells = count - focus_cells;
    let requested: f64 = sorted.iter().map(|s| s.requested).sum();
    // never let the context floor alone exceed the viewport
    let floor = min_context.min(extent / count as f64);

    let (context, scale) = if context_cells == 0 {
        (0.0, extent / requested)
    } else {
        let share = (extent - requested) / context_cells as f64;
        if share >= floor {
            (share, 1.0)
        } else {
            let remaining = extent - floor * context_cells as f64;
            (floor, remaining / requested)
        }
    };

    let mut extents = vec![context; count];
    for s in &sorted {
        let per = s.requested * scale / s.length as f64;
        for e in &mut extents[s.start..s.start + s.length] {
            *e = per;
        }
    }
    Ok(AxisLayout::from_extents(extents))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lod {
    Pixel,
    Miniature,
    Compact,
    Medium,
}

pub fn lod_for_size(w: f64, h: f64) -> Lod {
    let s = w.min(h);
    if s < MINIATURE_PX {
        Lod::Pixel
    } else if s < COMPACT_PX {
        Lod::Miniature
    } else if s < MEDIUM_PX {
        Lod::Compact
    } else {
        Lod::Medium
    }
}

/// Row and column index range of a responsive cell plus its requested size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusRegion {
    pub id: u64,
    pub row0: usize,
    pub rows: usize,
    pub col0: usize,
    pub cols: usize,
    pub requested_w: f64,
    pub requested_h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixLayout {
    pub rows: AxisLayout,
    pub cols: AxisLayout,
    /// Pixel rect per focus region id, in input order.
    pub rects: Vec<(u64, Rect)>,
}

impl MatrixLayout {
    pub fn cell_rect(&self, row: usize, col: usize) -> Rect {
        Rect::new(
            self.cols.offset(col),
            self.rows.offset(row),
            self.cols.extent(col),
            self.rows.extent(row),
        )
    }

    pub fn rect_of(&self, id: u64) -> Option<Rect> {
        self.rects.iter().find(|(i, _)| *i == id).map(|(_, r)| *r)
    }
}

/// Lays out an `n × n` matrix with the given focus regions. Regions must be
/// pairwise disjoint in both their row and column ranges.
pub fn solve_layout(n: usize, regions: &[FocusRegion], vp: &Viewport) -> Result<MatrixLayout, LayoutError> {
    if !vp.is_valid() {
        return Err(LayoutError::InvalidViewport(vp.width.min(vp.height)));
    }
    let row_spans: Vec<FocusSpan> = regions
        .iter()
        .map(|r| FocusSpan {
            start: r.row0,
            length: r.rows,
            requested: r.requested_h,
        })
        .collect();
    let col_spans: Vec<FocusSpan> = regions
        .iter()
        .map(|r| FocusSpan {
            start: r.col0,
            length: r.cols,
            requested: r.requested_w,
        })
        .collect();
    let rows = solve_axis(n, &row_spans, vp.height, vp.min_context_extent)?;
    let cols = solve_axis(n, &col_spans, vp.width, vp.min_context_extent)?;
    let rects = regions
        .iter()
        .map(|r| {
            let (y, h) = rows.span(r.row0, r.rows);
            let (x, w) = cols.span(r.col0, r.cols);
            (r.id, Rect::new(x, y, w, h))
        })
        .collect();
    Ok(MatrixLayout { rows, cols, rects })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(start: usize, length: usize, requested: f64) -> FocusSpan {
        FocusSpan { start, length, requested }
    }

    #[test]
    fn uniform_without_spans() {
        let a = solve_axis(9, &[], 900.0, 1.0).unwrap();
        assert!(a.extents().iter().all(|&e| e == 100.0));
    }

    #[test]
    fn single_focus_conserves() {
        let a = solve_axis(9, &[span(4, 1, 300.0)], 900.0, 1.0).unwrap();
        assert_eq!(a.extent(4), 300.0);
        for i in (0..9).filter(|&i| i != 4) {
            assert_eq!(a.extent(i), 75.0);
        }
    }

    #[test]
    fn focus_is_clamped_when_context_hits_floor() {
        let a = solve_axis(10, &[span(0, 1, 95.0)], 100.0, 1.0).unwrap();
        assert_eq!(a.extent(0), 91.0);
        assert!(a.extents()[1..].iter().all(|&e| e == 1.0));
        assert!((a.total() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn all_focus_fills_viewport() {
        let a = solve_axis(4, &[span(0, 2, 50.0), span(2, 2, 150.0)], 100.0, 1.0).unwrap();
        assert_eq!(a.extents(), &[12.5, 12.5, 37.5, 37.5]);
    }

    #[test]
    fn axis_errors() {
        assert_eq!(solve_axis(0, &[], 10.0, 1.0).unwrap_err(), LayoutError::EmptyAxis);
        assert_eq!(
            solve_axis(5, &[span(0, 2, 10.0), span(1, 2, 10.0)], 100.0, 1.0).unwrap_err(),
            LayoutError::Overlap(0, 1)
        );
        assert!(matches!(
            solve_axis(5, &[span(4, 2, 10.0)], 100.0, 1.0),
            Err(LayoutError::SpanOutOfBounds { .. })
        ));
    }

    #[test]
    fn lod_breakpoints() {
        assert_eq!(lod_for_size(10.0, 10.0), Lod::Pixel);
        assert_eq!(lod_for_size(60.0, 300.0), Lod::Compact);
        assert_eq!(lod_for_size(200.0, 200.0), Lod::Medium);
        assert_eq!(lod_for_size(16.0, 47.9), Lod::Miniature);
        assert!(Lod::Pixel < Lod::Miniature && Lod::Compact < Lod::Medium);
    }

    #[test]
    fn layout_cells() {
        let l = solve_layout(95, &[], &Viewport::new(950.0, 950.0)).unwrap();
        assert!(l.rows.extents().iter().chain(l.cols.extents()).all(|&e| (e - 10.0).abs() < 1e-9));

        let region = FocusRegion { id: 7, row0: 3, rows: 3, col0: 3, cols: 3, requested_w: 300.0, requested_h: 300.0 };
        let l = solve_layout(9, &[region], &Viewport::new(900.0, 900.0)).unwrap();
        assert_eq!(l.rect_of(7), Some(Rect::new(300.0, 300.0, 300.0, 300.0)));
        assert_eq!(l.cell_rect(0, 0), Rect::new(0.0, 0.0, 100.0, 100.0));
        assert_eq!(l.cell_rect(8, 8), Rect::new(800.0, 800.0, 100.0, 100.0));
    }

    #[test]
    fn index_lookup_and_rounding() {
        let a = solve_axis(3, &[], 10.0, 1.0).unwrap();
        assert_eq!(a.index_at(0.0), Some(0));
        assert_eq!(a.index_at(3.4), Some(1));
        assert_eq!(a.index_at(9.99), Some(2));
        assert_eq!(a.index_at(10.0), None);
        let px = a.pixel_boundaries();
        assert_eq!(px.first(), Some(&0));
        assert_eq!(px.last(), Some(&10));
    }
}
