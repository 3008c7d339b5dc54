//! Scene generation: the overview matrix, the responsive cells with their
//! embedded charts, coordinated highlighting and the hover cross-hair.

pub mod embed;
pub mod nodelink;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{Color, ColorScale, ColorScheme, DIAGONAL_COLOR};
use crate::graph::{EdgeKey, GraphError, MultivariateGraph};
use crate::layout::{lod_for_size, solve_layout, LayoutError, MatrixLayout, Rect, Viewport};
use crate::model::MatrixModel;
use crate::ordering::Ordering;
use crate::rmc::{check_vis, collect_objects, unit_cell_objects, ObjectSet, Placement, Rmc, RmcError, RmcState, VisKind, VisSpec, What};
use crate::scene::{Anchor, Geometry, Mark, MarkRole, ObjectRef, Scene, Style};
use crate::similarity::SimilarityMatrix;

pub use embed::{render_embedded, EmbedInput};
pub use nodelink::{layout_nodelink, DEFAULT_SEED};

/// Width of the label gutters left of and above the matrix.
pub const GUTTER: f64 = 72.0;
/// Rows (columns) narrower than this get no label.
pub const LABEL_MIN_EXTENT: f64 = 8.0;
pub const MAX_ZOOM: f64 = 64.0;

pub const Z_CELL: i32 = 0;
pub const Z_MATRIX_LABEL: i32 = 4;
pub const Z_GUIDE: i32 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Rmc(#[from] RmcError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot highlight {0:?}")]
    NotHighlightable(ObjectRef),
}

/// Presentation settings that are not part of the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct View {
    /// Size of the matrix area; the scene adds the label gutters.
    pub viewport: Viewport,
    pub scheme: ColorScheme,
    pub zoom: f64,
    pub pan: (f64, f64),
    pub seed: u64,
}

impl View {
    pub fn new(viewport: Viewport) -> Self {
        Self { viewport, scheme: ColorScheme::Standard, zoom: 1.0, pan: (0.0, 0.0), seed: DEFAULT_SEED }
    }

    /// Sets zoom and pan, keeping the zoomed matrix covering the area.
    pub fn set_zoom_pan(&mut self, zoom: f64, pan: (f64, f64)) {
        let zoom = if zoom.is_finite() { zoom.clamp(1.0, MAX_ZOOM) } else { 1.0 };
        let clamp = |p: f64, extent: f64| if p.is_finite() { p.clamp(extent - extent * zoom, 0.0) } else { 0.0 };
        self.zoom = zoom;
        self.pan = (clamp(pan.0, self.viewport.width), clamp(pan.1, self.viewport.height));
    }

    pub fn scene_viewport(&self) -> Viewport {
        Viewport { width: self.viewport.width + GUTTER, height: self.viewport.height + GUTTER, ..self.viewport }
    }

    pub fn matrix_area(&self) -> Rect {
        Rect::new(GUTTER, GUTTER, self.viewport.width, self.viewport.height)
    }

    fn zoomed_viewport(&self) -> Viewport {
        Viewport { width: self.viewport.width * self.zoom, height: self.viewport.height * self.zoom, ..self.viewport }
    }

    fn origin(&self) -> (f64, f64) {
        (GUTTER + self.pan.0, GUTTER + self.pan.1)
    }
}

/// Nodes and edges whose marks are emphasized.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighlightSet {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeSet<EdgeKey>,
}

impl HighlightSet {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn matches(&self, r: &ObjectRef) -> bool {
        match r {
            ObjectRef::Node(id) => self.nodes.contains(id),
            ObjectRef::Edge(k) => self.edges.contains(k),
            ObjectRef::Pair(a, b) => self.nodes.contains(a) && self.nodes.contains(b),
        }
    }
}

/// A hovered node selects itself; a hovered edge selects itself and both
/// endpoints.
pub fn highlight_resolve(g: &MultivariateGraph, hovered: &ObjectRef) -> Result<HighlightSet, SceneError> {
    let mut set = HighlightSet::default();
    match hovered {
        ObjectRef::Node(id) => {
            g.node_by_id(id).ok_or_else(|| GraphError::UnknownNode(id.clone()))?;
            set.nodes.insert(id.clone());
        }
        ObjectRef::Edge(k) => {
            g.edge_by_key(k).ok_or_else(|| GraphError::UnknownEdge(k.source.clone(), k.target.clone()))?;
            set.edges.insert(k.clone());
            set.nodes.insert(k.source.clone());
            set.nodes.insert(k.target.clone());
        }
        other => return Err(SceneError::NotHighlightable(other.clone())),
    }
    Ok(set)
}

/// Everything a scene depends on.
pub struct SceneInput<'a> {
    pub model: &'a MatrixModel,
    pub rmcs: &'a RmcState,
    pub view: &'a View,
    pub hover: Option<&'a ObjectRef>,
    pub highlight: &'a HighlightSet,
}

struct Colors {
    weight: ColorScale,
    sim: ColorScale,
}

impl Colors {
    fn new(scheme: ColorScheme, g: &MultivariateGraph) -> Self {
        Self { weight: ColorScale::edge_weight(scheme, g.max_weight()), sim: ColorScale::similarity(scheme) }
    }

    /// Color and object of overview cell (row, col).
    fn cell(&self, g: &MultivariateGraph, sim: &SimilarityMatrix, ord: &Ordering, row: usize, col: usize) -> (Color, Option<ObjectRef>) {
        let (a, b) = (ord.node_at(row), ord.node_at(col));
        if row == col {
            (DIAGONAL_COLOR, Some(ObjectRef::Node(g.node(a).id.clone())))
        } else if row > col {
            match g.edge_between(a, b) {
                Some(e) => (self.weight.map(Some(e.weight)), Some(ObjectRef::Edge(e.key()))),
                None => (self.weight.missing_color, None),
            }
        } else {
            let r = ObjectRef::Pair(g.node(a).id.clone(), g.node(b).id.clone());
            (self.sim.map(sim.get(a, b)), Some(r))
        }
    }
}

/// Matrix layout for a view, relative to the matrix origin: focus
/// requests are scaled by the zoom factor before solving.
pub fn solve_view_layout(model: &MatrixModel, rmcs: &RmcState, view: &View) -> Result<MatrixLayout, SceneError> {
    let zoom = view.zoom;
    let regions: Vec<_> = rmcs
        .rmcs()
        .iter()
        .map(|r| {
            let mut f = r.focus_region();
            f.requested_w *= zoom;
            f.requested_h *= zoom;
            f
        })
        .collect();
    Ok(solve_layout(model.graph.node_count(), &regions, &view.zoomed_viewport())?)
}

pub fn generate_scene(input: &SceneInput) -> Result<Scene, SceneError> {
    let model = input.model;
    let g = &model.graph;
    let ord = &model.ordering;
    let view = input.view;
    let n = g.node_count();
    let mut scene = Scene::new(view.scene_viewport());
    if n == 0 {
        return Ok(scene);
    }
    let mut layout = solve_view_layout(model, input.rmcs, view)?;
    let (ox, oy) = view.origin();
    for (_, r) in layout.rects.iter_mut() {
        r.x += ox;
        r.y += oy;
    }
    let cell_rect = |layout: &MatrixLayout, row: usize, col: usize| {
        let mut r = layout.cell_rect(row, col);
        r.x += ox;
        r.y += oy;
        r
    };
    let area = view.matrix_area();
    let colors = Colors::new(view.scheme, g);

    // overview cells outside responsive cells
    let mut rmc_col = vec![None; n];
    for (k, rmc) in input.rmcs.rmcs().iter().enumerate() {
        for c in rmc.region.col_range() {
            rmc_col[c] = Some(k);
        }
    }
    let mut rmc_row = vec![None; n];
    for (k, rmc) in input.rmcs.rmcs().iter().enumerate() {
        for r in rmc.region.row_range() {
            rmc_row[r] = Some(k);
        }
    }
    for row in 0..n {
        for col in 0..n {
            if rmc_row[row].is_some() && rmc_row[row] == rmc_col[col] {
                continue;
            }
            let Some(rect) = cell_rect(&layout, row, col).intersection(&area) else { continue };
            let (color, r) = colors.cell(g, &model.similarity, ord, row, col);
            scene.push(Mark::new(Geometry::rect(rect), Style::fill(color), MarkRole::Cell, Z_CELL).with_ref(r));
        }
    }

    for rmc in input.rmcs.rmcs() {
        let rect = layout.rect_of(rmc.id).expect("every cell is laid out");
        for m in rmc_marks(g, &model.similarity, ord, &colors, rmc, rect, &layout, (ox, oy), view.seed)? {
            scene.push(m);
        }
    }

    matrix_labels(&mut scene, g, ord, &layout, (ox, oy), &area);

    if let Some(h) = input.hover {
        if let Some((row, col)) = hover_cell(g, ord, h) {
            let r = cell_rect(&layout, row, col);
            let (cx, cy) = r.center();
            let style = Style::stroke(Color::HIGHLIGHT, 1.0).with_opacity(0.6);
            if cx >= area.x && cx <= area.right() {
                scene.push(Mark::new(Geometry::Line { x1: cx, y1: area.y, x2: cx, y2: area.bottom() }, style.clone(), MarkRole::Guide, Z_GUIDE));
            }
            if cy >= area.y && cy <= area.bottom() {
                scene.push(Mark::new(Geometry::Line { x1: area.x, y1: cy, x2: area.right(), y2: cy }, style, MarkRole::Guide, Z_GUIDE));
            }
        }
    }

    clip_to(&mut scene, &area);
    if !input.highlight.is_empty() {
        emphasize(&mut scene, input.highlight);
    }
    scene.sort();
    Ok(scene)
}

/// Matrix cell the cross-hair goes through: the diagonal for a node, the
/// adjacency cell for an edge.
fn hover_cell(g: &MultivariateGraph, ord: &Ordering, h: &ObjectRef) -> Option<(usize, usize)> {
    match h {
        ObjectRef::Node(id) => {
            let p = ord.position_of(g.node_index(id)?);
            Some((p, p))
        }
        ObjectRef::Edge(k) => {
            let a = ord.position_of(g.node_index(&k.source)?);
            let b = ord.position_of(g.node_index(&k.target)?);
            Some((a.max(b), a.min(b)))
        }
        ObjectRef::Pair(a, b) => {
            let a = ord.position_of(g.node_index(a)?);
            let b = ord.position_of(g.node_index(b)?);
            Some((a.min(b), a.max(b)))
        }
    }
}

/// Background color of a responsive cell: its own overview color for a
/// unit cell, the color of the mean cell value for a meta cell.
fn meta_residue(g: &MultivariateGraph, sim: &SimilarityMatrix, ord: &Ordering, colors: &Colors, rmc: &Rmc) -> Color {
    let region = rmc.region;
    if region.is_pure_diagonal() {
        return DIAGONAL_COLOR;
    }
    let (mut sum, mut count) = (0.0, 0usize);
    for r in region.row_range() {
        for c in region.col_range() {
            if r == c {
                continue;
            }
            let (a, b) = (ord.node_at(r), ord.node_at(c));
            let v = match rmc.what {
                What::Nodes => sim.get(a, b),
                What::Edges => g.edge_between(a, b).map(|e| e.weight),
            };
            if let Some(v) = v {
                sum += v;
                count += 1;
            }
        }
    }
    let mean = (count > 0).then(|| sum / count as f64);
    match rmc.what {
        What::Nodes => colors.sim.map(mean),
        What::Edges => colors.weight.map(mean),
    }
}

fn unit_residue(g: &MultivariateGraph, sim: &SimilarityMatrix, colors: &Colors, objects: &ObjectSet) -> (Color, Option<ObjectRef>) {
    match objects {
        ObjectSet::Nodes(v) if v.len() == 1 => (DIAGONAL_COLOR, Some(ObjectRef::Node(g.node(v[0]).id.clone()))),
        ObjectSet::Nodes(v) => (
            colors.sim.map(sim.get(v[0], v[1])),
            Some(ObjectRef::Pair(g.node(v[0]).id.clone(), g.node(v[1]).id.clone())),
        ),
        ObjectSet::Edges(v) => match v.first() {
            Some(&e) => {
                let e = &g.edges()[e];
                (colors.weight.map(Some(e.weight)), Some(ObjectRef::Edge(e.key())))
            }
            None => (colors.weight.missing_color, None),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn rmc_marks(
    g: &MultivariateGraph,
    sim: &SimilarityMatrix,
    ord: &Ordering,
    colors: &Colors,
    rmc: &Rmc,
    rect: Rect,
    layout: &MatrixLayout,
    origin: (f64, f64),
    seed: u64,
) -> Result<Vec<Mark>, SceneError> {
    match rmc.placement {
        Placement::Meta => {
            let objects = collect_objects(&rmc.region, rmc.what, g, ord);
            let residue = meta_residue(g, sim, ord, colors, rmc);
            let vis = if check_vis(&rmc.vis, Placement::Meta, objects.len()).is_ok() {
                rmc.vis.clone()
            } else {
                VisSpec::bar(rmc.vis.shown_attributes.clone())
            };
            let cell_ref = if rmc.region.cell_count() == 1 { unit_residue(g, sim, colors, &objects).1 } else { None };
            // a node-link diagram shows the sub-graph induced by every node
            // the region spans, whichever half it sits in
            let objects = if vis.kind == VisKind::NodeLink { collect_objects(&rmc.region, What::Nodes, g, ord) } else { objects };
            Ok(render_embedded(&EmbedInput {
                graph: g,
                vis: &vis,
                objects: &objects,
                placement: Placement::Meta,
                rect,
                lod: lod_for_size(rect.w, rect.h),
                residue,
                cell_ref,
                seed,
            })?)
        }
        Placement::UnitGrid => {
            let mut marks = Vec::new();
            for row in rmc.region.row_range() {
                for col in rmc.region.col_range() {
                    let mut cell = layout.cell_rect(row, col);
                    cell.x += origin.0;
                    cell.y += origin.1;
                    let objects = unit_cell_objects(row, col, rmc.what, g, ord);
                    let (residue, cell_ref) = unit_residue(g, sim, colors, &objects);
                    let vis = if check_vis(&rmc.vis, Placement::UnitGrid, objects.len()).is_ok() {
                        rmc.vis.clone()
                    } else {
                        VisSpec::bar(rmc.vis.shown_attributes.clone())
                    };
                    marks.extend(render_embedded(&EmbedInput {
                        graph: g,
                        vis: &vis,
                        objects: &objects,
                        placement: Placement::UnitGrid,
                        rect: cell,
                        lod: lod_for_size(cell.w, cell.h),
                        residue,
                        cell_ref,
                        seed,
                    })?);
                }
            }
            Ok(marks)
        }
    }
}

fn matrix_labels(scene: &mut Scene, g: &MultivariateGraph, ord: &Ordering, layout: &MatrixLayout, origin: (f64, f64), area: &Rect) {
    let fg = Color::DARK_GRAY;
    let room = GUTTER - 6.0;
    for p in 0..g.node_count() {
        let node = g.node(ord.node_at(p));
        let r = Some(ObjectRef::Node(node.id.clone()));
        let h = layout.rows.extent(p);
        let cy = origin.1 + layout.rows.offset(p) + h / 2.0;
        if h >= LABEL_MIN_EXTENT && cy >= area.y && cy <= area.bottom() {
            let font = (h * 0.75).min(11.0);
            if let Some(t) = fit_text(&node.label, room, font) {
                scene.push(
                    Mark::new(
                        Geometry::Text { x: GUTTER - 3.0, y: cy, content: t, anchor: Anchor::End, angle: 0.0 },
                        Style::text(fg, font),
                        MarkRole::RowLabel,
                        Z_MATRIX_LABEL,
                    )
                    .with_ref(r.clone()),
                );
            }
        }
        let w = layout.cols.extent(p);
        let cx = origin.0 + layout.cols.offset(p) + w / 2.0;
        if w >= LABEL_MIN_EXTENT && cx >= area.x && cx <= area.right() {
            let font = (w * 0.75).min(11.0);
            if let Some(t) = fit_text(&node.label, room, font) {
                scene.push(
                    Mark::new(
                        Geometry::Text { x: cx, y: GUTTER - 3.0, content: t, anchor: Anchor::Start, angle: -90.0 },
                        Style::text(fg, font),
                        MarkRole::ColumnLabel,
                        Z_MATRIX_LABEL,
                    )
                    .with_ref(r),
                );
            }
        }
    }
}

fn fit_text(s: &str, width: f64, font: f64) -> Option<String> {
    let max = (width / (0.6 * font)).floor() as usize;
    if s.chars().count() <= max {
        Some(s.to_string())
    } else if max >= 2 {
        Some(s.chars().take(max - 1).chain(std::iter::once('…')).collect())
    } else {
        None
    }
}

/// Clips rects to the matrix area and drops other matrix marks that leave
/// it. Gutter labels are exempt.
fn clip_to(scene: &mut Scene, area: &Rect) {
    const EPS: f64 = 1e-6;
    let inside = |b: &Rect| b.x >= area.x - EPS && b.y >= area.y - EPS && b.right() <= area.right() + EPS && b.bottom() <= area.bottom() + EPS;
    scene.marks.retain_mut(|m| {
        if matches!(m.role, MarkRole::RowLabel | MarkRole::ColumnLabel) {
            return true;
        }
        match &mut m.geometry {
            Geometry::Rect { x, y, w, h } => {
                let r = Rect::new(*x, *y, *w, *h);
                if inside(&r) {
                    return true;
                }
                match r.intersection(area) {
                    Some(c) => {
                        (*x, *y, *w, *h) = (c.x, c.y, c.w, c.h);
                        true
                    }
                    None => false,
                }
            }
            _ => inside(&m.bbox()),
        }
    });
}

fn emphasize(scene: &mut Scene, set: &HighlightSet) {
    for m in &mut scene.marks {
        let Some(r) = &m.object_ref else { continue };
        if !set.matches(r) {
            continue;
        }
        m.emphasized = true;
        match m.geometry {
            Geometry::Text { .. } => m.style.fill = Some(Color::HIGHLIGHT),
            _ => {
                m.style.stroke = Some(Color::HIGHLIGHT);
                m.style.stroke_width = m.style.stroke_width.max(2.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_json;

    fn model() -> MatrixModel {
        MatrixModel::new(
            parse_json(
                br#"{"nodes":[{"id":"a","attrs":{"x":1}},{"id":"b","attrs":{"x":2}},{"id":"c"}],
                     "edges":[{"source":"a","target":"b","weight":3},{"source":"b","target":"c","weight":1}]}"#,
            )
            .unwrap(),
        )
    }

    fn scene(m: &MatrixModel, rmcs: &RmcState, hover: Option<&ObjectRef>, hl: &HighlightSet) -> Scene {
        let view = View::new(Viewport::new(300.0, 300.0));
        generate_scene(&SceneInput { model: m, rmcs, view: &view, hover, highlight: hl }).unwrap()
    }

    #[test]
    fn base_matrix_counts_and_colors() {
        let m = model();
        let s = scene(&m, &RmcState::new(), None, &HighlightSet::default());
        let cells: Vec<_> = s.marks.iter().filter(|k| k.role == MarkRole::Cell).collect();
        assert_eq!(cells.len(), 9);
        let labels = s.marks.iter().filter(|k| matches!(k.role, MarkRole::RowLabel | MarkRole::ColumnLabel)).count();
        assert_eq!(labels, 6);
        assert_eq!(s.marks.len(), 15);
        let full = ColorScale::edge_weight(ColorScheme::Standard, 3.0).endpoints().1;
        assert_eq!(cells.iter().filter(|k| k.style.fill == Some(full)).count(), 1);
        // c has no values, so its similarity cells are undefined
        let missing = ColorScale::similarity(ColorScheme::Standard).missing_color;
        assert_eq!(cells.iter().filter(|k| k.style.fill == Some(missing)).count(), 2);
    }

    #[test]
    fn hover_adds_guides_and_clearing_restores_digest() {
        let m = model();
        let none = HighlightSet::default();
        let base = scene(&m, &RmcState::new(), None, &none);
        let hovered = ObjectRef::Edge(EdgeKey::new("a", "b"));
        let set = highlight_resolve(&m.graph, &hovered).unwrap();
        assert_eq!(set.nodes.len(), 2);
        let hs = scene(&m, &RmcState::new(), Some(&hovered), &set);
        assert_eq!(hs.marks.iter().filter(|k| k.role == MarkRole::Guide).count(), 2);
        assert!(hs.marks.iter().any(|k| k.emphasized));
        assert_ne!(hs.digest(), base.digest());
        assert_eq!(scene(&m, &RmcState::new(), None, &none).digest(), base.digest());
    }

    #[test]
    fn unknown_hover_is_an_error() {
        let m = model();
        assert!(highlight_resolve(&m.graph, &ObjectRef::Node("zz".into())).is_err());
        assert!(highlight_resolve(&m.graph, &ObjectRef::Edge(EdgeKey::new("a", "c"))).is_err());
    }

    #[test]
    fn zoom_keeps_geometry_inside() {
        let m = model();
        let mut view = View::new(Viewport::new(300.0, 300.0));
        view.set_zoom_pan(2.5, (-100.0, -40.0));
        let s = generate_scene(&SceneInput { model: &m, rmcs: &RmcState::new(), view: &view, hover: None, highlight: &HighlightSet::default() }).unwrap();
        let area = view.matrix_area();
        for k in s.marks.iter().filter(|k| k.role == MarkRole::Cell) {
            let b = k.bbox();
            assert!(b.x >= area.x - 1e-9 && b.right() <= area.right() + 1e-9);
        }
        let covered: f64 = s.marks.iter().filter(|k| k.role == MarkRole::Cell).map(|k| k.bbox().area()).sum();
        assert!((covered - 300.0 * 300.0).abs() < 1e-6);
    }
}
