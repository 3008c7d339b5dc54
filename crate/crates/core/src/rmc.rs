//! Responsive matrix cells: user-created focus regions of the overview
//! matrix and the transitions that configure them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{MultivariateGraph, ObjectKind};
use crate::layout::{FocusRegion, Viewport, MINIATURE_PX};
use crate::ordering::Ordering;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RmcError {
    #[error("region overlaps responsive cell {0}")]
    Overlap(u64),
    #[error("region {0:?} is outside the {1}×{1} matrix")]
    OutOfBounds(Region, usize),
    #[error("region would vanish")]
    Vanish,
    #[error("unknown responsive cell {0}")]
    UnknownRmc(u64),
    #[error("a purely diagonal cell has no counterpart in the other half")]
    Diagonal,
    #[error("incompatible visualization: {0}")]
    IncompatibleVis(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("invalid scale request")]
    InvalidScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub row0: usize,
    pub col0: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Region {
    pub fn new(row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self { row0, col0, rows, cols }
    }

    pub fn cell(row: usize, col: usize) -> Self {
        Self::new(row, col, 1, 1)
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn in_bounds(&self, n: usize) -> bool {
        self.rows >= 1 && self.cols >= 1 && self.row0 + self.rows <= n && self.col0 + self.cols <= n
    }

    pub fn is_pure_diagonal(&self) -> bool {
        self.rows == 1 && self.cols == 1 && self.row0 == self.col0
    }

    pub fn transposed(&self) -> Self {
        Self::new(self.col0, self.row0, self.cols, self.rows)
    }

    pub fn row_range(&self) -> std::ops::Range<usize> {
        self.row0..self.row0 + self.rows
    }

    pub fn col_range(&self) -> std::ops::Range<usize> {
        self.col0..self.col0 + self.cols
    }

    /// Whether the two regions share a row or a column index; the layout
    /// solver needs disjoint ranges on both axes.
    pub fn conflicts_with(&self, other: &Region) -> bool {
        let rows = self.row0 < other.row0 + other.rows && other.row0 < self.row0 + self.rows;
        let cols = self.col0 < other.col0 + other.cols && other.col0 < self.col0 + self.cols;
        rows || cols
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    UnitGrid,
    Meta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum What {
    Nodes,
    Edges,
}

impl What {
    pub fn object_kind(self) -> ObjectKind {
        match self {
            What::Nodes => ObjectKind::Node,
            What::Edges => ObjectKind::Edge,
        }
    }

    fn toggled(self) -> Self {
        match self {
            What::Nodes => What::Edges,
            What::Edges => What::Nodes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VisKind {
    Bar,
    Star,
    GroupedBar,
    OverlaidStar,
    DiffBar,
    ParallelCoordinates,
    NodeLink,
}

impl VisKind {
    pub const ALL: [VisKind; 7] = [
        VisKind::Bar,
        VisKind::Star,
        VisKind::GroupedBar,
        VisKind::OverlaidStar,
        VisKind::DiffBar,
        VisKind::ParallelCoordinates,
        VisKind::NodeLink,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisSpec {
    pub kind: VisKind,
    pub shown_attributes: Vec<String>,
}

impl VisSpec {
    pub fn new<S: Into<String>>(kind: VisKind, attrs: impl IntoIterator<Item = S>) -> Self {
        Self {
            kind,
            shown_attributes: attrs.into_iter().map(Into::into).collect(),
        }
    }

    pub fn bar(attrs: Vec<String>) -> Self {
        Self {
            kind: VisKind::Bar,
            shown_attributes: attrs,
        }
    }
}

/// Whether a visualization can show `objects` objects. Unit cells hold at
/// most two objects; an empty unit cell (absent edge) renders a placeholder
/// under any kind.
pub fn check_vis(vis: &VisSpec, placement: Placement, objects: usize) -> Result<(), RmcError> {
    let attrs = vis.shown_attributes.len();
    let need_attrs = match vis.kind {
        VisKind::Star | VisKind::OverlaidStar => 3,
        VisKind::ParallelCoordinates => 2,
        VisKind::NodeLink => 0,
        _ => 1,
    };
    if attrs < need_attrs {
        return Err(RmcError::IncompatibleVis(format!(
            "{:?} needs at least {need_attrs} shown attributes, got {attrs}",
            vis.kind
        )));
    }
    let ok = match (placement, vis.kind) {
        (Placement::UnitGrid, _) if objects == 0 => true,
        (_, VisKind::Bar | VisKind::ParallelCoordinates | VisKind::NodeLink) => true,
        (Placement::UnitGrid, VisKind::Star) => objects == 1,
        (Placement::Meta, VisKind::Star) => true,
        (Placement::UnitGrid, VisKind::GroupedBar) => objects == 2,
        (Placement::Meta, VisKind::GroupedBar) => objects >= 2,
        (_, VisKind::OverlaidStar | VisKind::DiffBar) => objects == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(RmcError::IncompatibleVis(format!(
            "{:?} cannot show {objects} object(s) in a {placement:?} cell",
            vis.kind
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Size {
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rmc {
    pub id: u64,
    pub region: Region,
    pub placement: Placement,
    pub what: What,
    pub vis: VisSpec,
    pub requested: Size,
    /// Visualization last used in the other matrix half, restored when
    /// switching back.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_half_vis: Option<VisSpec>,
}

impl Rmc {
    pub fn focus_region(&self) -> FocusRegion {
        FocusRegion {
            id: self.id,
            row0: self.region.row0,
            rows: self.region.rows,
            col0: self.region.col0,
            cols: self.region.cols,
            requested_w: self.requested.w,
            requested_h: self.requested.h,
        }
    }
}

/// Objects an RMC (or one of its unit cells) represents. Node entries are
/// node indices; edge entries are edge indices into the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectSet {
    Nodes(Vec<usize>),
    Edges(Vec<usize>),
}

impl ObjectSet {
    pub fn len(&self) -> usize {
        match self {
            ObjectSet::Nodes(v) | ObjectSet::Edges(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ObjectKind {
        match self {
            ObjectSet::Nodes(_) => ObjectKind::Node,
            ObjectSet::Edges(_) => ObjectKind::Edge,
        }
    }

    pub fn indices(&self) -> &[usize] {
        match self {
            ObjectSet::Nodes(v) | ObjectSet::Edges(v) => v,
        }
    }
}

/// Objects covered by `region`: for nodes, row nodes then column nodes in
/// display order without repeats; for edges, the existing edges of the
/// covered cells in row-major order (a cell and its mirror count once).
pub fn collect_objects(region: &Region, what: What, g: &MultivariateGraph, ordering: &Ordering) -> ObjectSet {
    match what {
        What::Nodes => {
            let mut nodes = Vec::with_capacity(region.rows + region.cols);
            for pos in region.row_range().chain(region.col_range()) {
                let node = ordering.node_at(pos);
                if !nodes.contains(&node) {
                    nodes.push(node);
                }
            }
            ObjectSet::Nodes(nodes)
        }
        What::Edges => {
            let mut edges = Vec::new();
            for r in region.row_range() {
                for c in region.col_range() {
                    if r == c {
                        continue;
                    }
                    if let Some(e) = g.edge_index_between(ordering.node_at(r), ordering.node_at(c)) {
                        if !edges.contains(&e) {
                            edges.push(e);
                        }
                    }
                }
            }
            ObjectSet::Edges(edges)
        }
    }
}

/// Objects shown by the unit cell at matrix position `(row, col)`: the single
/// node on the diagonal, the (row, column) node pair for node RMCs, and the
/// edge of the cell (if any) for edge RMCs.
pub fn unit_cell_objects(row: usize, col: usize, what: What, g: &MultivariateGraph, ordering: &Ordering) -> ObjectSet {
    let (a, b) = (ordering.node_at(row), ordering.node_at(col));
    match what {
        What::Nodes if row == col => ObjectSet::Nodes(vec![a]),
        What::Nodes => ObjectSet::Nodes(vec![a, b]),
        What::Edges if row == col => ObjectSet::Edges(vec![]),
        What::Edges => ObjectSet::Edges(g.edge_index_between(a, b).into_iter().collect()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisMode {
    Both,
    XOnly,
    YOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleBy {
    /// Multiplies the requested size (mouse wheel).
    Factor(f64),
    /// Adds pixels (border drag).
    Delta { dw: f64, dh: f64 },
    Absolute { w: f64, h: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

/// Matrix size and viewport the RMCs are laid out in.
#[derive(Debug, Clone, Copy)]
pub struct MatrixContext {
    pub n: usize,
    pub viewport: Viewport,
}

impl MatrixContext {
    fn base(&self) -> (f64, f64) {
        let n = self.n.max(1) as f64;
        (self.viewport.width / n, self.viewport.height / n)
    }

    /// Allowed requested extent for `cells` indices along an axis of
    /// length `extent`: at least the base cells, at most what remains after
    /// the context floor.
    fn clamp_axis(&self, cells: usize, extent: f64, v: f64) -> f64 {
        let n = self.n.max(1);
        let base = extent / n as f64;
        let lo = base * cells as f64;
        let floor = self.viewport.min_context_extent.min(base);
        let hi = (extent - floor * (n - cells.min(n)) as f64).max(lo);
        v.clamp(lo, hi)
    }

    fn clamp_size(&self, region: &Region, size: Size) -> Size {
        Size {
            w: self.clamp_axis(region.cols, self.viewport.width, size.w),
            h: self.clamp_axis(region.rows, self.viewport.height, size.h),
        }
    }

    fn initial_size(&self, region: &Region) -> Size {
        let (bw, bh) = self.base();
        let size = Size {
            w: (MINIATURE_PX.max(bw)) * region.cols as f64,
            h: (MINIATURE_PX.max(bh)) * region.rows as f64,
        };
        self.clamp_size(region, size)
    }
}

/// Default attributes a new visualization shows, per object kind.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DefaultAttributes {
    pub nodes: Vec<String>,
    pub edges: Vec<String>,
}

impl DefaultAttributes {
    fn for_what(&self, what: What) -> Vec<String> {
        match what {
            What::Nodes => self.nodes.clone(),
            What::Edges => self.edges.clone(),
        }
    }
}

/// The set of live RMCs. Every transition either succeeds completely or
/// leaves the state untouched.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RmcState {
    rmcs: Vec<Rmc>,
    next_id: u64,
}

impl RmcState {
    pub fn new() -> Self {
        Self { rmcs: Vec::new(), next_id: 1 }
    }

    pub fn rmcs(&self) -> &[Rmc] {
        &self.rmcs
    }

    pub fn get(&self, id: u64) -> Result<&Rmc, RmcError> {
        self.rmcs.iter().find(|r| r.id == id).ok_or(RmcError::UnknownRmc(id))
    }

    fn get_mut(&mut self, id: u64) -> Result<&mut Rmc, RmcError> {
        self.rmcs.iter_mut().find(|r| r.id == id).ok_or(RmcError::UnknownRmc(id))
    }

    pub fn focus_regions(&self) -> Vec<FocusRegion> {
        self.rmcs.iter().map(Rmc::focus_region).collect()
    }

    fn check_free(&self, region: &Region, n: usize, except: Option<u64>) -> Result<(), RmcError> {
        if !region.in_bounds(n) {
            return Err(RmcError::OutOfBounds(*region, n));
        }
        for other in &self.rmcs {
            if Some(other.id) != except && region.conflicts_with(&other.region) {
                return Err(RmcError::Overlap(other.id));
            }
        }
        Ok(())
    }

    /// Creates an RMC over `region`. `origin` is the cell where the drag
    /// started; it decides whether nodes (similarity half) or edges
    /// (adjacency half) are shown. Without an origin the half holding most of
    /// the region's cells decides.
    pub fn create(
        &mut self,
        ctx: &MatrixContext,
        region: Region,
        as_unit_grid: bool,
        origin: Option<(usize, usize)>,
        defaults: &DefaultAttributes,
    ) -> Result<u64, RmcError> {
        self.check_free(&region, ctx.n, None)?;
        let what = if region.is_pure_diagonal() {
            What::Nodes
        } else {
            match origin {
                Some((r, c)) if r < c => What::Nodes,
                Some((r, c)) if r > c => What::Edges,
                _ => {
                    let (mut upper, mut lower) = (0usize, 0usize);
                    for r in region.row_range() {
                        for c in region.col_range() {
                            if r < c {
                                upper += 1;
                            } else if r > c {
                                lower += 1;
                            }
                        }
                    }
                    if lower > upper {
                        What::Edges
                    } else {
                        What::Nodes
                    }
                }
            }
        };
        let id = self.next_id;
        self.next_id += 1;
        self.rmcs.push(Rmc {
            id,
            region,
            placement: if as_unit_grid { Placement::UnitGrid } else { Placement::Meta },
            what,
            vis: VisSpec::bar(defaults.for_what(what)),
            requested: ctx.initial_size(&region),
            other_half_vis: None,
        });
        Ok(id)
    }

    pub fn scale(&mut self, ctx: &MatrixContext, id: u64, by: ScaleBy, mode: AxisMode) -> Result<(), RmcError> {
        let rmc = self.get_mut(id)?;
        let cur = rmc.requested;
        let target = match by {
            ScaleBy::Factor(f) if f > 0.0 && f.is_finite() => Size { w: cur.w * f, h: cur.h * f },
            ScaleBy::Delta { dw, dh } if dw.is_finite() && dh.is_finite() => Size { w: cur.w + dw, h: cur.h + dh },
            ScaleBy::Absolute { w, h } if w.is_finite() && h.is_finite() => Size { w, h },
            _ => return Err(RmcError::InvalidScale),
        };
        let target = match mode {
            AxisMode::Both => target,
            AxisMode::XOnly => Size { w: target.w, h: cur.h },
            AxisMode::YOnly => Size { w: cur.w, h: target.h },
        };
        rmc.requested = ctx.clamp_size(&rmc.region, target);
        Ok(())
    }

    /// Moves one border of the region by `delta` cells (positive grows).
    /// The requested size keeps its per-cell extent.
    pub fn resize(
        &mut self,
        ctx: &MatrixContext,
        id: u64,
        side: Side,
        delta: i64,
        g: &MultivariateGraph,
        ordering: &Ordering,
    ) -> Result<(), RmcError> {
        let rmc = self.get(id)?.clone();
        let r = rmc.region;
        let grow = |start: usize, len: usize, from_start: bool| -> Result<(usize, usize), RmcError> {
            let new_len = len as i64 + delta;
            if new_len < 1 {
                return Err(RmcError::Vanish);
            }
            let new_start = if from_start { start as i64 - delta } else { start as i64 };
            if new_start < 0 {
                return Err(RmcError::OutOfBounds(r, ctx.n));
            }
            Ok((new_start as usize, new_len as usize))
        };
        let region = match side {
            Side::Top => {
                let (row0, rows) = grow(r.row0, r.rows, true)?;
                Region { row0, rows, ..r }
            }
            Side::Bottom => {
                let (row0, rows) = grow(r.row0, r.rows, false)?;
                Region { row0, rows, ..r }
            }
            Side::Left => {
                let (col0, cols) = grow(r.col0, r.cols, true)?;
                Region { col0, cols, ..r }
            }
            Side::Right => {
                let (col0, cols) = grow(r.col0, r.cols, false)?;
                Region { col0, cols, ..r }
            }
        };
        self.check_free(&region, ctx.n, Some(id))?;
        let requested = ctx.clamp_size(
            &region,
            Size {
                w: rmc.requested.w / r.cols as f64 * region.cols as f64,
                h: rmc.requested.h / r.rows as f64 * region.rows as f64,
            },
        );
        let vis = fallback_vis(&rmc.vis, rmc.placement, &region, rmc.what, g, ordering);
        let target = self.get_mut(id)?;
        target.region = region;
        target.requested = requested;
        target.vis = vis;
        Ok(())
    }

    /// Mirrors the RMC across the diagonal and toggles between nodes and
    /// edges. Applying it twice restores the original RMC.
    pub fn switch_what(
        &mut self,
        ctx: &MatrixContext,
        id: u64,
        defaults: &DefaultAttributes,
        g: &MultivariateGraph,
        ordering: &Ordering,
    ) -> Result<(), RmcError> {
        let rmc = self.get(id)?.clone();
        if rmc.region.is_pure_diagonal() {
            return Err(RmcError::Diagonal);
        }
        let region = rmc.region.transposed();
        self.check_free(&region, ctx.n, Some(id))?;
        let what = rmc.what.toggled();
        let compatible = |vis: &VisSpec| vis_fits(vis, rmc.placement, &region, what, g, ordering);
        let vis = match &rmc.other_half_vis {
            Some(stashed) if compatible(stashed) => stashed.clone(),
            _ => {
                let same_kind = VisSpec {
                    kind: rmc.vis.kind,
                    shown_attributes: defaults.for_what(what),
                };
                if compatible(&same_kind) {
                    same_kind
                } else {
                    VisSpec::bar(defaults.for_what(what))
                }
            }
        };
        let target = self.get_mut(id)?;
        target.other_half_vis = Some(std::mem::replace(&mut target.vis, vis));
        target.region = region;
        target.what = what;
        target.requested = Size { w: rmc.requested.h, h: rmc.requested.w };
        Ok(())
    }

    /// Meta ↔ unit grid. The visualization is kept; unit cells that cannot
    /// show it fall back to bars at render time.
    pub fn toggle_where(&mut self, id: u64) -> Result<(), RmcError> {
        let rmc = self.get_mut(id)?;
        rmc.placement = match rmc.placement {
            Placement::Meta => Placement::UnitGrid,
            Placement::UnitGrid => Placement::Meta,
        };
        Ok(())
    }

    pub fn set_vis(
        &mut self,
        id: u64,
        vis: VisSpec,
        g: &MultivariateGraph,
        ordering: &Ordering,
    ) -> Result<(), RmcError> {
        let rmc = self.get(id)?;
        let kind = rmc.what.object_kind();
        for name in &vis.shown_attributes {
            if g.attribute(kind, name).is_none() {
                return Err(RmcError::UnknownAttribute(name.clone()));
            }
        }
        check_region_vis(&vis, rmc.placement, &rmc.region, rmc.what, g, ordering)?;
        self.get_mut(id)?.vis = vis;
        Ok(())
    }

    pub fn add_shown_attribute(
        &mut self,
        id: u64,
        attribute: &str,
        g: &MultivariateGraph,
        ordering: &Ordering,
    ) -> Result<(), RmcError> {
        let mut vis = self.get(id)?.vis.clone();
        if vis.shown_attributes.iter().any(|a| a == attribute) {
            return Ok(());
        }
        vis.shown_attributes.push(attribute.to_string());
        self.set_vis(id, vis, g, ordering)
    }

    pub fn remove_shown_attribute(
        &mut self,
        id: u64,
        attribute: &str,
        g: &MultivariateGraph,
        ordering: &Ordering,
    ) -> Result<(), RmcError> {
        let mut vis = self.get(id)?.vis.clone();
        let before = vis.shown_attributes.len();
        vis.shown_attributes.retain(|a| a != attribute);
        if vis.shown_attributes.len() == before {
            return Err(RmcError::UnknownAttribute(attribute.to_string()));
        }
        self.set_vis(id, vis, g, ordering)
    }

    pub fn dismiss(&mut self, id: u64) -> Result<(), RmcError> {
        let before = self.rmcs.len();
        self.rmcs.retain(|r| r.id != id);
        if self.rmcs.len() == before {
            return Err(RmcError::UnknownRmc(id));
        }
        Ok(())
    }

    pub fn reset(&mut self) {
        self.rmcs.clear();
    }

    /// Re-clamps requested sizes after the viewport or matrix size changed.
    pub fn reclamp(&mut self, ctx: &MatrixContext) {
        for rmc in &mut self.rmcs {
            rmc.requested = ctx.clamp_size(&rmc.region, rmc.requested);
        }
    }
}

fn check_region_vis(
    vis: &VisSpec,
    placement: Placement,
    region: &Region,
    what: What,
    g: &MultivariateGraph,
    ordering: &Ordering,
) -> Result<(), RmcError> {
    match placement {
        Placement::Meta => check_vis(vis, placement, collect_objects(region, what, g, ordering).len()),
        Placement::UnitGrid => {
            // compatible when at least one unit cell can show it
            let mut first_err = None;
            for r in region.row_range() {
                for c in region.col_range() {
                    let objects = unit_cell_objects(r, c, what, g, ordering);
                    match check_vis(vis, placement, objects.len()) {
                        Ok(()) => return Ok(()),
                        Err(e) => {
                            first_err.get_or_insert(e);
                        }
                    }
                }
            }
            Err(first_err.unwrap_or_else(|| RmcError::IncompatibleVis("empty region".into())))
        }
    }
}

fn vis_fits(
    vis: &VisSpec,
    placement: Placement,
    region: &Region,
    what: What,
    g: &MultivariateGraph,
    ordering: &Ordering,
) -> bool {
    let kind = what.object_kind();
    vis.shown_attributes.iter().all(|a| g.attribute(kind, a).is_some())
        && check_region_vis(vis, placement, region, what, g, ordering).is_ok()
}

fn fallback_vis(
    vis: &VisSpec,
    placement: Placement,
    region: &Region,
    what: What,
    g: &MultivariateGraph,
    ordering: &Ordering,
) -> VisSpec {
    if check_region_vis(vis, placement, region, what, g, ordering).is_ok() {
        vis.clone()
    } else {
        VisSpec::bar(vis.shown_attributes.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_json;

    fn path_graph(n: usize) -> MultivariateGraph {
        let nodes: Vec<String> = (0..n)
            .map(|i| format!(r#"{{"id":"n{i:02}","attrs":{{"a":{i},"b":{},"c":1}}}}"#, n - i))
            .collect();
        let edges: Vec<String> = (1..n)
            .map(|i| format!(r#"{{"source":"n{:02}","target":"n{i:02}"}}"#, i - 1))
            .collect();
        parse_json(format!(r#"{{"nodes":[{}],"edges":[{}]}}"#, nodes.join(","), edges.join(",")).as_bytes())
            .unwrap()
    }

    fn ctx(n: usize) -> MatrixContext {
        MatrixContext { n, viewport: Viewport::new(10.0 * n as f64, 10.0 * n as f64) }
    }

    fn defaults() -> DefaultAttributes {
        DefaultAttributes {
            nodes: vec!["a".into(), "b".into()],
            edges: vec!["weight".into()],
        }
    }

    #[test]
    fn create_decides_what_from_half() {
        let g = path_graph(10);
        let o = Ordering::identity(10);
        let mut s = RmcState::new();
        let sim = s.create(&ctx(10), Region::cell(2, 7), false, None, &defaults()).unwrap();
        let rmc = s.get(sim).unwrap();
        assert_eq!(rmc.what, What::Nodes);
        assert_eq!(rmc.placement, Placement::Meta);
        assert_eq!(rmc.vis.kind, VisKind::Bar);
        assert_eq!(collect_objects(&rmc.region, rmc.what, &g, &o), ObjectSet::Nodes(vec![2, 7]));
        // initialized to the miniature breakpoint (base cells are only 10 px)
        assert_eq!(rmc.requested, Size { w: 16.0, h: 16.0 });

        let grid = s.create(&ctx(10), Region::new(4, 0, 3, 2), true, Some((4, 0)), &defaults()).unwrap();
        let rmc = s.get(grid).unwrap();
        assert_eq!((rmc.what, rmc.placement), (What::Edges, Placement::UnitGrid));
        assert_eq!(rmc.requested, Size { w: 32.0, h: 48.0 });

        let diag = s.create(&ctx(10), Region::cell(9, 9), false, None, &defaults()).unwrap();
        let rmc = s.get(diag).unwrap();
        assert_eq!(rmc.what, What::Nodes);
        assert_eq!(collect_objects(&rmc.region, rmc.what, &g, &o), ObjectSet::Nodes(vec![9]));
    }

    #[test]
    fn create_rejects_overlap_and_out_of_bounds() {
        let mut s = RmcState::new();
        s.create(&ctx(10), Region::new(0, 5, 2, 2), false, None, &defaults()).unwrap();
        // shares row 1 only: the solver needs disjoint row ranges too
        assert_eq!(
            s.create(&ctx(10), Region::new(1, 8, 1, 1), false, None, &defaults()),
            Err(RmcError::Overlap(1))
        );
        assert!(matches!(
            s.create(&ctx(10), Region::new(9, 2, 2, 1), false, None, &defaults()),
            Err(RmcError::OutOfBounds(..))
        ));
        assert_eq!(s.rmcs().len(), 1);
    }

    #[test]
    fn fig5_object_counts() {
        let g = path_graph(10);
        let o = Ordering::identity(10);
        // 4 column nodes plus one row node
        assert_eq!(collect_objects(&Region::new(0, 3, 1, 4), What::Nodes, &g, &o).len(), 5);
        // 2 column nodes plus 2 row nodes
        assert_eq!(collect_objects(&Region::new(0, 5, 2, 2), What::Nodes, &g, &o).len(), 4);
    }

    #[test]
    fn edges_in_region() {
        let g = path_graph(6);
        let o = Ordering::identity(6);
        // cells (1,0),(1,1),(2,0),(2,1): edges n00-n01 and n01-n02 exist
        let set = collect_objects(&Region::new(1, 0, 2, 2), What::Edges, &g, &o);
        assert_eq!(set.len(), 2);
        // a region far from the path's diagonal band holds no edge
        assert!(collect_objects(&Region::new(4, 0, 2, 2), What::Edges, &g, &o).is_empty());
    }

    #[test]
    fn scaling_clamps() {
        let mut s = RmcState::new();
        let c = ctx(10);
        let id = s.create(&c, Region::cell(1, 5), false, None, &defaults()).unwrap();
        s.scale(&c, id, ScaleBy::Absolute { w: 1000.0, h: 1000.0 }, AxisMode::Both).unwrap();
        // 100 px viewport, nine context cells at the 1 px floor
        assert_eq!(s.get(id).unwrap().requested, Size { w: 91.0, h: 91.0 });
        s.scale(&c, id, ScaleBy::Absolute { w: 0.0, h: 50.0 }, AxisMode::XOnly).unwrap();
        assert_eq!(s.get(id).unwrap().requested, Size { w: 10.0, h: 91.0 });
        s.scale(&c, id, ScaleBy::Factor(2.0), AxisMode::YOnly).unwrap();
        assert_eq!(s.get(id).unwrap().requested.w, 10.0);
        assert_eq!(s.scale(&c, id, ScaleBy::Factor(-1.0), AxisMode::Both), Err(RmcError::InvalidScale));
        assert_eq!(s.scale(&c, 99, ScaleBy::Factor(2.0), AxisMode::Both), Err(RmcError::UnknownRmc(99)));
    }

    #[test]
    fn resize_grows_and_shrinks() {
        let g = path_graph(10);
        let o = Ordering::identity(10);
        let c = ctx(10);
        let mut s = RmcState::new();
        let id = s.create(&c, Region::new(0, 4, 2, 2), false, None, &defaults()).unwrap();
        let before = collect_objects(&s.get(id).unwrap().region, What::Nodes, &g, &o);
        s.resize(&c, id, Side::Right, 1, &g, &o).unwrap();
        let after = collect_objects(&s.get(id).unwrap().region, What::Nodes, &g, &o);
        let gained: Vec<_> = after.indices().iter().filter(|x| !before.indices().contains(x)).collect();
        assert_eq!(gained, vec![&6]);
        s.resize(&c, id, Side::Right, -1, &g, &o).unwrap();
        assert_eq!(collect_objects(&s.get(id).unwrap().region, What::Nodes, &g, &o), before);
        assert_eq!(s.resize(&c, id, Side::Top, -2, &g, &o), Err(RmcError::Vanish));
        assert!(matches!(s.resize(&c, id, Side::Top, 1, &g, &o), Err(RmcError::OutOfBounds(..))));
    }

    #[test]
    fn switch_what_mirrors_and_is_involution() {
        let g = path_graph(10);
        let o = Ordering::identity(10);
        let c = ctx(10);
        let mut s = RmcState::new();
        let id = s.create(&c, Region::cell(2, 7), false, None, &defaults()).unwrap();
        let original = s.get(id).unwrap().clone();
        s.switch_what(&c, id, &defaults(), &g, &o).unwrap();
        let switched = s.get(id).unwrap();
        assert_eq!(switched.region, Region::cell(7, 2));
        assert_eq!(switched.what, What::Edges);
        assert_eq!(switched.vis.shown_attributes, vec!["weight".to_string()]);
        // n02 and n07 are not adjacent on the path
        assert!(collect_objects(&switched.region, switched.what, &g, &o).is_empty());
        s.switch_what(&c, id, &defaults(), &g, &o).unwrap();
        let back = s.get(id).unwrap();
        assert_eq!((back.region, back.what, &back.vis), (original.region, original.what, &original.vis));

        let d = s.create(&c, Region::cell(9, 9), false, None, &defaults()).unwrap();
        assert_eq!(s.switch_what(&c, d, &defaults(), &g, &o), Err(RmcError::Diagonal));
    }

    #[test]
    fn toggle_where_twice_restores() {
        let c = ctx(10);
        let mut s = RmcState::new();
        let id = s.create(&c, Region::new(0, 3, 3, 3), false, None, &defaults()).unwrap();
        let before = s.clone();
        s.toggle_where(id).unwrap();
        assert_eq!(s.get(id).unwrap().placement, Placement::UnitGrid);
        assert_eq!(s.get(id).unwrap().requested, before.get(id).unwrap().requested);
        s.toggle_where(id).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn vis_compatibility() {
        let g = path_graph(10);
        let o = Ordering::identity(10);
        let c = ctx(10);
        let mut s = RmcState::new();
        let meta = s.create(&c, Region::new(0, 3, 1, 4), false, None, &defaults()).unwrap();
        assert!(matches!(
            s.set_vis(meta, VisSpec::new(VisKind::Star, ["a", "b"]), &g, &o),
            Err(RmcError::IncompatibleVis(_))
        ));
        // diff-bar needs exactly two objects; this meta cell holds five
        assert!(matches!(
            s.set_vis(meta, VisSpec::new(VisKind::DiffBar, ["a", "b"]), &g, &o),
            Err(RmcError::IncompatibleVis(_))
        ));
        s.set_vis(meta, VisSpec::new(VisKind::Star, ["a", "b", "c"]), &g, &o).unwrap();
        assert_eq!(
            s.set_vis(meta, VisSpec::new(VisKind::Bar, ["zz"]), &g, &o),
            Err(RmcError::UnknownAttribute("zz".into()))
        );
        let pair = s.create(&c, Region::cell(4, 8), true, None, &defaults()).unwrap();
        s.set_vis(pair, VisSpec::new(VisKind::DiffBar, ["a", "b"]), &g, &o).unwrap();
        s.set_vis(pair, VisSpec::new(VisKind::OverlaidStar, ["a", "b", "c"]), &g, &o).unwrap();
        assert!(s.remove_shown_attribute(pair, "c", &g, &o).is_err());
        s.add_shown_attribute(pair, "c", &g, &o).unwrap();
        assert_eq!(s.get(pair).unwrap().vis.shown_attributes.len(), 3);
    }

    #[test]
    fn dismiss_and_reset() {
        let c = ctx(10);
        let mut s = RmcState::new();
        let a = s.create(&c, Region::cell(0, 1), false, None, &defaults()).unwrap();
        s.create(&c, Region::cell(2, 3), false, None, &defaults()).unwrap();
        s.create(&c, Region::cell(4, 5), false, None, &defaults()).unwrap();
        s.dismiss(a).unwrap();
        assert_eq!(s.dismiss(a), Err(RmcError::UnknownRmc(a)));
        assert_eq!(s.rmcs().len(), 2);
        s.reset();
        assert!(s.rmcs().is_empty());
    }
}
