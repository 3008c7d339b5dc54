//! Embedded visualizations drawn inside responsive cells, per level of
//! detail.

use crate::color::{contrast_color, Color, OBJECT_PALETTE};
use crate::editing::{AxisMapping, EditTarget, Orientation};
use crate::graph::{normalize_value, AttributeDef, MultivariateGraph, ObjectKind};
use crate::layout::{Lod, Rect};
use crate::rmc::{check_vis, ObjectSet, Placement, RmcError, VisKind, VisSpec};
use crate::scene::{Anchor, Geometry, Mark, MarkRole, ObjectRef, Style};

use super::nodelink::layout_nodelink;

pub const Z_RMC_BG: i32 = 1;
pub const Z_MARK: i32 = 2;
pub const Z_LABEL: i32 = 3;

const AXIS_GRAY: Color = Color::rgb(0xbd, 0xbd, 0xbd);
const EMPTY_STROKE: Color = Color::rgb(0xe0, 0xe0, 0xe0);
const HANDLE_RADIUS: f64 = 2.5;
/// Labels overlapping other marks by more than this share of their own area
/// are dropped at the compact level.
const LABEL_OVERLAP_LIMIT: f64 = 0.3;

pub struct EmbedInput<'a> {
    pub graph: &'a MultivariateGraph,
    pub vis: &'a VisSpec,
    pub objects: &'a ObjectSet,
    pub placement: Placement,
    pub rect: Rect,
    pub lod: Lod,
    pub residue: Color,
    /// Object of the whole cell, carried by the pixel-level residue.
    pub cell_ref: Option<ObjectRef>,
    pub seed: u64,
}

struct Obj {
    r: ObjectRef,
    kind: ObjectKind,
    idx: usize,
}

fn objects_of(g: &MultivariateGraph, set: &ObjectSet) -> Vec<Obj> {
    match set {
        ObjectSet::Nodes(v) => v
            .iter()
            .map(|&i| {
                let n = g.node(i);
                Obj { r: ObjectRef::Node(n.id.clone()), kind: ObjectKind::Node, idx: i }
            })
            .collect(),
        ObjectSet::Edges(v) => v
            .iter()
            .map(|&i| {
                let e = &g.edges()[i];
                Obj {
                    r: ObjectRef::Edge(e.key()),
                    kind: ObjectKind::Edge,
                    idx: i,
                }
            })
            .collect(),
    }
}

fn value(g: &MultivariateGraph, o: &Obj, attr: &str) -> Option<f64> {
    match o.kind {
        ObjectKind::Node => g.node(o.idx).value(attr),
        ObjectKind::Edge => g.edges()[o.idx].value(attr),
    }
}

pub fn format_value(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 10.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.2}")
    }
}

fn truncate(s: &str, width: f64, font: f64) -> Option<String> {
    let max = (width / (0.6 * font)).floor() as usize;
    let len = s.chars().count();
    if len <= max {
        Some(s.to_string())
    } else if max >= 2 {
        Some(s.chars().take(max - 1).chain(std::iter::once('…')).collect())
    } else {
        None
    }
}

/// Diagonal hatching of `r` plus its outline, as path subpaths.
pub fn hatch(r: Rect, spacing: f64) -> Vec<Vec<[f64; 2]>> {
    let mut subs = vec![vec![[r.x, r.y], [r.right(), r.y], [r.right(), r.bottom()], [r.x, r.bottom()], [r.x, r.y]]];
    let mut t = spacing;
    while t < r.w + r.h {
        let xa = (t - r.h).max(0.0);
        let xb = t.min(r.w);
        if xb > xa {
            subs.push(vec![[r.x + xa, r.y + t - xa], [r.x + xb, r.y + t - xb]]);
        }
        t += spacing;
    }
    subs
}

struct Canvas<'a> {
    g: &'a MultivariateGraph,
    lod: Lod,
    plot: Rect,
    fg: Color,
    font: f64,
    palette: bool,
    marks: Vec<Mark>,
}

impl Canvas<'_> {
    fn value_labels(&self) -> bool {
        self.lod >= Lod::Compact
    }

    fn names(&self) -> bool {
        self.lod >= Lod::Medium
    }

    fn color(&self, i: usize) -> Color {
        if self.palette {
            OBJECT_PALETTE[i % OBJECT_PALETTE.len()]
        } else {
            self.fg
        }
    }

    fn handle(&self, o: &Obj, attr: &str, axis: AxisMapping) -> Option<EditTarget> {
        (self.lod >= Lod::Compact).then(|| EditTarget { object: o.r.clone(), attribute: attr.to_string(), axis })
    }

    fn def(&self, kind: ObjectKind, attr: &str) -> Result<&AttributeDef, RmcError> {
        self.g.attribute(kind, attr).ok_or_else(|| RmcError::UnknownAttribute(attr.to_string()))
    }

    fn mark(&mut self, geometry: Geometry, style: Style, role: MarkRole) -> &mut Mark {
        self.marks.push(Mark::new(geometry, style, role, Z_MARK));
        self.marks.last_mut().expect("just pushed")
    }

    fn label(&mut self, x: f64, y: f64, content: String, anchor: Anchor, angle: f64, r: Option<ObjectRef>) {
        let m = Mark::new(
            Geometry::Text { x, y, content, anchor, angle },
            Style::text(self.fg, self.font),
            MarkRole::Label,
            Z_LABEL,
        )
        .with_ref(r);
        self.marks.push(m);
    }

    fn placeholder(&mut self, slot: Rect, color: Color, r: Option<ObjectRef>, h: Option<EditTarget>) {
        let spacing = (slot.w.min(slot.h) / 3.0).clamp(2.0, 5.0);
        self.marks.push(
            Mark::new(
                Geometry::Path { subpaths: hatch(slot, spacing) },
                Style::stroke(color, 0.75).with_opacity(0.6),
                MarkRole::Placeholder,
                Z_MARK,
            )
            .with_ref(r)
            .with_handle(h),
        );
    }
}

/// Marks for one embedded visualization.
pub fn render_embedded(inp: &EmbedInput) -> Result<Vec<Mark>, RmcError> {
    check_vis(inp.vis, inp.placement, inp.objects.len())?;
    let rect = inp.rect;
    let residue_mark = |fill: Color, stroke: Option<Color>| {
        let mut style = Style::fill(fill);
        if let Some(s) = stroke {
            style = style.with_stroke(s, 2.0);
        }
        Mark::new(Geometry::rect(rect), style, MarkRole::Residue, Z_RMC_BG)
    };
    if inp.lod == Lod::Pixel {
        return Ok(vec![residue_mark(inp.residue, None).with_ref(inp.cell_ref.clone())]);
    }
    let (bg, font, plot) = match inp.lod {
        Lod::Miniature => {
            let pad = (rect.w.min(rect.h) * 0.08).max(1.5);
            (residue_mark(inp.residue, None), 0.0, rect.inset(pad))
        }
        Lod::Compact => {
            let font = 8.0;
            let p = rect.inset(4.0);
            (residue_mark(Color::WHITE, Some(inp.residue)), font, Rect::new(p.x, p.y + font, p.w, (p.h - font).max(0.0)))
        }
        _ => {
            let font = 10.0;
            let p = rect.inset(6.0);
            let top = font;
            let bottom = font * 1.4;
            (residue_mark(Color::WHITE, Some(inp.residue)), font, Rect::new(p.x, p.y + top, p.w, (p.h - top - bottom).max(0.0)))
        }
    };
    let fg = if inp.lod == Lod::Miniature { contrast_color(inp.residue) } else { contrast_color(Color::WHITE) };
    let objs = objects_of(inp.graph, inp.objects);
    let mut c = Canvas {
        g: inp.graph,
        lod: inp.lod,
        plot,
        fg,
        font,
        palette: inp.lod >= Lod::Compact && objs.len() > 1,
        marks: vec![bg],
    };
    if objs.is_empty() {
        // an absent edge in a unit cell
        c.marks[0] = Mark::new(
            Geometry::rect(rect),
            Style::fill(Color::WHITE).with_stroke(EMPTY_STROKE, 1.0),
            MarkRole::Placeholder,
            Z_RMC_BG,
        );
        return Ok(c.marks);
    }
    let attrs = &inp.vis.shown_attributes;
    match inp.vis.kind {
        VisKind::Bar => bars(&mut c, attrs, &objs, objs.len() <= 2)?,
        VisKind::GroupedBar => bars(&mut c, attrs, &objs, true)?,
        VisKind::Star => {
            let order: Vec<usize> = (0..objs.len()).collect();
            star(&mut c, attrs, &objs, &order, false)?
        }
        VisKind::OverlaidStar => star(&mut c, attrs, &objs, &[1, 0], true)?,
        VisKind::DiffBar => diff_bars(&mut c, attrs, &objs)?,
        VisKind::ParallelCoordinates => parallel(&mut c, attrs, &objs)?,
        VisKind::NodeLink => node_link(&mut c, attrs, inp.objects, inp.seed)?,
    }
    if inp.lod == Lod::Compact {
        drop_colliding_labels(&mut c.marks);
    }
    Ok(c.marks)
}

fn vertical_axis(plot: Rect, def: &AttributeDef) -> AxisMapping {
    AxisMapping {
        orientation: Orientation::Vertical,
        px0: plot.bottom(),
        px1: plot.y,
        v0: def.observed_min,
        v1: def.observed_max,
    }
}

fn bars(c: &mut Canvas, attrs: &[String], objs: &[Obj], individual: bool) -> Result<(), RmcError> {
    let plot = c.plot;
    let a_count = attrs.len().max(1) as f64;
    let gw = plot.w / a_count;
    let gap = gw * 0.12;
    let kind = objs[0].kind;
    for (ai, attr) in attrs.iter().enumerate() {
        let def = c.def(kind, attr)?.clone();
        let gx = plot.x + ai as f64 * gw;
        let axis = vertical_axis(plot, &def);
        if individual {
            let bw = (gw - 2.0 * gap) / objs.len() as f64;
            for (oi, o) in objs.iter().enumerate() {
                let slot = Rect::new(gx + gap + oi as f64 * bw, plot.y, bw, plot.h);
                let color = c.color(oi);
                let handle = c.handle(o, attr, axis);
                match value(c.g, o, attr) {
                    Some(v) => {
                        let h = normalize_value(v, &def) * plot.h;
                        let bar = Rect::new(slot.x, plot.bottom() - h, slot.w, h);
                        let m = c.mark(Geometry::rect(bar), Style::fill(color), MarkRole::Bar);
                        m.object_ref = Some(o.r.clone());
                        m.edit_handle = handle;
                        if c.value_labels() {
                            let (x, _) = bar.center();
                            c.label(x, bar.y - c.font * 0.6, format_value(v), Anchor::Middle, 0.0, Some(o.r.clone()));
                        }
                    }
                    None => c.placeholder(slot, color, Some(o.r.clone()), handle),
                }
            }
        } else {
            let vals: Vec<f64> = objs.iter().filter_map(|o| value(c.g, o, attr)).collect();
            let slot = Rect::new(gx + gap, plot.y, gw - 2.0 * gap, plot.h);
            if vals.is_empty() {
                let fg = c.fg;
                c.placeholder(slot, fg, None, None);
            } else {
                let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let y_of = |v: f64| plot.bottom() - normalize_value(v, &def) * plot.h;
                let top = y_of(mean);
                let bar = Rect::new(slot.x, top, slot.w, plot.bottom() - top);
                let fill = if c.palette { OBJECT_PALETTE[1] } else { c.fg };
                c.mark(Geometry::rect(bar), Style::fill(fill).with_opacity(0.8), MarkRole::Bar);
                let (x, _) = bar.center();
                let range_color = if c.lod >= Lod::Compact { c.fg } else { contrast_color(c.fg) };
                c.mark(
                    Geometry::Line { x1: x, y1: y_of(lo), x2: x, y2: y_of(hi) },
                    Style::stroke(range_color, 1.0),
                    MarkRole::Range,
                );
                if c.value_labels() {
                    c.label(x, y_of(hi) - c.font * 0.6, format_value(mean), Anchor::Middle, 0.0, None);
                }
            }
        }
        if c.names() {
            if let Some(t) = truncate(attr, gw, c.font) {
                c.label(gx + gw / 2.0, plot.bottom() + c.font * 0.8, t, Anchor::Middle, 0.0, None);
            }
        }
    }
    if c.lod >= Lod::Compact {
        let fg = c.fg;
        c.mark(
            Geometry::Line { x1: plot.x, y1: plot.bottom(), x2: plot.right(), y2: plot.bottom() },
            Style::stroke(fg, 0.75),
            MarkRole::Axis,
        );
    }
    Ok(())
}

/// Runs of consecutive present vertices of a closed ring; the whole ring
/// when nothing is missing.
fn ring_runs(pts: &[Option<[f64; 2]>]) -> (bool, Vec<Vec<[f64; 2]>>) {
    if pts.iter().all(Option::is_some) {
        return (true, vec![pts.iter().flatten().copied().collect()]);
    }
    let n = pts.len();
    let start = pts.iter().position(Option::is_none).expect("a gap exists");
    let mut runs = Vec::new();
    let mut cur = Vec::new();
    for k in 1..=n {
        match pts[(start + k) % n] {
            Some(p) => cur.push(p),
            None => {
                if !cur.is_empty() {
                    runs.push(std::mem::take(&mut cur));
                }
            }
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    (false, runs)
}

/// Unit direction of star axis `k` of `count`: clockwise from twelve o'clock.
pub fn star_direction(k: usize, count: usize) -> (f64, f64) {
    let theta = std::f64::consts::TAU * k as f64 / count as f64;
    (theta.sin(), -theta.cos())
}

fn star(c: &mut Canvas, attrs: &[String], objs: &[Obj], order: &[usize], overlaid: bool) -> Result<(), RmcError> {
    let plot = c.plot;
    let (cx, cy) = plot.center();
    let mut radius = plot.w.min(plot.h) / 2.0;
    if c.names() {
        radius -= c.font * 1.2;
    }
    let radius = radius.max(1.0);
    let kcount = attrs.len();
    let kind = objs[0].kind;
    let defs: Vec<AttributeDef> = attrs.iter().map(|a| c.def(kind, a).cloned()).collect::<Result<_, _>>()?;
    if c.lod >= Lod::Compact {
        for k in 0..kcount {
            let (sx, sy) = star_direction(k, kcount);
            c.mark(
                Geometry::Line { x1: cx, y1: cy, x2: cx + radius * sx, y2: cy + radius * sy },
                Style::stroke(AXIS_GRAY, 0.5),
                MarkRole::Axis,
            );
        }
    }
    for &oi in order {
        let Some(o) = objs.get(oi) else { continue };
        let color = c.color(oi);
        let pts: Vec<Option<[f64; 2]>> = attrs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let (sx, sy) = star_direction(k, kcount);
                value(c.g, o, a).map(|v| {
                    let t = normalize_value(v, &defs[k]) * radius;
                    [cx + sx * t, cy + sy * t]
                })
            })
            .collect();
        let style = if overlaid && oi == 0 {
            // the row object is outlined on top
            Style::stroke(color, 1.5)
        } else if overlaid {
            Style { fill: Some(color), stroke: Some(color), stroke_width: 1.0, font_size: None, opacity: 0.45 }
        } else if objs.len() > 1 {
            Style::stroke(color, 1.0).with_opacity(0.8)
        } else {
            Style { fill: Some(color), stroke: Some(color), stroke_width: 1.0, font_size: None, opacity: 0.6 }
        };
        let (closed, runs) = ring_runs(&pts);
        for run in runs {
            let m = if run.len() == 1 {
                c.mark(Geometry::Circle { cx: run[0][0], cy: run[0][1], r: 1.5 }, Style::fill(color), MarkRole::Polygon)
            } else {
                c.mark(Geometry::Polyline { points: run, closed }, style.clone(), MarkRole::Polygon)
            };
            m.object_ref = Some(o.r.clone());
        }
        if c.lod >= Lod::Compact {
            for (k, a) in attrs.iter().enumerate() {
                let (sx, sy) = star_direction(k, kcount);
                let axis = if sx.abs() > sy.abs() {
                    AxisMapping { orientation: Orientation::Horizontal, px0: cx, px1: cx + radius * sx, v0: defs[k].observed_min, v1: defs[k].observed_max }
                } else {
                    AxisMapping { orientation: Orientation::Vertical, px0: cy, px1: cy + radius * sy, v0: defs[k].observed_min, v1: defs[k].observed_max }
                };
                let [hx, hy] = pts[k].unwrap_or([cx, cy]);
                let handle = c.handle(o, a, axis);
                let m = c.mark(Geometry::Circle { cx: hx, cy: hy, r: HANDLE_RADIUS }, Style::fill(color), MarkRole::Handle);
                m.object_ref = Some(o.r.clone());
                m.edit_handle = handle;
                if objs.len() == 1 {
                    if let Some(v) = value(c.g, o, a) {
                        let r = Some(o.r.clone());
                        c.label(hx + sx * c.font * 0.8, hy + sy * c.font * 0.8, format_value(v), Anchor::Middle, 0.0, r);
                    }
                }
            }
        }
    }
    if c.names() {
        for (k, a) in attrs.iter().enumerate() {
            let (sx, sy) = star_direction(k, kcount);
            let anchor = if sx > 0.3 {
                Anchor::Start
            } else if sx < -0.3 {
                Anchor::End
            } else {
                Anchor::Middle
            };
            let x = cx + (radius + 3.0) * sx;
            let y = cy + (radius + c.font * 0.7) * sy;
            let room = plot.w / 2.0;
            if let Some(t) = truncate(a, room, c.font) {
                c.label(x, y, t, anchor, 0.0, None);
            }
        }
    }
    Ok(())
}

fn diff_bars(c: &mut Canvas, attrs: &[String], objs: &[Obj]) -> Result<(), RmcError> {
    let plot = c.plot;
    let (a, b) = (&objs[0], &objs[1]);
    let r = match (&a.r, &b.r) {
        (ObjectRef::Node(x), ObjectRef::Node(y)) => Some(ObjectRef::Pair(x.clone(), y.clone())),
        _ => None,
    };
    let mid = plot.y + plot.h / 2.0;
    let half = plot.h / 2.0;
    let gw = plot.w / attrs.len().max(1) as f64;
    let gap = gw * 0.12;
    for (ai, attr) in attrs.iter().enumerate() {
        let def = c.def(a.kind, attr)?.clone();
        let slot = Rect::new(plot.x + ai as f64 * gw + gap, plot.y, gw - 2.0 * gap, plot.h);
        match (value(c.g, a, attr), value(c.g, b, attr)) {
            (Some(va), Some(vb)) => {
                let d = normalize_value(va, &def) - normalize_value(vb, &def);
                let h = d.abs() * half;
                let y = if d >= 0.0 { mid - h } else { mid };
                let color = if c.palette { OBJECT_PALETTE[if d >= 0.0 { 0 } else { 1 }] } else { c.fg };
                let m = c.mark(Geometry::rect(Rect::new(slot.x, y, slot.w, h)), Style::fill(color), MarkRole::Bar);
                m.object_ref = r.clone();
                if c.value_labels() {
                    let ly = if d >= 0.0 { y - c.font * 0.6 } else { y + h + c.font * 0.6 };
                    let text = format!("{}{}", if va >= vb { "+" } else { "" }, format_value(va - vb));
                    c.label(slot.x + slot.w / 2.0, ly, text, Anchor::Middle, 0.0, r.clone());
                }
            }
            _ => {
                let fg = c.fg;
                c.placeholder(slot, fg, r.clone(), None);
            }
        }
        if c.names() {
            if let Some(t) = truncate(attr, gw, c.font) {
                c.label(plot.x + ai as f64 * gw + gw / 2.0, plot.bottom() + c.font * 0.8, t, Anchor::Middle, 0.0, None);
            }
        }
    }
    let fg = c.fg;
    c.mark(
        Geometry::Line { x1: plot.x, y1: mid, x2: plot.right(), y2: mid },
        Style::stroke(fg, 0.75),
        MarkRole::Axis,
    );
    Ok(())
}

fn parallel(c: &mut Canvas, attrs: &[String], objs: &[Obj]) -> Result<(), RmcError> {
    let plot = c.plot;
    let portrait = plot.h > plot.w;
    let kind = objs[0].kind;
    let defs: Vec<AttributeDef> = attrs.iter().map(|a| c.def(kind, a).cloned()).collect::<Result<_, _>>()?;
    let count = attrs.len();
    let step = |i: usize, len: f64| if count > 1 { len * i as f64 / (count - 1) as f64 } else { len / 2.0 };
    // position of attribute i at normalized value t
    let at = |i: usize, t: f64| -> [f64; 2] {
        if portrait {
            [plot.x + t * plot.w, plot.y + step(i, plot.h)]
        } else {
            [plot.x + step(i, plot.w), plot.bottom() - t * plot.h]
        }
    };
    let axis_of = |i: usize| -> AxisMapping {
        let d = &defs[i];
        if portrait {
            AxisMapping { orientation: Orientation::Horizontal, px0: plot.x, px1: plot.right(), v0: d.observed_min, v1: d.observed_max }
        } else {
            AxisMapping { orientation: Orientation::Vertical, px0: plot.bottom(), px1: plot.y, v0: d.observed_min, v1: d.observed_max }
        }
    };
    for i in 0..count {
        let (p, q) = (at(i, 0.0), at(i, 1.0));
        c.mark(Geometry::Line { x1: p[0], y1: p[1], x2: q[0], y2: q[1] }, Style::stroke(AXIS_GRAY, 0.75), MarkRole::Axis);
    }
    let polyline = |g: &MultivariateGraph, o: &Obj| -> Vec<Option<[f64; 2]>> {
        attrs
            .iter()
            .enumerate()
            .map(|(i, a)| value(g, o, a).map(|v| at(i, normalize_value(v, &defs[i]))))
            .collect()
    };
    if c.lod >= Lod::Medium {
        // the rest of the data set, dimmed
        let shown: Vec<usize> = objs.iter().map(|o| o.idx).collect();
        let total = match kind {
            ObjectKind::Node => c.g.node_count(),
            ObjectKind::Edge => c.g.edge_count(),
        };
        let all = match kind {
            ObjectKind::Node => ObjectSet::Nodes((0..total).filter(|i| !shown.contains(i)).collect()),
            ObjectKind::Edge => ObjectSet::Edges((0..total).filter(|i| !shown.contains(i)).collect()),
        };
        let fg = c.fg;
        for o in objects_of(c.g, &all) {
            for run in open_runs(&polyline(c.g, &o)) {
                let m = c.mark(Geometry::Polyline { points: run, closed: false }, Style::stroke(fg, 0.5).with_opacity(0.15), MarkRole::Line);
                m.object_ref = Some(o.r.clone());
            }
        }
    }
    for (oi, o) in objs.iter().enumerate() {
        let color = c.color(oi);
        let pts = polyline(c.g, o);
        for run in open_runs(&pts) {
            let m = if run.len() == 1 {
                c.mark(Geometry::Circle { cx: run[0][0], cy: run[0][1], r: 1.5 }, Style::fill(color), MarkRole::Line)
            } else {
                c.mark(Geometry::Polyline { points: run, closed: false }, Style::stroke(color, 1.25), MarkRole::Line)
            };
            m.object_ref = Some(o.r.clone());
        }
        if c.lod >= Lod::Compact {
            for (i, a) in attrs.iter().enumerate() {
                let [hx, hy] = pts[i].unwrap_or_else(|| at(i, 0.0));
                let handle = c.handle(o, a, axis_of(i));
                let m = c.mark(Geometry::Circle { cx: hx, cy: hy, r: HANDLE_RADIUS }, Style::fill(color), MarkRole::Handle);
                m.object_ref = Some(o.r.clone());
                m.edit_handle = handle;
            }
        }
    }
    if c.value_labels() && objs.len() == 1 {
        for (i, a) in attrs.iter().enumerate() {
            if let Some(v) = value(c.g, &objs[0], a) {
                let [x, y] = at(i, normalize_value(v, &defs[i]));
                let r = Some(objs[0].r.clone());
                c.label(x + 3.0, y - c.font * 0.6, format_value(v), Anchor::Start, 0.0, r);
            }
        }
    }
    if c.names() {
        for (i, a) in attrs.iter().enumerate() {
            let p = at(i, 0.0);
            let room = if portrait { plot.w } else { plot.w / count.max(1) as f64 };
            if let Some(t) = truncate(a, room, c.font) {
                if portrait {
                    c.label(p[0], p[1] - c.font * 0.6, t, Anchor::Start, 0.0, None);
                } else {
                    c.label(p[0], plot.bottom() + c.font * 0.8, t, Anchor::Middle, 0.0, None);
                }
            }
        }
    }
    Ok(())
}

fn open_runs(pts: &[Option<[f64; 2]>]) -> Vec<Vec<[f64; 2]>> {
    let mut runs = Vec::new();
    let mut cur = Vec::new();
    for p in pts {
        match p {
            Some(p) => cur.push(*p),
            None if !cur.is_empty() => runs.push(std::mem::take(&mut cur)),
            None => {}
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs
}

fn node_link(c: &mut Canvas, attrs: &[String], objects: &ObjectSet, seed: u64) -> Result<(), RmcError> {
    let g = c.g;
    let (nodes, links): (Vec<usize>, Vec<usize>) = match objects {
        ObjectSet::Nodes(v) => {
            let mut links = Vec::new();
            for (i, &a) in v.iter().enumerate() {
                for &b in &v[i + 1..] {
                    if let Some(e) = g.edge_index_between(a, b) {
                        links.push(e);
                    }
                }
            }
            (v.clone(), links)
        }
        ObjectSet::Edges(v) => {
            let mut nodes = Vec::new();
            for &e in v {
                let edge = &g.edges()[e];
                for id in [&edge.source, &edge.target] {
                    let i = g.node_index(id).expect("edge endpoints exist");
                    if !nodes.contains(&i) {
                        nodes.push(i);
                    }
                }
            }
            (nodes, v.clone())
        }
    };
    let local = |node: usize| nodes.iter().position(|&n| n == node).expect("endpoint is shown");
    let pairs: Vec<(usize, usize)> = links
        .iter()
        .map(|&e| {
            let edge = &g.edges()[e];
            (local(g.node_index(&edge.source).expect("exists")), local(g.node_index(&edge.target).expect("exists")))
        })
        .collect();
    let plot = c.plot;
    let r_max = (plot.w.min(plot.h) / 10.0).clamp(1.5, 12.0);
    let r_min = r_max * 0.4;
    let size_attr = attrs.iter().find(|a| g.node_attribute(a).is_some());
    let radius = |node: usize| match size_attr {
        Some(a) => match g.node(node).value(a) {
            Some(v) => r_min + normalize_value(v, g.node_attribute(a).expect("checked")) * (r_max - r_min),
            None => r_min,
        },
        None => (r_min + r_max) / 2.0,
    };
    let pos = layout_nodelink(nodes.len(), &pairs, plot, r_max, seed);
    let max_w = g.max_weight();
    let link_color = if c.lod >= Lod::Compact { AXIS_GRAY } else { c.fg };
    for (k, &e) in links.iter().enumerate() {
        let (a, b) = pairs[k];
        let w = g.edges()[e].weight;
        let width = 0.5 + if max_w > 0.0 { 2.5 * w / max_w } else { 0.0 };
        let m = c.mark(
            Geometry::Line { x1: pos[a].0, y1: pos[a].1, x2: pos[b].0, y2: pos[b].1 },
            Style::stroke(link_color, width),
            MarkRole::Link,
        );
        m.object_ref = Some(ObjectRef::Edge(g.edges()[e].key()));
    }
    let node_color = if c.lod >= Lod::Compact { OBJECT_PALETTE[1] } else { c.fg };
    for (k, &node) in nodes.iter().enumerate() {
        let (x, y) = pos[k];
        let m = c.mark(Geometry::Circle { cx: x, cy: y, r: radius(node) }, Style::fill(node_color), MarkRole::Node);
        m.object_ref = Some(ObjectRef::Node(g.node(node).id.clone()));
    }
    if c.names() {
        for (k, &node) in nodes.iter().enumerate() {
            let (x, y) = pos[k];
            let n = g.node(node);
            if let Some(t) = truncate(&n.label, plot.w / 3.0, c.font) {
                c.label(x, y - radius(node) - c.font * 0.6, t, Anchor::Middle, 0.0, Some(ObjectRef::Node(n.id.clone())));
            }
        }
    }
    Ok(())
}

/// Drops labels whose box overlaps chart marks (or labels kept so far) by
/// more than the allowed share of the label's area.
fn drop_colliding_labels(marks: &mut Vec<Mark>) {
    let obstacles: Vec<Rect> = marks
        .iter()
        .filter(|m| !matches!(m.role, MarkRole::Label | MarkRole::Residue | MarkRole::Background | MarkRole::Axis))
        .map(Mark::bbox)
        .collect();
    let mut kept: Vec<Rect> = Vec::new();
    marks.retain(|m| {
        if m.role != MarkRole::Label {
            return true;
        }
        let b = m.bbox();
        let area = b.area();
        if area <= 0.0 {
            return true;
        }
        let overlap: f64 = obstacles
            .iter()
            .chain(kept.iter())
            .filter_map(|o| b.intersection(o))
            .map(|r| r.area())
            .sum();
        if overlap > LABEL_OVERLAP_LIMIT * area {
            false
        } else {
            kept.push(b);
            true
        }
    });
}
