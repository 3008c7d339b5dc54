//! Renderable scenes: a flat, ordered list of marks in viewport pixels.
//!
//! A scene is the whole contract between the engine and a renderer. Its
//! canonical JSON form (sorted keys, numbers rounded to three decimals) is
//! what gets hashed into the scene digest.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::color::Color;
use crate::editing::EditTarget;
use crate::graph::EdgeKey;
use crate::layout::{Rect, Viewport};

/// Graph object a mark encodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectRef {
    Node(String),
    Edge(EdgeKey),
    /// A similarity cell: row node and column node.
    Pair(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Rect { x: f64, y: f64, w: f64, h: f64 },
    Line { x1: f64, y1: f64, x2: f64, y2: f64 },
    Polyline { points: Vec<[f64; 2]>, closed: bool },
    Circle { cx: f64, cy: f64, r: f64 },
    Text { x: f64, y: f64, content: String, anchor: Anchor, angle: f64 },
    /// Disconnected straight-segment subpaths.
    Path { subpaths: Vec<Vec<[f64; 2]>> },
}

impl Geometry {
    pub fn rect(r: Rect) -> Self {
        Geometry::Rect { x: r.x, y: r.y, w: r.w, h: r.h }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Geometry::Rect { .. } => "rect",
            Geometry::Line { .. } => "line",
            Geometry::Polyline { .. } => "polyline",
            Geometry::Circle { .. } => "circle",
            Geometry::Text { .. } => "text",
            Geometry::Path { .. } => "path",
        }
    }

    /// Bounding box; text uses an estimated advance of 0.6 em per character.
    pub fn bbox(&self, font_size: f64) -> Rect {
        fn of_points<'a>(pts: impl Iterator<Item = &'a [f64; 2]>) -> Rect {
            let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
            for p in pts {
                x0 = x0.min(p[0]);
                y0 = y0.min(p[1]);
                x1 = x1.max(p[0]);
                y1 = y1.max(p[1]);
            }
            if x0 > x1 {
                return Rect::new(0.0, 0.0, 0.0, 0.0);
            }
            Rect::new(x0, y0, x1 - x0, y1 - y0)
        }
        match self {
            Geometry::Rect { x, y, w, h } => Rect::new(*x, *y, *w, *h),
            Geometry::Line { x1, y1, x2, y2 } => of_points([[*x1, *y1], [*x2, *y2]].iter()),
            Geometry::Polyline { points, .. } => of_points(points.iter()),
            Geometry::Circle { cx, cy, r } => Rect::new(cx - r, cy - r, 2.0 * r, 2.0 * r),
            Geometry::Path { subpaths } => of_points(subpaths.iter().flatten()),
            Geometry::Text { x, y, content, anchor, angle } => {
                let len = 0.6 * font_size * content.chars().count() as f64;
                let lead = match anchor {
                    Anchor::Start => 0.0,
                    Anchor::Middle => len / 2.0,
                    Anchor::End => len,
                };
                if angle.abs() > 45.0 {
                    // vertical text runs upwards from the anchor
                    Rect::new(x - font_size / 2.0, y - len + lead, font_size, len)
                } else {
                    Rect::new(x - lead, y - font_size / 2.0, len, font_size)
                }
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        let ok = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Geometry::Rect { x, y, w, h } => ok(&[*x, *y, *w, *h]),
            Geometry::Line { x1, y1, x2, y2 } => ok(&[*x1, *y1, *x2, *y2]),
            Geometry::Polyline { points, .. } => points.iter().all(|p| ok(p)),
            Geometry::Circle { cx, cy, r } => ok(&[*cx, *cy, *r]),
            Geometry::Text { x, y, angle, .. } => ok(&[*x, *y, *angle]),
            Geometry::Path { subpaths } => subpaths.iter().flatten().all(|p| ok(p)),
        }
    }

    /// Shifts the geometry by `(dx, dy)`.
    pub fn translate(&mut self, dx: f64, dy: f64) {
        let mv = |p: &mut [f64; 2]| {
            p[0] += dx;
            p[1] += dy;
        };
        match self {
            Geometry::Rect { x, y, .. } | Geometry::Text { x, y, .. } => {
                *x += dx;
                *y += dy;
            }
            Geometry::Line { x1, y1, x2, y2 } => {
                *x1 += dx;
                *y1 += dy;
                *x2 += dx;
                *y2 += dy;
            }
            Geometry::Polyline { points, .. } => points.iter_mut().for_each(mv),
            Geometry::Circle { cx, cy, .. } => {
                *cx += dx;
                *cy += dy;
            }
            Geometry::Path { subpaths } => subpaths.iter_mut().flatten().for_each(mv),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Style {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fill: Option<Color>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stroke: Option<Color>,
    pub stroke_width: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub font_size: Option<f64>,
    pub opacity: f64,
}

impl Style {
    pub fn fill(c: Color) -> Self {
        Self { fill: Some(c), stroke: None, stroke_width: 0.0, font_size: None, opacity: 1.0 }
    }

    pub fn stroke(c: Color, width: f64) -> Self {
        Self { fill: None, stroke: Some(c), stroke_width: width, font_size: None, opacity: 1.0 }
    }

    pub fn text(c: Color, size: f64) -> Self {
        Self { fill: Some(c), stroke: None, stroke_width: 0.0, font_size: Some(size), opacity: 1.0 }
    }

    pub fn with_stroke(mut self, c: Color, width: f64) -> Self {
        self.stroke = Some(c);
        self.stroke_width = width;
        self
    }

    pub fn with_opacity(mut self, opacity: f64) -> Self {
        self.opacity = opacity;
        self
    }
}

/// What a mark is for; renderers may use it for hit testing and tests use it
/// to select marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkRole {
    Cell,
    Residue,
    Background,
    Bar,
    Range,
    Polygon,
    Line,
    Axis,
    Node,
    Link,
    Placeholder,
    Handle,
    Label,
    RowLabel,
    ColumnLabel,
    Guide,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mark {
    #[serde(flatten)]
    pub geometry: Geometry,
    pub style: Style,
    pub role: MarkRole,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object_ref: Option<ObjectRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edit_handle: Option<EditTarget>,
    pub z_order: i32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub emphasized: bool,
}

impl Mark {
    pub fn new(geometry: Geometry, style: Style, role: MarkRole, z_order: i32) -> Self {
        Self { geometry, style, role, object_ref: None, edit_handle: None, z_order, emphasized: false }
    }

    pub fn with_ref(mut self, r: Option<ObjectRef>) -> Self {
        self.object_ref = r;
        self
    }

    pub fn with_handle(mut self, h: Option<EditTarget>) -> Self {
        self.edit_handle = h;
        self
    }

    pub fn bbox(&self) -> Rect {
        self.geometry.bbox(self.style.font_size.unwrap_or(0.0))
    }

    pub fn text(&self) -> Option<&str> {
        match &self.geometry {
            Geometry::Text { content, .. } => Some(content),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub viewport: Viewport,
    pub marks: Vec<Mark>,
}

/// Seed mixed into every digest so digests of different schema versions
/// never collide.
pub const DIGEST_SEED: &[u8] = b"rmc-scene-v1";

impl Scene {
    pub fn new(viewport: Viewport) -> Self {
        Self { viewport, marks: Vec::new() }
    }

    pub fn push(&mut self, mark: Mark) {
        self.marks.push(mark);
    }

    /// Stable sort by z-order; construction order breaks ties.
    pub fn sort(&mut self) {
        self.marks.sort_by_key(|m| m.z_order);
    }

    pub fn digest(&self) -> String {
        scene_digest(self)
    }

    pub fn to_canonical_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("scene serializes"))
    }
}

fn round3(x: f64) -> f64 {
    let r = (x * 1000.0).round() / 1000.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn canonicalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round3(n.as_f64().unwrap_or(0.0));
            *v = if r.fract() == 0.0 && r.abs() < 1e15 {
                Value::from(r as i64)
            } else {
                serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
            };
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}

/// Sorted keys (serde_json's default map is ordered), numbers rounded to three
/// decimals, integral values written without a fraction.
pub fn canonical_json(v: &Value) -> String {
    let mut v = v.clone();
    canonicalize(&mut v);
    v.to_string()
}

fn write_num(out: &mut Vec<u8>, x: f64) {
    let r = round3(x);
    let v = if r.fract() == 0.0 && r.abs() < 1e15 {
        Value::from(r as i64)
    } else {
        serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
    };
    serde_json::to_writer(out, &v).expect("writes to memory");
}

fn write_str(out: &mut Vec<u8>, s: &str) {
    serde_json::to_writer(out, s).expect("writes to memory");
}

/// Writes the canonical form of a plain rect mark directly; these make up
/// almost every mark of a large matrix. Anything else returns `false`.
fn write_rect_fast(out: &mut Vec<u8>, m: &Mark) -> bool {
    let Geometry::Rect { x, y, w, h } = m.geometry else { return false };
    if m.edit_handle.is_some() {
        return false;
    }
    out.push(b'{');
    if m.emphasized {
        out.extend_from_slice(b"\"emphasized\":true,");
    }
    out.extend_from_slice(b"\"h\":");
    write_num(out, h);
    out.extend_from_slice(b",\"kind\":\"rect\",");
    match &m.object_ref {
        None => {}
        Some(ObjectRef::Node(id)) => {
            out.extend_from_slice(b"\"object_ref\":{\"node\":");
            write_str(out, id);
            out.extend_from_slice(b"},");
        }
        Some(ObjectRef::Edge(k)) => {
            out.extend_from_slice(b"\"object_ref\":{\"edge\":{\"source\":");
            write_str(out, &k.source);
            out.extend_from_slice(b",\"target\":");
            write_str(out, &k.target);
            out.extend_from_slice(b"}},");
        }
        Some(ObjectRef::Pair(a, b)) => {
            out.extend_from_slice(b"\"object_ref\":{\"pair\":[");
            write_str(out, a);
            out.push(b',');
            write_str(out, b);
            out.extend_from_slice(b"]},");
        }
    }
    out.extend_from_slice(b"\"role\":");
    serde_json::to_writer(&mut *out, &m.role).expect("writes to memory");
    out.extend_from_slice(b",\"style\":{");
    let st = &m.style;
    if let Some(c) = st.fill {
        out.extend_from_slice(b"\"fill\":");
        write_str(out, &c.to_string());
        out.push(b',');
    }
    if let Some(f) = st.font_size {
        out.extend_from_slice(b"\"font_size\":");
        write_num(out, f);
        out.push(b',');
    }
    out.extend_from_slice(b"\"opacity\":");
    write_num(out, st.opacity);
    if let Some(c) = st.stroke {
        out.extend_from_slice(b",\"stroke\":");
        write_str(out, &c.to_string());
    }
    out.extend_from_slice(b",\"stroke_width\":");
    write_num(out, st.stroke_width);
    out.extend_from_slice(b"},\"w\":");
    write_num(out, w);
    out.extend_from_slice(b",\"x\":");
    write_num(out, x);
    out.extend_from_slice(b",\"y\":");
    write_num(out, y);
    out.extend_from_slice(b",\"z_order\":");
    out.extend_from_slice(m.z_order.to_string().as_bytes());
    out.push(b'}');
    true
}

fn canonical_mark(out: &mut Vec<u8>, mark: &Mark) {
    if !write_rect_fast(out, mark) {
        let mut v = serde_json::to_value(mark).expect("mark serializes");
        canonicalize(&mut v);
        serde_json::to_writer(&mut *out, &v).expect("writes to memory");
    }
}

fn canonical_mark_lines(marks: &[Mark]) -> Vec<u8> {
    let mut out = Vec::with_capacity(marks.len() * 160);
    for mark in marks {
        canonical_mark(&mut out, mark);
        out.push(b'\n');
    }
    out
}

/// Order-sensitive 64-bit digest over the canonically serialized marks, as
/// 16 lowercase hex digits. Large scenes are serialized in parallel chunks;
/// the hashed byte stream is the same either way.
pub fn scene_digest(scene: &Scene) -> String {
    const CHUNK: usize = 2048;
    let mut hasher = Sha256::new();
    hasher.update(DIGEST_SEED);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    if threads == 1 || scene.marks.len() <= CHUNK {
        hasher.update(canonical_mark_lines(&scene.marks));
    } else {
        let chunks: Vec<&[Mark]> = scene.marks.chunks(CHUNK).collect();
        for group in chunks.chunks(threads) {
            let parts: Vec<Vec<u8>> = std::thread::scope(|s| {
                let handles: Vec<_> = group.iter().map(|c| s.spawn(move || canonical_mark_lines(c))).collect();
                handles.into_iter().map(|h| h.join().expect("serializer thread")).collect()
            });
            parts.iter().for_each(|p| hasher.update(p));
        }
    }
    let out = hasher.finalize();
    out[..8].iter().map(|b| format!("{b:02x}")).collect()
}
