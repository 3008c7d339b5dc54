//! Command/event protocol. A session folds commands into state; each
//! command either applies completely or leaves the state untouched.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::color::ColorScheme;
use crate::editing::{self, ActiveEdit, EditError, EditSource, EditTarget, History, PreviewInput};
use crate::graph::{parse_csv_pair, parse_json, DatasetFormat, EdgeKey, GraphError, MultivariateGraph};
use crate::layout::Viewport;
use crate::model::{MatrixModel, ModelError};
use crate::ordering::{OrderStrategy, OrderingError};
use crate::rmc::{AxisMode, DefaultAttributes, MatrixContext, Region, RmcError, RmcState, ScaleBy, Side, VisKind, VisSpec};
use crate::scene::{Mark, ObjectRef, Scene};
use crate::scenegen::{generate_scene, highlight_resolve, HighlightSet, SceneError, SceneInput, View, DEFAULT_SEED};
use crate::similarity::{SimilarityConfig, SimilarityError};
use crate::svg::scene_to_svg;

/// Scenes with more marks than this are sent as diffs.
pub const FULL_SCENE_LIMIT: usize = 5000;
pub const DEFAULT_EXTENT: f64 = 950.0;

pub const COMMAND_KINDS: [&str; 25] = [
    "load_dataset",
    "set_similarity_attributes",
    "set_ordering",
    "set_color_scale",
    "global_zoom_pan",
    "create_rmc",
    "scale_rmc",
    "resize_region",
    "switch_what",
    "toggle_where",
    "set_vis",
    "add_shown_attribute",
    "remove_shown_attribute",
    "hover",
    "clear_hover",
    "begin_edit",
    "preview_edit",
    "commit_edit",
    "cancel_edit",
    "undo",
    "redo",
    "dismiss_rmc",
    "reset",
    "export_svg",
    "query_stats",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Command {
    /// Assigned as previous + 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<u64>,
    pub kind: String,
    #[serde(default)]
    pub payload: Value,
}

impl Command {
    pub fn new(seq: u64, kind: &str, payload: Value) -> Self {
        Self { seq: Some(seq), kind: kind.to_string(), payload }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Ack,
    Error,
    SceneUpdate,
    HighlightUpdate,
    Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub in_reply_to: Option<u64>,
    pub kind: EventKind,
    pub payload: Value,
}

impl Event {
    pub fn error(in_reply_to: Option<u64>, code: &str, message: impl Into<String>) -> Self {
        Self { in_reply_to, kind: EventKind::Error, payload: json!({"code": code, "message": message.into()}) }
    }

    pub fn code(&self) -> Option<&str> {
        (self.kind == EventKind::Error).then(|| self.payload["code"].as_str()).flatten()
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("events serialize")
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("malformed frame: {0}")]
    Parse(String),
    #[error("bad payload: {0}")]
    Payload(String),
    #[error("unknown command kind `{0}`")]
    UnknownCommand(String),
    #[error("sequence number {got} does not follow {last}")]
    Seq { last: u64, got: u64 },
    #[error("no dataset loaded")]
    NoDataset,
    #[error("an edit is already in progress")]
    EditActive,
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rmc(#[from] RmcError),
    #[error(transparent)]
    Edit(#[from] EditError),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::Parse(_) => "E_PARSE",
            SessionError::Payload(_) => "E_PAYLOAD",
            SessionError::UnknownCommand(_) => "E_UNKNOWN_COMMAND",
            SessionError::Seq { .. } => "E_SEQ",
            SessionError::NoDataset => "E_NO_DATASET",
            SessionError::EditActive => "E_EDIT_ACTIVE",
            SessionError::Io(_) => "E_IO",
            SessionError::Graph(e) => graph_code(e),
            SessionError::Similarity(e) => similarity_code(e),
            SessionError::Ordering(e) => ordering_code(e),
            SessionError::Model(e) => model_code(e),
            SessionError::Rmc(e) => rmc_code(e),
            SessionError::Edit(e) => match e {
                EditError::NotEditable(_) => "E_NOT_EDITABLE",
                EditError::NonFinite(_) => "E_NON_FINITE",
                EditError::NegativeWeight(_) => "E_INVALID_VALUE",
                EditError::NoActiveEdit => "E_NO_ACTIVE_EDIT",
                EditError::Model(m) => model_code(m),
            },
            SessionError::Scene(e) => match e {
                SceneError::Layout(_) => "E_LAYOUT",
                SceneError::Rmc(r) => rmc_code(r),
                SceneError::Graph(g) => graph_code(g),
                SceneError::NotHighlightable(_) => "E_PAYLOAD",
            },
        }
    }
}

fn graph_code(e: &GraphError) -> &'static str {
    match e {
        GraphError::Parse(_) => "E_DATASET",
        GraphError::UnknownNode(_) | GraphError::UnknownEdge(..) => "E_UNKNOWN_OBJECT",
        GraphError::UnknownAttribute(_) => "E_UNKNOWN_ATTRIBUTE",
        _ => "E_VALIDATION",
    }
}

fn similarity_code(e: &SimilarityError) -> &'static str {
    match e {
        SimilarityError::UnknownAttribute(_) => "E_UNKNOWN_ATTRIBUTE",
        SimilarityError::UnknownNode(_) => "E_UNKNOWN_OBJECT",
        _ => "E_SIMILARITY_CONFIG",
    }
}

fn ordering_code(e: &OrderingError) -> &'static str {
    match e {
        OrderingError::UnknownAttribute(_) => "E_UNKNOWN_ATTRIBUTE",
        _ => "E_ORDERING",
    }
}

fn model_code(e: &ModelError) -> &'static str {
    match e {
        ModelError::Graph(g) => graph_code(g),
        ModelError::Similarity(s) => similarity_code(s),
        ModelError::Ordering(o) => ordering_code(o),
        ModelError::NotAnObject(_) => "E_PAYLOAD",
    }
}

fn rmc_code(e: &RmcError) -> &'static str {
    match e {
        RmcError::Overlap(_) => "E_OVERLAP",
        RmcError::OutOfBounds(..) | RmcError::Vanish => "E_BOUNDS",
        RmcError::UnknownRmc(_) => "E_UNKNOWN_RMC",
        RmcError::Diagonal => "E_DIAGONAL",
        RmcError::IncompatibleVis(_) => "E_INCOMPATIBLE_VIS",
        RmcError::UnknownAttribute(_) => "E_UNKNOWN_ATTRIBUTE",
        RmcError::InvalidScale => "E_INVALID_SCALE",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub viewport: Viewport,
    pub seed: u64,
    /// Relative dataset and export paths resolve against this directory.
    pub base_dir: Option<PathBuf>,
    pub full_scene_limit: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            viewport: Viewport::new(DEFAULT_EXTENT, DEFAULT_EXTENT),
            seed: DEFAULT_SEED,
            base_dir: None,
            full_scene_limit: FULL_SCENE_LIMIT,
        }
    }
}

impl SessionConfig {
    /// Defaults with the node-link seed taken from `RMC_SEED` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(seed) = std::env::var("RMC_SEED").ok().and_then(|s| s.trim().parse().ok()) {
            cfg.seed = seed;
        }
        cfg
    }
}

#[derive(Debug, Clone)]
struct State {
    model: MatrixModel,
    rmcs: RmcState,
    view: View,
    hover: Option<ObjectRef>,
    highlight: HighlightSet,
    history: History,
    active: Option<ActiveEdit>,
}

impl State {
    fn ctx(&self) -> MatrixContext {
        MatrixContext { n: self.model.n(), viewport: self.view.viewport }
    }

    fn defaults(&self) -> DefaultAttributes {
        DefaultAttributes { nodes: self.model.default_node_attributes(), edges: self.model.graph.edge_attribute_names() }
    }

    fn scene(&self) -> Result<Scene, SceneError> {
        generate_scene(&SceneInput {
            model: &self.model,
            rmcs: &self.rmcs,
            view: &self.view,
            hover: self.hover.as_ref(),
            highlight: &self.highlight,
        })
    }
}

/// What a successful command sends after its ack.
enum Follow {
    Scene,
    Highlight,
    Stats(Value),
    Nothing,
}

pub struct Session {
    config: SessionConfig,
    state: Option<State>,
    /// Current scene and its digest.
    scene: Option<(Scene, String)>,
    last_seq: Option<u64>,
}

fn payload<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T, SessionError> {
    let v = if v.is_null() { json!({}) } else { v.clone() };
    serde_json::from_value(v).map_err(|e| SessionError::Payload(e.to_string()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LoadPayload {
    path: Option<String>,
    format: Option<DatasetFormat>,
    dataset: Option<Value>,
    viewport: Option<ViewportPayload>,
}

#[derive(Deserialize)]
struct ViewportPayload {
    width: f64,
    height: f64,
    #[serde(default)]
    min_context_extent: Option<f64>,
}

#[derive(Deserialize)]
struct IdPayload {
    id: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreatePayload {
    row0: usize,
    col0: usize,
    rows: usize,
    cols: usize,
    #[serde(default)]
    unit_grid: bool,
    #[serde(default)]
    origin: Option<(usize, usize)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalePayload {
    id: u64,
    factor: Option<f64>,
    dw: Option<f64>,
    dh: Option<f64>,
    w: Option<f64>,
    h: Option<f64>,
    #[serde(default = "both_axes")]
    axes: AxisMode,
}

fn both_axes() -> AxisMode {
    AxisMode::Both
}

#[derive(Deserialize)]
struct ResizePayload {
    id: u64,
    side: Side,
    delta: i64,
}

#[derive(Deserialize)]
struct VisPayload {
    id: u64,
    kind: VisKind,
    shown_attributes: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct AttributePayload {
    id: u64,
    attribute: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EditPayload {
    object: Option<ObjectRef>,
    attribute: Option<String>,
    value: Option<f64>,
    pixel_delta: Option<f64>,
    #[serde(default)]
    snap: bool,
}

/// Canonical endpoint order for edge references given by clients.
fn canonical(r: ObjectRef) -> ObjectRef {
    match r {
        ObjectRef::Edge(k) => ObjectRef::Edge(EdgeKey::new(k.source, k.target)),
        other => other,
    }
}

/// `prefix` leading and `suffix` trailing marks are unchanged; `insert`
/// replaces everything between them.
pub fn mark_diff(old: &[Mark], new: &[Mark]) -> (usize, usize, Vec<Mark>) {
    let prefix = old.iter().zip(new).take_while(|(a, b)| a == b).count();
    let max_suffix = old.len().min(new.len()) - prefix;
    let suffix = old.iter().rev().zip(new.iter().rev()).take(max_suffix).take_while(|(a, b)| a == b).count();
    (prefix, suffix, new[prefix..new.len() - suffix].to_vec())
}

/// Applies a diff produced by [`mark_diff`].
pub fn apply_mark_diff(old: &[Mark], prefix: usize, suffix: usize, insert: &[Mark]) -> Vec<Mark> {
    let mut out = old[..prefix].to_vec();
    out.extend_from_slice(insert);
    out.extend_from_slice(&old[old.len() - suffix..]);
    out
}

impl Session {
    pub fn new(config: SessionConfig) -> Self {
        Self { config, state: None, scene: None, last_seq: None }
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn scene(&self) -> Option<&Scene> {
        self.scene.as_ref().map(|(s, _)| s)
    }

    pub fn digest(&self) -> Option<String> {
        self.scene.as_ref().map(|(_, d)| d.clone())
    }

    pub fn model(&self) -> Option<&MatrixModel> {
        self.state.as_ref().map(|s| &s.model)
    }

    pub fn rmcs(&self) -> Option<&RmcState> {
        self.state.as_ref().map(|s| &s.rmcs)
    }

    pub fn history(&self) -> Option<&History> {
        self.state.as_ref().map(|s| &s.history)
    }

    pub fn view(&self) -> Option<&View> {
        self.state.as_ref().map(|s| &s.view)
    }

    pub fn is_editing(&self) -> bool {
        self.state.as_ref().is_some_and(|s| s.active.is_some())
    }

    /// Handles one protocol frame. Malformed frames produce an `E_PARSE`
    /// error and leave the session as it was.
    pub fn handle_line(&mut self, line: &str) -> Vec<Event> {
        match serde_json::from_str::<Command>(line) {
            Ok(cmd) => self.handle_command(cmd),
            Err(e) => {
                let seq = serde_json::from_str::<Value>(line).ok().and_then(|v| v["seq"].as_u64());
                vec![Event::error(seq, "E_PARSE", e.to_string())]
            }
        }
    }

    pub fn handle_command(&mut self, cmd: Command) -> Vec<Event> {
        let seq = match (cmd.seq, self.last_seq) {
            (Some(s), Some(last)) if s <= last => {
                let e = SessionError::Seq { last, got: s };
                return vec![Event::error(Some(s), e.code(), e.to_string())];
            }
            (Some(s), _) => s,
            (None, Some(last)) => last + 1,
            (None, None) => 0,
        };
        self.last_seq = Some(seq);
        match self.apply(seq, &cmd.kind, &cmd.payload) {
            Ok(events) => events,
            Err(e) => vec![Event::error(Some(seq), e.code(), e.to_string())],
        }
    }

    fn resolve(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        match &self.config.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    fn load(&self, p: LoadPayload) -> Result<MultivariateGraph, SessionError> {
        if let Some(doc) = p.dataset {
            return Ok(parse_json(doc.to_string().as_bytes())?);
        }
        let path = p.path.ok_or_else(|| SessionError::Payload("load_dataset needs `path` or `dataset`".into()))?;
        load_path(&path, p.format, |s| self.resolve(s))
    }

    fn apply(&mut self, seq: u64, kind: &str, pl: &Value) -> Result<Vec<Event>, SessionError> {
        if !COMMAND_KINDS.contains(&kind) {
            return Err(SessionError::UnknownCommand(kind.to_string()));
        }
        if kind == "load_dataset" {
            let p: LoadPayload = payload(pl)?;
            let mut viewport = self.config.viewport;
            if let Some(v) = &p.viewport {
                viewport = Viewport { width: v.width, height: v.height, min_context_extent: v.min_context_extent.unwrap_or(1.0) };
                if !viewport.is_valid() {
                    return Err(SessionError::Payload("viewport must be positive".into()));
                }
            }
            let graph = self.load(p)?;
            let mut view = View::new(viewport);
            view.seed = self.config.seed;
            let st = State {
                model: MatrixModel::new(graph),
                rmcs: RmcState::new(),
                view,
                hover: None,
                highlight: HighlightSet::default(),
                history: History::default(),
                active: None,
            };
            let stats = st.model.graph.stats();
            let ack = json!({"node_count": stats.node_count, "edge_count": stats.edge_count});
            return self.finish(seq, st, ack, Follow::Scene);
        }
        let mut st = self.state.clone().ok_or(SessionError::NoDataset)?;
        let (ack, follow) = match kind {
            "set_similarity_attributes" => {
                #[derive(Deserialize)]
                struct P {
                    attributes: Vec<String>,
                }
                let p: P = payload(pl)?;
                st.model.set_similarity_attributes(SimilarityConfig::new(p.attributes))?;
                (json!({}), Follow::Scene)
            }
            "set_ordering" => {
                #[derive(Deserialize)]
                struct P {
                    strategy: String,
                }
                let p: P = payload(pl)?;
                let strategy: OrderStrategy = p.strategy.parse()?;
                st.model.set_ordering(&strategy)?;
                (json!({"strategy": strategy.to_string()}), Follow::Scene)
            }
            "set_color_scale" => {
                #[derive(Deserialize)]
                struct P {
                    scheme: ColorScheme,
                }
                let p: P = payload(pl)?;
                st.view.scheme = p.scheme;
                (json!({}), Follow::Scene)
            }
            "global_zoom_pan" => {
                #[derive(Deserialize)]
                struct P {
                    #[serde(default = "one")]
                    zoom: f64,
                    #[serde(default)]
                    pan_x: f64,
                    #[serde(default)]
                    pan_y: f64,
                }
                fn one() -> f64 {
                    1.0
                }
                let p: P = payload(pl)?;
                st.view.set_zoom_pan(p.zoom, (p.pan_x, p.pan_y));
                (json!({"zoom": st.view.zoom, "pan_x": st.view.pan.0, "pan_y": st.view.pan.1}), Follow::Scene)
            }
            "create_rmc" => {
                let p: CreatePayload = payload(pl)?;
                let region = Region::new(p.row0, p.col0, p.rows, p.cols);
                let (ctx, defaults) = (st.ctx(), st.defaults());
                let id = st.rmcs.create(&ctx, region, p.unit_grid, p.origin, &defaults)?;
                (json!({"id": id}), Follow::Scene)
            }
            "scale_rmc" => {
                let p: ScalePayload = payload(pl)?;
                let by = match (p.factor, p.dw.or(p.dh), p.w.or(p.h)) {
                    (Some(f), None, None) => ScaleBy::Factor(f),
                    (None, Some(_), None) => ScaleBy::Delta { dw: p.dw.unwrap_or(0.0), dh: p.dh.unwrap_or(0.0) },
                    (None, None, Some(_)) => {
                        let cur = st.rmcs.get(p.id)?.requested;
                        ScaleBy::Absolute { w: p.w.unwrap_or(cur.w), h: p.h.unwrap_or(cur.h) }
                    }
                    _ => return Err(SessionError::Payload("give exactly one of factor, dw/dh or w/h".into())),
                };
                let ctx = st.ctx();
                st.rmcs.scale(&ctx, p.id, by, p.axes)?;
                let r = st.rmcs.get(p.id)?.requested;
                (json!({"id": p.id, "w": r.w, "h": r.h}), Follow::Scene)
            }
            "resize_region" => {
                let p: ResizePayload = payload(pl)?;
                let ctx = st.ctx();
                st.rmcs.resize(&ctx, p.id, p.side, p.delta, &st.model.graph, &st.model.ordering)?;
                (json!({"id": p.id}), Follow::Scene)
            }
            "switch_what" => {
                let p: IdPayload = payload(pl)?;
                let (ctx, defaults) = (st.ctx(), st.defaults());
                st.rmcs.switch_what(&ctx, p.id, &defaults, &st.model.graph, &st.model.ordering)?;
                (json!({"id": p.id}), Follow::Scene)
            }
            "toggle_where" => {
                let p: IdPayload = payload(pl)?;
                st.rmcs.toggle_where(p.id)?;
                (json!({"id": p.id}), Follow::Scene)
            }
            "set_vis" => {
                let p: VisPayload = payload(pl)?;
                let attrs = match p.shown_attributes {
                    Some(a) => a,
                    None => st.rmcs.get(p.id)?.vis.shown_attributes.clone(),
                };
                st.rmcs.set_vis(p.id, VisSpec { kind: p.kind, shown_attributes: attrs }, &st.model.graph, &st.model.ordering)?;
                (json!({"id": p.id}), Follow::Scene)
            }
            "add_shown_attribute" => {
                let p: AttributePayload = payload(pl)?;
                st.rmcs.add_shown_attribute(p.id, &p.attribute, &st.model.graph, &st.model.ordering)?;
                (json!({"id": p.id}), Follow::Scene)
            }
            "remove_shown_attribute" => {
                let p: AttributePayload = payload(pl)?;
                st.rmcs.remove_shown_attribute(p.id, &p.attribute, &st.model.graph, &st.model.ordering)?;
                (json!({"id": p.id}), Follow::Scene)
            }
            "dismiss_rmc" => {
                let p: IdPayload = payload(pl)?;
                st.rmcs.dismiss(p.id)?;
                (json!({"id": p.id}), Follow::Scene)
            }
            "reset" => {
                st.rmcs.reset();
                (json!({}), Follow::Scene)
            }
            "hover" => {
                let target = canonical(payload::<ObjectRef>(pl)?);
                st.highlight = highlight_resolve(&st.model.graph, &target)?;
                st.hover = Some(target);
                (json!({}), Follow::Highlight)
            }
            "clear_hover" => {
                st.hover = None;
                st.highlight = HighlightSet::default();
                (json!({}), Follow::Highlight)
            }
            "begin_edit" => {
                let p: EditPayload = payload(pl)?;
                if st.active.is_some() {
                    return Err(SessionError::EditActive);
                }
                let (object, attribute) = match (p.object, p.attribute) {
                    (Some(o), Some(a)) => (canonical(o), a),
                    _ => return Err(SessionError::Payload("begin_edit needs `object` and `attribute`".into())),
                };
                st.model.value_of(&object, &attribute)?;
                let target = self.handle_for(&object, &attribute).ok_or_else(|| {
                    EditError::NotEditable(EditTarget { object: object.clone(), attribute: attribute.clone(), axis: dummy_axis() }.describe())
                })?;
                let edit = editing::begin_edit(&st.model, target)?;
                let ack = json!({"value": edit.old_value, "base": edit.base});
                st.active = Some(edit);
                (ack, Follow::Nothing)
            }
            "preview_edit" => {
                let p: EditPayload = payload(pl)?;
                let mut edit = st.active.take().ok_or(EditError::NoActiveEdit)?;
                let input = match (p.value, p.pixel_delta) {
                    (Some(v), None) => PreviewInput::Value(v),
                    (None, Some(d)) => PreviewInput::PixelDelta(d),
                    _ => return Err(SessionError::Payload("give exactly one of value or pixel_delta".into())),
                };
                let others = if p.snap { Some(self.snap_candidates(&st.model, &edit.target)) } else { None };
                let v = editing::preview_edit(&mut st.model, &mut edit, input, others.as_deref())?;
                st.active = Some(edit);
                (json!({"value": v}), Follow::Scene)
            }
            "commit_edit" => {
                let p: EditPayload = payload(pl)?;
                let op = match st.active.take() {
                    Some(edit) => {
                        let value = p.value.or(edit.current).ok_or(EditError::NoActiveEdit)?;
                        editing::commit_edit(
                            &mut st.model,
                            &mut st.history,
                            &edit.target.object,
                            &edit.target.attribute,
                            edit.old_value,
                            value,
                            EditSource::Drag,
                            seq,
                        )?
                    }
                    None => {
                        let (object, attribute, value) = match (p.object, p.attribute, p.value) {
                            (Some(o), Some(a), Some(v)) => (canonical(o), a, v),
                            _ => return Err(EditError::NoActiveEdit.into()),
                        };
                        let old = st.model.value_of(&object, &attribute)?;
                        editing::commit_edit(&mut st.model, &mut st.history, &object, &attribute, old, value, EditSource::NumericEntry, seq)?
                    }
                };
                (json!({"old_value": op.old_value, "new_value": op.new_value}), Follow::Scene)
            }
            "cancel_edit" => {
                let edit = st.active.take().ok_or(EditError::NoActiveEdit)?;
                editing::cancel_edit(&mut st.model, &edit)?;
                (json!({}), Follow::Scene)
            }
            "undo" | "redo" => {
                if let Some(edit) = st.active.take() {
                    editing::cancel_edit(&mut st.model, &edit)?;
                }
                let op = if kind == "undo" {
                    editing::undo(&mut st.model, &mut st.history)?
                } else {
                    editing::redo(&mut st.model, &mut st.history)?
                };
                match op {
                    Some(op) => (json!({"noop": false, "attribute": op.attribute}), Follow::Scene),
                    None => (json!({"noop": true}), Follow::Scene),
                }
            }
            "export_svg" => {
                #[derive(Deserialize)]
                struct P {
                    path: Option<String>,
                }
                let p: P = payload(pl)?;
                let scene = self.scene().ok_or(SessionError::NoDataset)?;
                let svg = scene_to_svg(scene);
                let ack = match p.path {
                    Some(path) => {
                        let full = self.resolve(&path);
                        std::fs::write(&full, &svg).map_err(|e| SessionError::Io(format!("{}: {e}", full.display())))?;
                        json!({"path": full.display().to_string(), "marks": scene.marks.len()})
                    }
                    None => json!({"svg": svg, "marks": scene.marks.len()}),
                };
                return Ok(vec![Event { in_reply_to: Some(seq), kind: EventKind::Ack, payload: ack }]);
            }
            "query_stats" => {
                let s = st.model.graph.stats();
                let c = s.cell_counts;
                let stats = json!({
                    "node_count": s.node_count,
                    "edge_count": s.edge_count,
                    "cell_counts": {"total": c.total, "adjacency": c.adjacency, "similarity": c.similarity, "diagonal": c.diagonal},
                    "rmc_count": st.rmcs.rmcs().len(),
                    "undo_depth": st.history.undo_stack().len(),
                    "redo_depth": st.history.redo_stack().len(),
                    "mark_count": self.scene().map_or(0, |s| s.marks.len()),
                });
                (json!({}), Follow::Stats(stats))
            }
            _ => unreachable!("kind checked against COMMAND_KINDS"),
        };
        self.finish(seq, st, ack, follow)
    }

    fn finish(&mut self, seq: u64, st: State, ack: Value, follow: Follow) -> Result<Vec<Event>, SessionError> {
        let mut events = vec![Event { in_reply_to: Some(seq), kind: EventKind::Ack, payload: ack }];
        match follow {
            Follow::Scene | Follow::Highlight => {
                let scene = st.scene()?;
                let digest = scene.digest();
                let mut body = self.scene_payload(&scene, &digest);
                let kind = if matches!(follow, Follow::Scene) {
                    EventKind::SceneUpdate
                } else {
                    body["highlight"] = serde_json::to_value(&st.highlight).expect("serializes");
                    EventKind::HighlightUpdate
                };
                events.push(Event { in_reply_to: Some(seq), kind, payload: body });
                self.scene = Some((scene, digest));
            }
            Follow::Stats(v) => events.push(Event { in_reply_to: Some(seq), kind: EventKind::Stats, payload: v }),
            Follow::Nothing => {}
        }
        self.state = Some(st);
        Ok(events)
    }

    fn scene_payload(&self, scene: &Scene, digest: &str) -> Value {
        match &self.scene {
            Some((old, old_digest)) if scene.marks.len() > self.config.full_scene_limit => {
                let (prefix, suffix, insert) = mark_diff(&old.marks, &scene.marks);
                json!({
                    "mode": "diff",
                    "digest": digest,
                    "base_digest": old_digest,
                    "mark_count": scene.marks.len(),
                    "prefix": prefix,
                    "suffix": suffix,
                    "insert": insert,
                    "viewport": scene.viewport,
                })
            }
            _ => json!({"mode": "full", "digest": digest, "mark_count": scene.marks.len(), "scene": scene}),
        }
    }

    /// The edit handle of the current scene for `object.attribute`, if any.
    fn handle_for(&self, object: &ObjectRef, attribute: &str) -> Option<EditTarget> {
        self.scene()?
            .marks
            .iter()
            .filter_map(|m| m.edit_handle.as_ref())
            .find(|h| &h.object == object && h.attribute == attribute)
            .cloned()
    }

    /// Values of the other objects that have a handle for the same
    /// attribute in the current scene.
    fn snap_candidates(&self, model: &MatrixModel, target: &EditTarget) -> Vec<f64> {
        let Some(scene) = self.scene() else { return Vec::new() };
        let mut seen: Vec<&ObjectRef> = Vec::new();
        let mut out = Vec::new();
        for h in scene.marks.iter().filter_map(|m| m.edit_handle.as_ref()) {
            if h.attribute != target.attribute || h.object == target.object || seen.contains(&&h.object) {
                continue;
            }
            seen.push(&h.object);
            if let Ok(Some(v)) = model.value_of(&h.object, &h.attribute) {
                out.push(v);
            }
        }
        out
    }
}

fn dummy_axis() -> crate::editing::AxisMapping {
    crate::editing::AxisMapping { orientation: crate::editing::Orientation::Vertical, px0: 0.0, px1: 0.0, v0: 0.0, v1: 0.0 }
}

/// Loads a dataset file. CSV input is either `nodes.csv,edges.csv` or a
/// directory holding both files; without a format the extension decides.
pub fn load_path(path: &str, format: Option<DatasetFormat>, resolve: impl Fn(&str) -> PathBuf) -> Result<MultivariateGraph, SessionError> {
    let read = |p: &Path| std::fs::read(p).map_err(|e| SessionError::Io(format!("{}: {e}", p.display())));
    let format = format.unwrap_or_else(|| {
        if path.ends_with(".json") {
            DatasetFormat::Json
        } else {
            DatasetFormat::Csv
        }
    });
    match format {
        DatasetFormat::Json => Ok(parse_json(&read(&resolve(path))?)?),
        DatasetFormat::Csv => {
            let (nodes, edges) = match path.split_once(',') {
                Some((n, e)) => (resolve(n.trim()), resolve(e.trim())),
                None => {
                    let dir = resolve(path);
                    (dir.join("nodes.csv"), dir.join("edges.csv"))
                }
            };
            Ok(parse_csv_pair(&read(&nodes)?, &read(&edges)?)?)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("step {step}: {code}: {message}")]
pub struct ReplayError {
    /// Zero-based index of the failing command in the script.
    pub step: usize,
    pub code: String,
    pub message: String,
}

/// Parses an NDJSON script; blank lines and lines starting with `#` are
/// skipped.
pub fn parse_script(text: &str) -> Result<Vec<Command>, ReplayError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let cmd = serde_json::from_str(t)
            .map_err(|e| ReplayError { step: out.len(), code: "E_PARSE".into(), message: e.to_string() })?;
        out.push(cmd);
    }
    Ok(out)
}

/// Runs `commands` and returns the scene digest before the first command
/// (when a dataset is already loaded) followed by one digest per command.
/// The first failing command aborts the replay.
pub fn replay(session: &mut Session, commands: &[Command]) -> Result<Vec<String>, ReplayError> {
    let mut digests: Vec<String> = session.digest().into_iter().collect();
    for (step, cmd) in commands.iter().enumerate() {
        let events = session.handle_command(cmd.clone());
        if let Some(err) = events.iter().find(|e| e.kind == EventKind::Error) {
            return Err(ReplayError {
                step,
                code: err.code().unwrap_or("E_UNKNOWN").to_string(),
                message: err.payload["message"].as_str().unwrap_or_default().to_string(),
            });
        }
        if let Some(d) = session.digest() {
            digests.push(d);
        }
    }
    Ok(digests)
}
