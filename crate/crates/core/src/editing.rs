//! Direct editing of attribute values: transient previews, snapping,
//! commits, and an undo/redo history.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::WEIGHT_ATTRIBUTE;
use crate::model::{MatrixModel, ModelError};
use crate::scene::ObjectRef;

/// Pixel distance within which a dragged value snaps to another object's.
pub const SNAP_TOLERANCE_PX: f64 = 4.0;

/// Share of the observed span a preview may overshoot on either side.
pub const PREVIEW_OVERSHOOT: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EditError {
    #[error("{0} is not editable at the current level of detail")]
    NotEditable(String),
    #[error("value {0} is not finite")]
    NonFinite(f64),
    #[error("edge weight must be non-negative, got {0}")]
    NegativeWeight(f64),
    #[error("no edit in progress")]
    NoActiveEdit,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Linear map between a screen coordinate and an attribute value, taken
/// from the geometry of the mark carrying the handle: `px0` shows `v0`
/// and `px1` shows `v1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisMapping {
    pub orientation: Orientation,
    pub px0: f64,
    pub px1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl AxisMapping {
    pub fn value_per_px(&self) -> f64 {
        if self.px1 == self.px0 {
            0.0
        } else {
            (self.v1 - self.v0) / (self.px1 - self.px0)
        }
    }

    pub fn value_delta(&self, dpx: f64) -> f64 {
        dpx * self.value_per_px()
    }

    pub fn px_of(&self, v: f64) -> f64 {
        if self.v1 == self.v0 {
            self.px0
        } else {
            self.px0 + (v - self.v0) * (self.px1 - self.px0) / (self.v1 - self.v0)
        }
    }
}

/// An editable value attached to a mark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditTarget {
    pub object: ObjectRef,
    pub attribute: String,
    pub axis: AxisMapping,
}

impl EditTarget {
    pub fn describe(&self) -> String {
        let obj = match &self.object {
            ObjectRef::Node(id) => format!("node `{id}`"),
            ObjectRef::Edge(k) => format!("edge ({}, {})", k.source, k.target),
            ObjectRef::Pair(a, b) => format!("pair ({a}, {b})"),
        };
        format!("{obj}.{}", self.attribute)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditSource {
    Drag,
    NumericEntry,
}

/// A committed change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditOp {
    pub object: ObjectRef,
    pub attribute: String,
    pub old_value: Option<f64>,
    pub new_value: Option<f64>,
    /// Observed range before and after the commit widened it.
    pub old_range: (f64, f64),
    pub new_range: (f64, f64),
    pub source: EditSource,
    /// Sequence number of the committing command.
    pub stamp: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    undo: Vec<EditOp>,
    redo: Vec<EditOp>,
}

impl History {
    pub fn undo_stack(&self) -> &[EditOp] {
        &self.undo
    }

    pub fn redo_stack(&self) -> &[EditOp] {
        &self.redo
    }

    pub fn can_undo(&self) -> bool {
        !self.undo.is_empty()
    }

    pub fn can_redo(&self) -> bool {
        !self.redo.is_empty()
    }
}

/// Returns the other value closest to `candidate` on screen if it lies
/// within `tolerance_px`, otherwise `candidate`. Ties go to the smaller
/// value.
pub fn snap_value(candidate: f64, others: &[f64], tolerance_px: f64, axis: &AxisMapping) -> f64 {
    let here = axis.px_of(candidate);
    let mut best: Option<(f64, f64)> = None;
    for &v in others {
        let d = (axis.px_of(v) - here).abs();
        if d > tolerance_px {
            continue;
        }
        best = match best {
            Some((bd, bv)) if bd < d || (bd == d && bv <= v) => Some((bd, bv)),
            _ => Some((d, v)),
        };
    }
    best.map_or(candidate, |(_, v)| v)
}

/// Clamps a preview value to the observed range widened by
/// [`PREVIEW_OVERSHOOT`] of its span on both sides.
pub fn clamp_preview(v: f64, range: (f64, f64)) -> f64 {
    let span = range.1 - range.0;
    let pad = if span > 0.0 { span * PREVIEW_OVERSHOOT } else { range.0.abs().max(1.0) * PREVIEW_OVERSHOOT };
    v.clamp(range.0 - pad, range.1 + pad)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreviewInput {
    Value(f64),
    /// Screen-space drag distance along the handle's axis since the edit
    /// began.
    PixelDelta(f64),
}

/// An edit between begin and commit.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveEdit {
    pub target: EditTarget,
    pub old_value: Option<f64>,
    /// Value the drag starts from; a missing value starts at the attribute
    /// minimum.
    pub base: f64,
    pub current: Option<f64>,
}

fn check_value(attribute: &str, v: f64) -> Result<(), EditError> {
    if !v.is_finite() {
        return Err(EditError::NonFinite(v));
    }
    if attribute == WEIGHT_ATTRIBUTE && v < 0.0 {
        return Err(EditError::NegativeWeight(v));
    }
    Ok(())
}

pub fn begin_edit(model: &MatrixModel, target: EditTarget) -> Result<ActiveEdit, EditError> {
    let old_value = model.value_of(&target.object, &target.attribute)?;
    let (min, _) = model.range_of(&target.object, &target.attribute)?;
    Ok(ActiveEdit { base: old_value.unwrap_or(min), old_value, current: old_value, target })
}

/// Writes a transient value. Attribute ranges and the history stay as they
/// are. `snap_to` holds the values of neighboring objects.
pub fn preview_edit(
    model: &mut MatrixModel,
    edit: &mut ActiveEdit,
    input: PreviewInput,
    snap_to: Option<&[f64]>,
) -> Result<f64, EditError> {
    let raw = match input {
        PreviewInput::Value(v) => v,
        PreviewInput::PixelDelta(d) => {
            if !d.is_finite() {
                return Err(EditError::NonFinite(d));
            }
            edit.base + edit.target.axis.value_delta(d)
        }
    };
    if !raw.is_finite() {
        return Err(EditError::NonFinite(raw));
    }
    let range = model.range_of(&edit.target.object, &edit.target.attribute)?;
    let mut v = clamp_preview(raw, range);
    if let Some(others) = snap_to {
        v = snap_value(v, others, SNAP_TOLERANCE_PX, &edit.target.axis);
    }
    if edit.target.attribute == WEIGHT_ATTRIBUTE {
        v = v.max(0.0);
    }
    model.write_value(&edit.target.object, &edit.target.attribute, Some(v))?;
    edit.current = Some(v);
    Ok(v)
}

/// Drops a preview, restoring the value held when the edit began.
pub fn cancel_edit(model: &mut MatrixModel, edit: &ActiveEdit) -> Result<(), EditError> {
    model.write_value(&edit.target.object, &edit.target.attribute, edit.old_value)?;
    Ok(())
}

/// Writes `value` for good: the range widens to cover it, value-dependent
/// orderings are refreshed, and the change goes onto the undo stack.
/// `old_value` is the value before any preview.
pub fn commit_edit(
    model: &mut MatrixModel,
    history: &mut History,
    object: &ObjectRef,
    attribute: &str,
    old_value: Option<f64>,
    value: f64,
    source: EditSource,
    stamp: u64,
) -> Result<EditOp, EditError> {
    check_value(attribute, value)?;
    let old_range = model.range_of(object, attribute)?;
    let new_range = (old_range.0.min(value), old_range.1.max(value));
    model.write_value(object, attribute, Some(value))?;
    model.set_range(object, attribute, new_range)?;
    model.refresh_ordering()?;
    let op = EditOp {
        object: object.clone(),
        attribute: attribute.to_string(),
        old_value,
        new_value: Some(value),
        old_range,
        new_range,
        source,
        stamp,
    };
    history.undo.push(op.clone());
    history.redo.clear();
    Ok(op)
}

fn apply(model: &mut MatrixModel, op: &EditOp, forward: bool) -> Result<(), EditError> {
    let (value, range) = if forward { (op.new_value, op.new_range) } else { (op.old_value, op.old_range) };
    model.write_value(&op.object, &op.attribute, value)?;
    model.set_range(&op.object, &op.attribute, range)?;
    model.refresh_ordering()?;
    Ok(())
}

/// Reverts the latest commit. `Ok(None)` when there is nothing to undo.
pub fn undo(model: &mut MatrixModel, history: &mut History) -> Result<Option<EditOp>, EditError> {
    let Some(op) = history.undo.last().cloned() else { return Ok(None) };
    apply(model, &op, false)?;
    history.undo.pop();
    history.redo.push(op.clone());
    Ok(Some(op))
}

pub fn redo(model: &mut MatrixModel, history: &mut History) -> Result<Option<EditOp>, EditError> {
    let Some(op) = history.redo.last().cloned() else { return Ok(None) };
    apply(model, &op, true)?;
    history.redo.pop();
    history.undo.push(op.clone());
    Ok(Some(op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_json;
    use crate::similarity::build_similarity_matrix;

    fn model() -> MatrixModel {
        let g = parse_json(
            br#"{"nodes":[
                {"id":"a","attrs":{"x":5,"y":1}},
                {"id":"b","attrs":{"x":0,"y":2}},
                {"id":"c","attrs":{"x":10}}
            ],"edges":[{"source":"a","target":"b","weight":2}]}"#,
        )
        .unwrap();
        MatrixModel::new(g)
    }

    fn axis() -> AxisMapping {
        // 100 px bar: bottom (y=200) shows 0, top (y=100) shows 10
        AxisMapping { orientation: Orientation::Vertical, px0: 200.0, px1: 100.0, v0: 0.0, v1: 10.0 }
    }

    fn target(id: &str, attr: &str) -> EditTarget {
        EditTarget { object: ObjectRef::Node(id.into()), attribute: attr.into(), axis: axis() }
    }

    #[test]
    fn snapping() {
        let ax = axis();
        // 0.1 value = 1 px
        assert_eq!(snap_value(5.0, &[5.2, 9.0], 4.0, &ax), 5.2);
        assert_eq!(snap_value(5.0, &[6.0, 9.0], 4.0, &ax), 5.0);
        assert_eq!(snap_value(5.0, &[5.3, 4.7], 4.0, &ax), 4.7);
        assert_eq!(snap_value(5.0, &[], 4.0, &ax), 5.0);
    }

    #[test]
    fn drag_up_increases_value() {
        let mut m = model();
        let mut e = begin_edit(&m, target("a", "x")).unwrap();
        let v = preview_edit(&mut m, &mut e, PreviewInput::PixelDelta(-20.0), None).unwrap();
        assert!((v - 7.0).abs() < 1e-12);
        assert_eq!(m.graph.node_by_id("a").unwrap().value("x"), Some(7.0));
    }

    #[test]
    fn preview_is_clamped_and_missing_starts_at_min() {
        let mut m = model();
        let mut e = begin_edit(&m, target("c", "y")).unwrap();
        assert_eq!(e.base, 1.0);
        let v = preview_edit(&mut m, &mut e, PreviewInput::Value(100.0), None).unwrap();
        assert!((v - 2.1).abs() < 1e-12);
        cancel_edit(&mut m, &e).unwrap();
        assert_eq!(m, model());
    }

    #[test]
    fn commit_undo_redo() {
        let mut m = model();
        let mut h = History::default();
        let before = m.clone();
        let obj = ObjectRef::Node("a".into());
        commit_edit(&mut m, &mut h, &obj, "x", Some(5.0), 7.0, EditSource::NumericEntry, 1).unwrap();
        assert_eq!(m.graph.node_by_id("a").unwrap().value("x"), Some(7.0));
        undo(&mut m, &mut h).unwrap().unwrap();
        assert_eq!(m, before);
        redo(&mut m, &mut h).unwrap().unwrap();
        assert_eq!(m.graph.node_by_id("a").unwrap().value("x"), Some(7.0));
        assert_eq!(undo(&mut model(), &mut History::default()), Ok(None));
    }

    #[test]
    fn widening_commit_rebuilds_and_undo_restores_bits() {
        let mut m = model();
        let mut h = History::default();
        let before = m.clone();
        let obj = ObjectRef::Node("b".into());
        commit_edit(&mut m, &mut h, &obj, "x", Some(0.0), 20.0, EditSource::Drag, 1).unwrap();
        assert_eq!(m.range_of(&obj, "x").unwrap(), (0.0, 20.0));
        assert_eq!(m.similarity, build_similarity_matrix(&m.graph, &m.sim_config).unwrap());
        undo(&mut m, &mut h).unwrap();
                assert_eq!(m, before);
    }

    #[test]
    fn new_commit_clears_redo() {
        let mut m = model();
        let mut h = History::default();
        let obj = ObjectRef::Node("a".into());
        commit_edit(&mut m, &mut h, &obj, "x", Some(5.0), 6.0, EditSource::Drag, 1).unwrap();
        undo(&mut m, &mut h).unwrap();
        assert!(h.can_redo());
        commit_edit(&mut m, &mut h, &obj, "x", Some(5.0), 4.0, EditSource::Drag, 2).unwrap();
        assert!(!h.can_redo());
    }

    #[test]
    fn invalid_values_rejected() {
        let mut m = model();
        let mut h = History::default();
        let obj = ObjectRef::Node("a".into());
        assert!(matches!(
            commit_edit(&mut m, &mut h, &obj, "x", None, f64::NAN, EditSource::Drag, 1),
            Err(EditError::NonFinite(_))
        ));
        let edge = ObjectRef::Edge(crate::graph::EdgeKey::new("a", "b"));
        assert!(matches!(
            commit_edit(&mut m, &mut h, &edge, "weight", Some(2.0), -1.0, EditSource::Drag, 1),
            Err(EditError::NegativeWeight(_))
        ));
        assert!(!h.can_undo());
    }
}
