//! WebAssembly binding for the browser demo. The page owns the canvas and
//! input handling; this side only runs protocol commands and hands back
//! scenes as JSON.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use rmc_core::fixture;
use rmc_core::layout::Viewport;
use rmc_core::session::{Command, EventKind, Session, SessionConfig};

#[wasm_bindgen]
pub struct Engine {
    session: Session,
    seq: u64,
}

#[wasm_bindgen]
impl Engine {
    /// A session over the bundled 95-player dataset, ordered by club and
    /// compared on minutes, appearances, shots and goals.
    #[wasm_bindgen(constructor)]
    pub fn new(width: f64, height: f64) -> Engine {
        let config = SessionConfig { viewport: Viewport::new(width, height), ..SessionConfig::default() };
        let mut engine = Engine { session: Session::new(config), seq: 0 };
        let doc: Value = serde_json::from_str(&fixture::soccer_json()).expect("bundled dataset");
        engine.run("load_dataset", json!({ "dataset": doc }));
        engine.run("set_ordering", json!({"strategy": "cluster:club"}));
        engine.run("set_similarity_attributes", json!({"attributes": ["minutes", "appearances", "shots", "goals"]}));
        engine
    }

    /// Runs one command given as `kind` plus a JSON payload and returns the
    /// events as a JSON array.
    pub fn command(&mut self, kind: &str, payload: &str) -> String {
        let payload = match serde_json::from_str(payload) {
            Ok(v) => v,
            Err(e) => return json!([{"kind": "error", "payload": {"code": "E_PARSE", "message": e.to_string()}}]).to_string(),
        };
        Value::Array(self.run(kind, payload)).to_string()
    }

    /// The current scene as JSON: viewport plus marks in paint order.
    pub fn scene(&self) -> String {
        self.session.scene().map(|s| serde_json::to_string(s).expect("scene serializes")).unwrap_or_default()
    }

    pub fn digest(&self) -> String {
        self.session.digest().unwrap_or_default()
    }

    /// Matrix cell (row, col) under a point in scene coordinates, as
    /// `[row, col]`, or an empty array outside the matrix.
    pub fn cell_at(&self, x: f64, y: f64) -> Vec<u32> {
        cell_at(&self.session, x, y).map(|(r, c)| vec![r as u32, c as u32]).unwrap_or_default()
    }

    /// Id of the responsive cell under a point, or 0.
    pub fn rmc_at(&self, x: f64, y: f64) -> u32 {
        let Some(rmcs) = self.session.rmcs() else { return 0 };
        let Some((r, c)) = cell_at(&self.session, x, y) else { return 0 };
        rmcs.rmcs()
            .iter()
            .find(|m| m.region.row_range().contains(&r) && m.region.col_range().contains(&c))
            .map_or(0, |m| m.id as u32)
    }
}

impl Engine {
    fn run(&mut self, kind: &str, payload: Value) -> Vec<Value> {
        self.seq += 1;
        self.session
            .handle_command(Command::new(self.seq, kind, payload))
            .into_iter()
            .map(|e| {
                // scenes are fetched separately to keep messages small
                let payload = if e.kind == EventKind::SceneUpdate || e.kind == EventKind::HighlightUpdate {
                    json!({"digest": e.payload["digest"]})
                } else {
                    e.payload
                };
                json!({"kind": e.kind, "payload": payload})
            })
            .collect()
    }
}

fn cell_at(session: &Session, x: f64, y: f64) -> Option<(usize, usize)> {
    let view = session.view()?;
    let model = session.model()?;
    let (ox, oy) = (view.matrix_area().x, view.matrix_area().y);
    let layout = rmc_core::scenegen::solve_view_layout(model, session.rmcs()?, view).ok()?;
    let col = layout.cols.index_at(x - ox - view.pan.0)?;
    let row = layout.rows.index_at(y - oy - view.pan.1)?;
    Some((row, col))
}
