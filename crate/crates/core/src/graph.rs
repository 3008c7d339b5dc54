//! Multivariate graph model: nodes and undirected edges carrying optional
//! quantitative attribute values, plus ingestion from JSON or a CSV pair.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name under which the edge weight is exposed to the visualizations.
pub const WEIGHT_ATTRIBUTE: &str = "weight";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("edge #{index} references unknown node `{id}`")]
    DanglingEndpoint { index: usize, id: String },
    #[error("edge #{index} is a self-loop on `{id}`")]
    SelfLoop { index: usize, id: String },
    #[error("edge #{index} duplicates the pair ({a}, {b})")]
    DuplicateEdge { index: usize, a: String, b: String },
    #[error("edge #{index} has invalid weight {weight}")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("{record}: attribute `{attribute}` has non-finite value")]
    NonFinite { record: String, attribute: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown edge ({0}, {1})")]
    UnknownEdge(String, String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeDef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub observed_min: f64,
    pub observed_max: f64,
}

impl AttributeDef {
    pub fn new(name: impl Into<String>, min: f64, max: f64) -> Self {
        Self {
            name: name.into(),
            unit: None,
            observed_min: min,
            observed_max: max,
        }
    }

    pub fn span(&self) -> f64 {
        self.observed_max - self.observed_min
    }

    /// Grows the observed range so that it covers `v`. Returns whether the
    /// range changed.
    pub fn widen_to(&mut self, v: f64) -> bool {
        let mut changed = false;
        if v < self.observed_min {
            self.observed_min = v;
            changed = true;
        }
        if v > self.observed_max {
            self.observed_max = v;
            changed = true;
        }
        changed
    }
}

/// Maps `v` into `[0, 1]` relative to the observed range of `def`.
///
/// Values outside the range are clamped. A constant attribute (min = max)
/// maps everything to 0.5.
pub fn normalize_value(v: f64, def: &AttributeDef) -> f64 {
    let span = def.span();
    if span <= 0.0 {
        return 0.5;
    }
    let clamped = v.clamp(def.observed_min, def.observed_max);
    ((clamped - def.observed_min) / span).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub label: String,
    /// Absent key means the value is missing.
    pub values: BTreeMap<String, f64>,
}

impl Node {
    pub fn value(&self, attribute: &str) -> Option<f64> {
        self.values.get(attribute).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    /// Canonical endpoint order: `source < target` by id.
    pub source: String,
    pub target: String,
    pub weight: f64,
    pub values: BTreeMap<String, f64>,
}

impl Edge {
    pub fn value(&self, attribute: &str) -> Option<f64> {
        if attribute == WEIGHT_ATTRIBUTE {
            Some(self.weight)
        } else {
            self.values.get(attribute).copied()
        }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey {
            source: self.source.clone(),
            target: self.target.clone(),
        }
    }
}

/// Canonically ordered endpoint pair identifying an undirected edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub source: String,
    pub target: String,
}

impl EdgeKey {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Self { source: a, target: b }
        } else {
            Self { source: b, target: a }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectKind {
    Node,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellCounts {
    pub total: usize,
    pub adjacency: usize,
    pub similarity: usize,
    pub diagonal: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub cell_counts: CellCounts,
}

/// An undirected graph whose nodes and edges carry quantitative attributes.
///
/// Index structures are derived on construction and are not part of the
/// structural equality.
#[derive(Debug, Clone)]
pub struct MultivariateGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_schema: Vec<AttributeDef>,
    edge_schema: Vec<AttributeDef>,
    weight_def: AttributeDef,
    node_index: HashMap<String, usize>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl PartialEq for MultivariateGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && self.node_schema == other.node_schema
            && self.edge_schema == other.edge_schema
    }
}

impl MultivariateGraph {
    /// Validates and canonicalizes raw nodes and edges. Schemas are derived
    /// from the values present; `node_attrs`/`edge_attrs` fix the attribute
    /// order (names seen only in the data are appended in first-seen order).
    pub fn new(
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        node_attrs: &[String],
        edge_attrs: &[String],
    ) -> Result<Self, GraphError> {
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if node_index.insert(node.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateNode(node.id.clone()));
            }
            for (name, v) in &node.values {
                if !v.is_finite() {
                    return Err(GraphError::NonFinite {
                        record: format!("node `{}`", node.id),
                        attribute: name.clone(),
                    });
                }
            }
        }

        let mut canonical = Vec::with_capacity(edges.len());
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (index, edge) in edges.into_iter().enumerate() {
            for id in [&edge.source, &edge.target] {
                if !node_index.contains_key(id) {
                    return Err(GraphError::DanglingEndpoint {
                        index,
                        id: id.clone(),
                    });
                }
            }
            if edge.source == edge.target {
                return Err(GraphError::SelfLoop {
                    index,
                    id: edge.source.clone(),
                });
            }
            if !edge.weight.is_finite() || edge.weight < 0.0 {
                return Err(GraphError::InvalidWeight {
                    index,
                    weight: edge.weight,
                });
            }
            for (name, v) in &edge.values {
                if !v.is_finite() {
                    return Err(GraphError::NonFinite {
                        record: format!("edge #{index}"),
                        attribute: name.clone(),
                    });
                }
            }
            let key = EdgeKey::new(edge.source, edge.target);
            let (a, b) = (node_index[&key.source], node_index[&key.target]);
            let pair = (a.min(b), a.max(b));
            if edge_index.insert(pair, canonical.len()).is_some() {
                return Err(GraphError::DuplicateEdge {
                    index,
                    a: key.source,
                    b: key.target,
                });
            }
            canonical.push(Edge {
                source: key.source,
                target: key.target,
                weight: edge.weight,
                values: edge.values,
            });
        }

        let node_schema = observe_schema(
            node_attrs,
            nodes.iter().map(|n| &n.values),
        );
        let edge_schema = observe_schema(
            edge_attrs,
            canonical.iter().map(|e| &e.values),
        );
        let weight_def = observe_weight(&canonical);

        Ok(Self {
            nodes,
            edges: canonical,
            node_schema,
            edge_schema,
            weight_def,
            node_index,
            edge_index,
        })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new(), &[], &[]).expect("empty graph is valid")
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_schema(&self) -> &[AttributeDef] {
        &self.node_schema
    }

    pub fn edge_schema(&self) -> &[AttributeDef] {
        &self.edge_schema
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn node(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    pub fn node_by_id(&self, id: &str) -> Option<&Node> {
        self.node_index(id).map(|i| &self.nodes[i])
    }

    /// Edge between two node indices, in either order.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<&Edge> {
        self.edge_index
            .get(&(a.min(b), a.max(b)))
            .map(|&i| &self.edges[i])
    }

    /// Index into `edges()` of the edge between two node indices.
    pub fn edge_index_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn edge_by_key(&self, key: &EdgeKey) -> Option<&Edge> {
        let a = self.node_index(&key.source)?;
        let b = self.node_index(&key.target)?;
        self.edge_between(a, b)
    }

    pub fn degree(&self, index: usize) -> usize {
        self.edge_index
            .keys()
            .filter(|(a, b)| *a == index || *b == index)
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(a, b) in self.edge_index.keys() {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn node_attribute(&self, name: &str) -> Option<&AttributeDef> {
        self.node_schema.iter().find(|d| d.name == name)
    }

    /// Edge attribute definition; `weight` resolves to the weight range.
    pub fn edge_attribute(&self, name: &str) -> Option<&AttributeDef> {
        if name == WEIGHT_ATTRIBUTE {
            return Some(&self.weight_def);
        }
        self.edge_schema.iter().find(|d| d.name == name)
    }

    pub fn attribute(&self, kind: ObjectKind, name: &str) -> Option<&AttributeDef> {
        match kind {
            ObjectKind::Node => self.node_attribute(name),
            ObjectKind::Edge => self.edge_attribute(name),
        }
    }

    pub fn weight_def(&self) -> &AttributeDef {
        &self.weight_def
    }

    pub fn max_weight(&self) -> f64 {
        self.weight_def.observed_max
    }

    /// Attributes shown for edges: the weight followed by the edge schema.
    pub fn edge_attribute_names(&self) -> Vec<String> {
        std::iter::once(WEIGHT_ATTRIBUTE.to_string())
            .chain(self.edge_schema.iter().map(|d| d.name.clone()))
            .collect()
    }

    pub fn stats(&self) -> GraphStats {
        graph_stats(self)
    }

    /// Writes (or clears, with `None`) a node attribute value. The schema is
    /// not touched; callers widen it explicitly on commit.
    pub fn set_node_value(
        &mut self,
        id: &str,
        attribute: &str,
        value: Option<f64>,
    ) -> Result<Option<f64>, GraphError> {
        if self.node_attribute(attribute).is_none() {
            return Err(GraphError::UnknownAttribute(attribute.to_string()));
        }
        let index = self
            .node_index(id)
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))?;
        let values = &mut self.nodes[index].values;
        Ok(match value {
            Some(v) => values.insert(attribute.to_string(), v),
            None => values.remove(attribute),
        })
    }

    pub fn set_edge_value(
        &mut self,
        key: &EdgeKey,
        attribute: &str,
        value: Option<f64>,
    ) -> Result<Option<f64>, GraphError> {
        if self.edge_attribute(attribute).is_none() {
            return Err(GraphError::UnknownAttribute(attribute.to_string()));
        }
        let (a, b) = match (self.node_index(&key.source), self.node_index(&key.target)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(GraphError::UnknownEdge(
                    key.source.clone(),
                    key.target.clone(),
                ))
            }
        };
        let index = *self
            .edge_index
            .get(&(a.min(b), a.max(b)))
            .ok_or_else(|| GraphError::UnknownEdge(key.source.clone(), key.target.clone()))?;
        let edge = &mut self.edges[index];
        if attribute == WEIGHT_ATTRIBUTE {
            // The weight is never missing; clearing it falls back to zero.
            let old = edge.weight;
            edge.weight = value.unwrap_or(0.0);
            return Ok(Some(old));
        }
        Ok(match value {
            Some(v) => edge.values.insert(attribute.to_string(), v),
            None => edge.values.remove(attribute),
        })
    }

    /// Replaces the observed range of an attribute (used to widen on commit
    /// and to restore on undo).
    pub fn set_attribute_range(
        &mut self,
        kind: ObjectKind,
        attribute: &str,
        min: f64,
        max: f64,
    ) -> Result<(), GraphError> {
        let def = match kind {
            ObjectKind::Node => self.node_schema.iter_mut().find(|d| d.name == attribute),
            ObjectKind::Edge if attribute == WEIGHT_ATTRIBUTE => Some(&mut self.weight_def),
            ObjectKind::Edge => self.edge_schema.iter_mut().find(|d| d.name == attribute),
        }
        .ok_or_else(|| GraphError::UnknownAttribute(attribute.to_string()))?;
        def.observed_min = min;
        def.observed_max = max;
        Ok(())
    }

    /// Serializes to the dataset JSON interchange format.
    pub fn to_json(&self) -> String {
        let doc = DatasetDoc {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    label: Some(n.label.clone()),
                    attrs: ordered_values(&self.node_schema, &n.values),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    source: e.source.clone(),
                    target: e.target.clone(),
                    weight: Some(e.weight),
                    attrs: ordered_values(&self.edge_schema, &e.values),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("dataset serializes")
    }
}

fn ordered_values(
    schema: &[AttributeDef],
    values: &BTreeMap<String, f64>,
) -> IndexMap<String, Option<f64>> {
    schema
        .iter()
        .map(|d| (d.name.clone(), values.get(&d.name).copied()))
        .collect()
}

fn observe_schema<'a>(
    declared: &[String],
    records: impl Iterator<Item = &'a BTreeMap<String, f64>> + Clone,
) -> Vec<AttributeDef> {
    let mut order: Vec<String> = Vec::new();
    for name in declared {
        if !order.contains(name) {
            order.push(name.clone());
        }
    }
    for values in records.clone() {
        for name in values.keys() {
            if !order.contains(name) {
                order.push(name.clone());
            }
        }
    }
    order
        .into_iter()
        .map(|name| {
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for values in records.clone() {
                if let Some(&v) = values.get(&name) {
                    min = min.min(v);
                    max = max.max(v);
                }
            }
            if min > max {
                // no observations at all
                min = 0.0;
                max = 0.0;
            }
            AttributeDef::new(name, min, max)
        })
        .collect()
}

fn observe_weight(edges: &[Edge]) -> AttributeDef {
    let max = edges.iter().map(|e| e.weight).fold(0.0, f64::max);
    // Absent edges read as weight 0, so the weight range is anchored at zero.
    AttributeDef::new(WEIGHT_ATTRIBUTE, 0.0, max)
}

pub fn graph_stats(g: &MultivariateGraph) -> GraphStats {
    let n = g.node_count();
    let pairs = n * n.saturating_sub(1) / 2;
    GraphStats {
        node_count: n,
        edge_count: g.edge_count(),
        cell_counts: CellCounts {
            total: n * n,
            adjacency: pairs,
            similarity: pairs,
            diagonal: n,
        },
    }
}

// ---------------------------------------------------------------------------
// Ingestion

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetFormat {
    Json,
    Csv,
}

#[derive(Serialize, Deserialize)]
struct DatasetDoc {
    #[serde(default)]
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: String,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    attrs: IndexMap<String, Option<f64>>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    source: String,
    target: String,
    #[serde(default)]
    weight: Option<f64>,
    #[serde(default)]
    attrs: IndexMap<String, Option<f64>>,
}

fn collect_values(attrs: IndexMap<String, Option<f64>>, order: &mut Vec<String>) -> BTreeMap<String, f64> {
    let mut values = BTreeMap::new();
    for (name, v) in attrs {
        if !order.contains(&name) {
            order.push(name.clone());
        }
        if let Some(v) = v {
            values.insert(name, v);
        }
    }
    values
}

/// Parses the dataset JSON format:
/// `{"nodes":[{"id","label","attrs":{..}}],"edges":[{"source","target","weight","attrs":{..}}]}`.
/// A `null` attribute value or an absent key is a missing value; an absent
/// weight defaults to 1.
pub fn parse_json(bytes: &[u8]) -> Result<MultivariateGraph, GraphError> {
    let doc: DatasetDoc =
        serde_json::from_slice(bytes).map_err(|e| GraphError::Parse(e.to_string()))?;
    let mut node_attrs = Vec::new();
    let mut edge_attrs = Vec::new();
    let nodes = doc
        .nodes
        .into_iter()
        .map(|n| Node {
            label: n.label.unwrap_or_else(|| n.id.clone()),
            id: n.id,
            values: collect_values(n.attrs, &mut node_attrs),
        })
        .collect();
    let edges = doc
        .edges
        .into_iter()
        .map(|e| Edge {
            source: e.source,
            target: e.target,
            weight: e.weight.unwrap_or(1.0),
            values: collect_values(e.attrs, &mut edge_attrs),
        })
        .collect();
    MultivariateGraph::new(nodes, edges, &node_attrs, &edge_attrs)
}

fn parse_cell(record: &str, column: &str, cell: &str) -> Result<Option<f64>, GraphError> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>()
        .map(Some)
        .map_err(|_| GraphError::Parse(format!("{record}: column `{column}`: `{cell}` is not a number")))
}

/// Parses a CSV pair: a node table (`id,label,<attr>...`, empty cell =
/// missing) and an edge list (`source,target,weight[,<attr>...]`).
pub fn parse_csv_pair(nodes_csv: &[u8], edges_csv: &[u8]) -> Result<MultivariateGraph, GraphError> {
    let csv_err = |e: csv::Error| GraphError::Parse(e.to_string());

    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(nodes_csv);
    let headers = reader.headers().map_err(csv_err)?.clone();
    let id_col = headers
        .iter()
        .position(|h| h == "id")
        .ok_or_else(|| GraphError::Parse("node table: missing `id` column".into()))?;
    let label_col = headers.iter().position(|h| h == "label");
    let node_attrs: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != id_col && Some(*i) != label_col)
        .map(|(_, h)| h.to_string())
        .collect();
    let mut nodes = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let id = record.get(id_col).unwrap_or_default().to_string();
        let name = format!("node row {}", row + 1);
        let mut values = BTreeMap::new();
        for (i, header) in headers.iter().enumerate() {
            if i == id_col || Some(i) == label_col {
                continue;
            }
            if let Some(v) = parse_cell(&name, header, record.get(i).unwrap_or_default())? {
                values.insert(header.to_string(), v);
            }
        }
        let label = label_col
            .and_then(|c| record.get(c))
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .unwrap_or_else(|| id.clone());
        nodes.push(Node { id, label, values });
    }

    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(edges_csv);
    let headers = reader.headers().map_err(csv_err)?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (src_col, dst_col) = match (col("source"), col("target")) {
        (Some(s), Some(t)) => (s, t),
        _ => return Err(GraphError::Parse("edge list: needs `source` and `target` columns".into())),
    };
    let weight_col = col("weight");
    let skip = |i: usize| i == src_col || i == dst_col || Some(i) == weight_col;
    let edge_attrs: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip(*i))
        .map(|(_, h)| h.to_string())
        .collect();
    let mut edges = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let name = format!("edge row {}", row + 1);
        let weight = match weight_col {
            Some(c) => parse_cell(&name, "weight", record.get(c).unwrap_or_default())?.unwrap_or(1.0),
            None => 1.0,
        };
        let mut values = BTreeMap::new();
        for (i, header) in headers.iter().enumerate() {
            if skip(i) {
                continue;
            }
            if let Some(v) = parse_cell(&name, header, record.get(i).unwrap_or_default())? {
                values.insert(header.to_string(), v);
            }
        }
        edges.push(Edge {
            source: record.get(src_col).unwrap_or_default().to_string(),
            target: record.get(dst_col).unwrap_or_default().to_string(),
            weight,
            values,
        });
    }
    MultivariateGraph::new(nodes, edges, &node_attrs, &edge_attrs)
}

/// Raw dataset input for either supported format.
pub enum DatasetBytes<'a> {
    Json(&'a [u8]),
    CsvPair { nodes: &'a [u8], edges: &'a [u8] },
}

pub fn parse_dataset(input: DatasetBytes<'_>) -> Result<MultivariateGraph, GraphError> {
    match input {
        DatasetBytes::Json(bytes) => parse_json(bytes),
        DatasetBytes::CsvPair { nodes, edges } => parse_csv_pair(nodes, edges),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn def(min: f64, max: f64) -> AttributeDef {
        AttributeDef::new("a", min, max)
    }

    #[test]
    fn normalize_bounds_and_degenerate() {
        assert_eq!(normalize_value(2.0, &def(2.0, 6.0)), 0.0);
        assert_eq!(normalize_value(6.0, &def(2.0, 6.0)), 1.0);
        assert_eq!(normalize_value(3.0, &def(3.0, 3.0)), 0.5);
        // clamped outside the range
        assert_eq!(normalize_value(-10.0, &def(2.0, 6.0)), 0.0);
        assert_eq!(normalize_value(10.0, &def(2.0, 6.0)), 1.0);
    }

    #[test]
    fn empty_dataset() {
        let g = parse_json(br#"{"nodes":[],"edges":[]}"#).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
        assert!(g.node_schema().is_empty());
        assert!(g.edge_schema().is_empty());
    }

    #[test]
    fn edges_are_canonicalized() {
        let g = parse_json(
            br#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[{"source":"b","target":"a","weight":2}]}"#,
        )
        .unwrap();
        let e = &g.edges()[0];
        assert_eq!((e.source.as_str(), e.target.as_str()), ("a", "b"));
        assert!(g.edge_between(1, 0).is_some());
    }

    #[test]
    fn edge_attributes_beyond_weight() {
        let g = parse_json(
            br#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[{"source":"a","target":"b","weight":2,"attrs":{"passes":14}}]}"#,
        )
        .unwrap();
        assert_eq!(g.edges()[0].value("passes"), Some(14.0));
        assert!(g.edge_attribute("passes").is_some());
        let back = parse_json(g.to_json().as_bytes()).unwrap();
        assert_eq!(back.edges()[0].value("passes"), Some(14.0));
        assert_eq!(back.edges()[0].value("weight"), Some(2.0));
    }

    #[test]
    fn validation_errors_name_the_record() {
        let dangling = parse_json(br#"{"nodes":[{"id":"a"}],"edges":[{"source":"a","target":"z"}]}"#);
        assert_eq!(
            dangling.unwrap_err(),
            GraphError::DanglingEndpoint { index: 0, id: "z".into() }
        );
        let dup = parse_json(br#"{"nodes":[{"id":"a"},{"id":"a"}]}"#);
        assert_eq!(dup.unwrap_err(), GraphError::DuplicateNode("a".into()));
        let self_loop = parse_json(br#"{"nodes":[{"id":"a"}],"edges":[{"source":"a","target":"a"}]}"#);
        assert!(matches!(self_loop.unwrap_err(), GraphError::SelfLoop { index: 0, .. }));
        let dup_edge = parse_json(
            br#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[{"source":"a","target":"b"},{"source":"b","target":"a"}]}"#,
        );
        assert!(matches!(dup_edge.unwrap_err(), GraphError::DuplicateEdge { index: 1, .. }));
        let negative = parse_json(
            br#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[{"source":"a","target":"b","weight":-1}]}"#,
        );
        assert!(matches!(negative.unwrap_err(), GraphError::InvalidWeight { index: 0, .. }));
        assert!(matches!(parse_json(b"{nodes"), Err(GraphError::Parse(_))));
    }

    #[test]
    fn missing_values_stay_missing() {
        let g = parse_json(
            br#"{"nodes":[{"id":"a","attrs":{"x":1,"y":null}},{"id":"b","attrs":{"x":3,"y":5}}]}"#,
        )
        .unwrap();
        assert_eq!(g.node(0).value("y"), None);
        let y = g.node_attribute("y").unwrap();
        assert_eq!((y.observed_min, y.observed_max), (5.0, 5.0));
        let x = g.node_attribute("x").unwrap();
        assert_eq!((x.observed_min, x.observed_max), (1.0, 3.0));
        let names: Vec<_> = g.node_schema().iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, ["x", "y"]);
    }

    #[test]
    fn csv_pair_ingestion() {
        let nodes = b"id,label,goals,shots\nb,Bee,3,\na,Ay,,10\n";
        let edges = b"source,target,weight\nb,a,2\n";
        let g = parse_csv_pair(nodes, edges).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.node(0).label, "Bee");
        assert_eq!(g.node(0).value("shots"), None);
        assert_eq!(g.node(1).value("shots"), Some(10.0));
        assert_eq!(g.edges()[0].source, "a");
        assert_eq!(g.max_weight(), 2.0);
        let bad = parse_csv_pair(b"id,x\na,abc\n", b"source,target\n");
        assert!(matches!(bad, Err(GraphError::Parse(m)) if m.contains("node row 1")));
    }

    #[test]
    fn cell_counts() {
        let line = |n: usize| {
            let nodes: Vec<_> = (0..n)
                .map(|i| Node { id: format!("n{i}"), label: String::new(), values: BTreeMap::new() })
                .collect();
            MultivariateGraph::new(nodes, vec![], &[], &[]).unwrap()
        };
        let s = graph_stats(&line(95)).cell_counts;
        assert_eq!((s.total, s.adjacency, s.similarity, s.diagonal), (9025, 4465, 4465, 95));
        let s = graph_stats(&line(1)).cell_counts;
        assert_eq!((s.total, s.adjacency, s.similarity, s.diagonal), (1, 0, 0, 1));
        // brute-force enumeration of unordered pairs
        let mut pairs = 0;
        for i in 0..10 {
            for j in 0..10 {
                if i < j {
                    pairs += 1;
                }
            }
        }
        assert_eq!(graph_stats(&line(10)).cell_counts.adjacency, pairs);
    }

    #[test]
    fn json_roundtrip() {
        let src = br#"{"nodes":[{"id":"a","label":"A","attrs":{"x":1.5}},{"id":"b","attrs":{"x":2,"y":4}}],
                      "edges":[{"source":"b","target":"a","weight":3,"attrs":{"len":7}}]}"#;
        let g = parse_json(src).unwrap();
        let again = parse_json(g.to_json().as_bytes()).unwrap();
        assert_eq!(g, again);
    }
}
