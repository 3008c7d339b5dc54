//! Pairwise node similarity over a selected attribute subset.
//!
//! Similarity is one minus the mean absolute difference of normalized values,
//! taken over the attributes both nodes have values for. Pairs without any
//! shared attribute have undefined similarity, which is kept distinct from
//! zero ("unknown" is not "dissimilar").

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{normalize_value, AttributeDef, MultivariateGraph, Node};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimilarityError {
    #[error("no similarity attributes selected")]
    EmptySelection,
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("similarity matrix has {matrix} rows but the graph has {graph} nodes")]
    SizeMismatch { matrix: usize, graph: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    #[default]
    PairwiseComplete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityConfig {
    pub selected_attributes: Vec<String>,
    #[serde(default)]
    pub missing_policy: MissingPolicy,
}

impl SimilarityConfig {
    pub fn new<S: Into<String>>(attributes: impl IntoIterator<Item = S>) -> Self {
        Self {
            selected_attributes: attributes.into_iter().map(Into::into).collect(),
            missing_policy: MissingPolicy::PairwiseComplete,
        }
    }

    /// All node attributes of `g`, in schema order.
    pub fn all_attributes(g: &MultivariateGraph) -> Self {
        Self::new(g.node_schema().iter().map(|d| d.name.clone()))
    }

    /// Checks the selection against `schema` and returns the selected
    /// definitions in schema order, deduplicated. Evaluating in schema order
    /// makes every similarity value independent of the selection order.
    pub fn resolve<'a>(&self, schema: &'a [AttributeDef]) -> Result<Vec<&'a AttributeDef>, SimilarityError> {
        if self.selected_attributes.is_empty() {
            return Err(SimilarityError::EmptySelection);
        }
        for name in &self.selected_attributes {
            if !schema.iter().any(|d| &d.name == name) {
                return Err(SimilarityError::UnknownAttribute(name.clone()));
            }
        }
        Ok(schema
            .iter()
            .filter(|d| self.selected_attributes.contains(&d.name))
            .collect())
    }
}

/// Similarity of two nodes, `None` when they share no selected value.
pub fn similarity(
    u: &Node,
    v: &Node,
    cfg: &SimilarityConfig,
    schema: &[AttributeDef],
) -> Result<Option<f64>, SimilarityError> {
    let defs = cfg.resolve(schema)?;
    let a = normalized_row(u, &defs);
    let b = normalized_row(v, &defs);
    Ok(row_similarity(&a, &b))
}

fn normalized_row(node: &Node, defs: &[&AttributeDef]) -> Vec<Option<f64>> {
    defs.iter()
        .map(|d| node.value(&d.name).map(|v| normalize_value(v, d)))
        .collect()
}

fn row_similarity(a: &[Option<f64>], b: &[Option<f64>]) -> Option<f64> {
    let mut sum = 0.0;
    let mut shared = 0usize;
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x, y) {
            sum += (x - y).abs();
            shared += 1;
        }
    }
    if shared == 0 {
        None
    } else {
        Some((1.0 - sum / shared as f64).clamp(0.0, 1.0))
    }
}

/// Symmetric `n × n` matrix of optional similarities with a unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    cells: Vec<Option<f64>>,
}

impl SimilarityMatrix {
    pub fn identity(n: usize) -> Self {
        let mut cells = vec![None; n * n];
        for i in 0..n {
            cells[i * n + i] = Some(1.0);
        }
        Self { n, cells }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Option<f64>) {
        self.cells[i * self.n + j] = v;
        self.cells[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[Option<f64>] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }
}

pub fn build_similarity_matrix(
    g: &MultivariateGraph,
    cfg: &SimilarityConfig,
) -> Result<SimilarityMatrix, SimilarityError> {
    let defs = cfg.resolve(g.node_schema())?;
    let rows: Vec<_> = g.nodes().iter().map(|n| normalized_row(n, &defs)).collect();
    let n = rows.len();
    let mut m = SimilarityMatrix::identity(n);
    for i in 0..n {
        for j in (i + 1)..n {
            m.set(i, j, row_similarity(&rows[i], &rows[j]));
        }
    }
    Ok(m)
}

/// Recomputes the row and column of `changed` in place; every other cell is
/// left untouched. Only valid while the attribute ranges are unchanged, since
/// a range change renormalizes every node.
pub fn update_similarity_row(
    m: &mut SimilarityMatrix,
    g: &MultivariateGraph,
    cfg: &SimilarityConfig,
    changed: &str,
) -> Result<(), SimilarityError> {
    let defs = cfg.resolve(g.node_schema())?;
    if m.n != g.node_count() {
        return Err(SimilarityError::SizeMismatch {
            matrix: m.n,
            graph: g.node_count(),
        });
    }
    let k = g
        .node_index(changed)
        .ok_or_else(|| SimilarityError::UnknownNode(changed.to_string()))?;
    let row_k = normalized_row(g.node(k), &defs);
    for j in 0..m.n {
        if j == k {
            continue;
        }
        let row_j = normalized_row(g.node(j), &defs);
        // same argument order as the full build so results are bit-identical
        let v = if j < k {
            row_similarity(&row_j, &row_k)
        } else {
            row_similarity(&row_k, &row_j)
        };
        m.set(k, j, v);
    }
    Ok(())
}
