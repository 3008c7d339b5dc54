//! The matrix model: graph, similarity selection and matrix, and the row
//! ordering, kept consistent with each other.

use thiserror::Error;

use crate::graph::{GraphError, MultivariateGraph, ObjectKind};
use crate::ordering::{order_nodes, OrderStrategy, Ordering, OrderingError};
use crate::scene::ObjectRef;
use crate::similarity::{
    build_similarity_matrix, update_similarity_row, SimilarityConfig, SimilarityError, SimilarityMatrix,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error("{0:?} is not an editable object")]
    NotAnObject(ObjectRef),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixModel {
    pub graph: MultivariateGraph,
    pub sim_config: SimilarityConfig,
    pub similarity: SimilarityMatrix,
    pub ordering: Ordering,
}

impl MatrixModel {
    /// Builds the model with every node attribute selected for similarity
    /// (or an all-undefined matrix when the graph has no attributes).
    pub fn new(graph: MultivariateGraph) -> Self {
        let sim_config = SimilarityConfig::all_attributes(&graph);
        let similarity = build_similarity_matrix(&graph, &sim_config)
            .unwrap_or_else(|_| SimilarityMatrix::identity(graph.node_count()));
        let ordering = Ordering::identity(graph.node_count());
        Self { graph, sim_config, similarity, ordering }
    }

    pub fn n(&self) -> usize {
        self.graph.node_count()
    }

    pub fn set_similarity_attributes(&mut self, cfg: SimilarityConfig) -> Result<(), ModelError> {
        let similarity = build_similarity_matrix(&self.graph, &cfg)?;
        let ordering = match self.ordering.strategy {
            OrderStrategy::SimilarityClustering => {
                order_nodes(&self.graph, &OrderStrategy::SimilarityClustering, Some(&similarity))?
            }
            _ => self.ordering.clone(),
        };
        self.sim_config = cfg;
        self.similarity = similarity;
        self.ordering = ordering;
        Ok(())
    }

    pub fn set_ordering(&mut self, strategy: &OrderStrategy) -> Result<(), ModelError> {
        self.ordering = order_nodes(&self.graph, strategy, Some(&self.similarity))?;
        Ok(())
    }

    fn rebuild_similarity(&mut self) {
        if let Ok(m) = build_similarity_matrix(&self.graph, &self.sim_config) {
            self.similarity = m;
        }
    }

    pub fn value_of(&self, object: &ObjectRef, attribute: &str) -> Result<Option<f64>, ModelError> {
        match object {
            ObjectRef::Node(id) => {
                self.graph.node_attribute(attribute).ok_or_else(|| GraphError::UnknownAttribute(attribute.into()))?;
                let node = self.graph.node_by_id(id).ok_or_else(|| GraphError::UnknownNode(id.clone()))?;
                Ok(node.value(attribute))
            }
            ObjectRef::Edge(key) => {
                self.graph.edge_attribute(attribute).ok_or_else(|| GraphError::UnknownAttribute(attribute.into()))?;
                let edge = self
                    .graph
                    .edge_by_key(key)
                    .ok_or_else(|| GraphError::UnknownEdge(key.source.clone(), key.target.clone()))?;
                Ok(edge.value(attribute))
            }
            other => Err(ModelError::NotAnObject(other.clone())),
        }
    }

    pub fn range_of(&self, object: &ObjectRef, attribute: &str) -> Result<(f64, f64), ModelError> {
        let kind = object_kind(object)?;
        let def = self
            .graph
            .attribute(kind, attribute)
            .ok_or_else(|| GraphError::UnknownAttribute(attribute.into()))?;
        Ok((def.observed_min, def.observed_max))
    }

    /// Writes a value without touching attribute ranges and refreshes the
    /// similarity row of an edited node. Used for previews and as the write
    /// step of commits.
    pub fn write_value(&mut self, object: &ObjectRef, attribute: &str, value: Option<f64>) -> Result<(), ModelError> {
        match object {
            ObjectRef::Node(id) => {
                self.graph.set_node_value(id, attribute, value)?;
                if self.sim_config.selected_attributes.iter().any(|a| a == attribute) {
                    update_similarity_row(&mut self.similarity, &self.graph, &self.sim_config, id)?;
                }
            }
            ObjectRef::Edge(key) => {
                self.graph.set_edge_value(key, attribute, value)?;
            }
            other => return Err(ModelError::NotAnObject(other.clone())),
        }
        Ok(())
    }

    /// Sets an attribute's observed range. Any change renormalizes every
    /// node, so the similarity matrix is rebuilt in full.
    pub fn set_range(&mut self, object: &ObjectRef, attribute: &str, range: (f64, f64)) -> Result<(), ModelError> {
        let kind = object_kind(object)?;
        if self.range_of(object, attribute)? == range {
            return Ok(());
        }
        self.graph.set_attribute_range(kind, attribute, range.0, range.1)?;
        if kind == ObjectKind::Node && self.sim_config.selected_attributes.iter().any(|a| a == attribute) {
            self.rebuild_similarity();
        }
        Ok(())
    }

    /// Re-derives orderings that depend on attribute values or similarity.
    pub fn refresh_ordering(&mut self) -> Result<(), ModelError> {
        match self.ordering.strategy {
            OrderStrategy::Input | OrderStrategy::DegreeDesc => Ok(()),
            _ => {
                let strategy = self.ordering.strategy.clone();
                self.set_ordering(&strategy)
            }
        }
    }

    /// Node attributes shown by default: the similarity selection.
    pub fn default_node_attributes(&self) -> Vec<String> {
        self.sim_config.selected_attributes.clone()
    }
}

pub fn object_kind(object: &ObjectRef) -> Result<ObjectKind, ModelError> {
    match object {
        ObjectRef::Node(_) => Ok(ObjectKind::Node),
        ObjectRef::Edge(_) => Ok(ObjectKind::Edge),
        other => Err(ModelError::NotAnObject(other.clone())),
    }
}
