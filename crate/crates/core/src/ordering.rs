//! Row/column orderings of the overview matrix.

use std::cmp::Ordering as CmpOrdering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::MultivariateGraph;
use crate::similarity::SimilarityMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderingError {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("similarity clustering needs a similarity matrix")]
    MissingSimilarity,
    #[error("invalid ordering `{0}`")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum OrderStrategy {
    Input,
    DegreeDesc,
    Attribute { name: String, #[serde(default = "yes")] desc: bool },
    /// Groups nodes sharing a value of `label_attribute`.
    Cluster { label_attribute: String },
    SimilarityClustering,
}

fn yes() -> bool {
    true
}

impl FromStr for OrderStrategy {
    type Err = OrderingError;

    /// CLI syntax: `input|degree|attr:<name>[:asc]|cluster:<name>|simclust`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.splitn(3, ':');
        let head = parts.next().unwrap_or_default();
        let arg = parts.next();
        let extra = parts.next();
        match (head, arg, extra) {
            ("input", None, None) => Ok(Self::Input),
            ("degree", None, None) => Ok(Self::DegreeDesc),
            ("simclust", None, None) => Ok(Self::SimilarityClustering),
            ("attr", Some(name), dir) if !name.is_empty() => Ok(Self::Attribute {
                name: name.to_string(),
                desc: match dir {
                    None | Some("desc") => true,
                    Some("asc") => false,
                    Some(_) => return Err(OrderingError::Invalid(s.to_string())),
                },
            }),
            ("cluster", Some(name), None) if !name.is_empty() => Ok(Self::Cluster {
                label_attribute: name.to_string(),
            }),
            _ => Err(OrderingError::Invalid(s.to_string())),
        }
    }
}

impl fmt::Display for OrderStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input => f.write_str("input"),
            Self::DegreeDesc => f.write_str("degree"),
            Self::Attribute { name, desc: true } => write!(f, "attr:{name}"),
            Self::Attribute { name, desc: false } => write!(f, "attr:{name}:asc"),
            Self::Cluster { label_attribute } => write!(f, "cluster:{label_attribute}"),
            Self::SimilarityClustering => f.write_str("simclust"),
        }
    }
}

/// A bijection from matrix position to node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    pub strategy: OrderStrategy,
    permutation: Vec<usize>,
    position: Vec<usize>,
}

impl Ordering {
    pub fn identity(n: usize) -> Self {
        Self::from_permutation(OrderStrategy::Input, (0..n).collect())
    }

    fn from_permutation(strategy: OrderStrategy, permutation: Vec<usize>) -> Self {
        let mut position = vec![0; permutation.len()];
        for (pos, &node) in permutation.iter().enumerate() {
            position[node] = pos;
        }
        Self {
            strategy,
            permutation,
            position,
        }
    }

    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    /// Node index displayed at matrix position `pos`.
    pub fn node_at(&self, pos: usize) -> usize {
        self.permutation[pos]
    }

    /// Matrix position of node index `node`.
    pub fn position_of(&self, node: usize) -> usize {
        self.position[node]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }
}

pub fn order_nodes(
    g: &MultivariateGraph,
    strategy: &OrderStrategy,
    sim: Option<&SimilarityMatrix>,
) -> Result<Ordering, OrderingError> {
    let n = g.node_count();
    let by_id = |a: &usize, b: &usize| g.node(*a).id.cmp(&g.node(*b).id);
    let mut perm: Vec<usize> = (0..n).collect();
    match strategy {
        OrderStrategy::Input => {}
        OrderStrategy::DegreeDesc => {
            let deg = g.degrees();
            perm.sort_by(|a, b| deg[*b].cmp(&deg[*a]).then_with(|| by_id(a, b)));
        }
        OrderStrategy::Attribute { name, desc } => {
            if g.node_attribute(name).is_none() {
                return Err(OrderingError::UnknownAttribute(name.clone()));
            }
            let key = |i: &usize| g.node(*i).value(name);
            perm.sort_by(|a, b| {
                let primary = match (key(a), key(b)) {
                    (Some(x), Some(y)) if *desc => y.total_cmp(&x),
                    (Some(x), Some(y)) => x.total_cmp(&y),
                    // missing values go last in either direction
                    (Some(_), None) => CmpOrdering::Less,
                    (None, Some(_)) => CmpOrdering::Greater,
                    (None, None) => CmpOrdering::Equal,
                };
                primary.then_with(|| by_id(a, b))
            });
        }
        OrderStrategy::Cluster { label_attribute } => {
            if g.node_attribute(label_attribute).is_none() {
                return Err(OrderingError::UnknownAttribute(label_attribute.clone()));
            }
            let key = |i: &usize| g.node(*i).value(label_attribute);
            perm.sort_by(|a, b| {
                let primary = match (key(a), key(b)) {
                    (Some(x), Some(y)) => x.total_cmp(&y),
                    (Some(_), None) => CmpOrdering::Less,
                    (None, Some(_)) => CmpOrdering::Greater,
                    (None, None) => CmpOrdering::Equal,
                };
                primary.then_with(|| by_id(a, b))
            });
        }
        OrderStrategy::SimilarityClustering => {
            let sim = sim.ok_or(OrderingError::MissingSimilarity)?;
            if sim.len() != n {
                return Err(OrderingError::MissingSimilarity);
            }
            let ids: Vec<&str> = g.nodes().iter().map(|n| n.id.as_str()).collect();
            perm = average_linkage_leaf_order(sim, &ids);
        }
    }
    Ok(Ordering::from_permutation(strategy.clone(), perm))
}

struct Cluster<'a> {
    leaves: Vec<usize>,
    min_id: &'a str,
}

/// Average-linkage agglomerative clustering on `1 - similarity` (undefined
/// distances count as 1). Returns the dendrogram leaves left to right; at
/// every merge the subtree with the smaller minimum id goes first, and among
/// equally close pairs the one with the lexicographically smallest
/// `(min_id, min_id)` merges first.
fn average_linkage_leaf_order(sim: &SimilarityMatrix, ids: &[&str]) -> Vec<usize> {
    let n = ids.len();
    let mut clusters: Vec<Option<Cluster>> = (0..n)
        .map(|i| {
            Some(Cluster {
                leaves: vec![i],
                min_id: ids[i],
            })
        })
        .collect();
    let mut dist = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                dist[i][j] = 1.0 - sim.get(i, j).unwrap_or(0.0);
            }
        }
    }

    for _ in 1..n {
        let mut best: Option<(f64, &str, &str, usize, usize)> = None;
        for i in 0..n {
            let Some(ci) = &clusters[i] else { continue };
            for j in (i + 1)..n {
                let Some(cj) = &clusters[j] else { continue };
                let (lo, hi) = if ci.min_id <= cj.min_id {
                    (ci.min_id, cj.min_id)
                } else {
                    (cj.min_id, ci.min_id)
                };
                let d = dist[i][j];
                let better = match best {
                    None => true,
                    Some((bd, blo, bhi, _, _)) => {
                        d < bd || (d == bd && (lo, hi) < (blo, bhi))
                    }
                };
                if better {
                    best = Some((d, lo, hi, i, j));
                }
            }
        }
        let Some((_, _, _, i, j)) = best else { break };
        let cj = clusters[j].take().expect("live cluster");
        let ci = clusters[i].take().expect("live cluster");
        let (size_i, size_j) = (ci.leaves.len() as f64, cj.leaves.len() as f64);
        for k in 0..n {
            if k == i || k == j || clusters[k].is_none() {
                continue;
            }
            let d = (size_i * dist[i][k] + size_j * dist[j][k]) / (size_i + size_j);
            dist[i][k] = d;
            dist[k][i] = d;
        }
        let (first, second) = if ci.min_id <= cj.min_id { (ci, cj) } else { (cj, ci) };
        let mut leaves = first.leaves;
        leaves.extend(second.leaves);
        clusters[i] = Some(Cluster {
            leaves,
            min_id: first.min_id,
        });
    }
    clusters
        .into_iter()
        .flatten()
        .flat_map(|c| c.leaves)
        .collect()
}
