//! Partial hypergraph morphisms, match enumeration and the subgraph ordering.

mod matcher;
mod subgraph;

pub use matcher::MatchProblem;
pub use subgraph::{
    enumerate_matches, enumerate_subgraph_quotients, restrict, subgraph_leq, SubObject,
};

use thiserror::Error;

use crate::graph::{EdgeId, Hypergraph, NodeId};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("morphism shapes do not line up ({0})")]
    Mismatch(&'static str),
    #[error("edge {edge} is mapped to an edge with a different label")]
    LabelMismatch { edge: EdgeId },
    #[error("edge {edge} is mapped but its attachment is not preserved")]
    ConnMismatch { edge: EdgeId },
    #[error("edge {edge} is mapped but incident node {node} is not")]
    UndefinedIncidentNode { edge: EdgeId, node: NodeId },
    #[error("image out of range")]
    OutOfRange,
}

/// A pair of partial maps on nodes and edges. Source and target shapes are
/// recorded so composition can be checked; the graphs themselves are passed
/// alongside whenever structure matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialMorphism {
    nodes: Vec<Option<NodeId>>,
    edges: Vec<Option<EdgeId>>,
    target_nodes: usize,
    target_edges: usize,
}

impl PartialMorphism {
    pub fn new(
        nodes: Vec<Option<NodeId>>,
        edges: Vec<Option<EdgeId>>,
        target: &Hypergraph,
    ) -> Self {
        PartialMorphism {
            nodes,
            edges,
            target_nodes: target.node_count(),
            target_edges: target.edge_count(),
        }
    }

    pub(crate) fn from_parts(
        nodes: Vec<Option<NodeId>>,
        edges: Vec<Option<EdgeId>>,
        target_nodes: usize,
        target_edges: usize,
    ) -> Self {
        PartialMorphism {
            nodes,
            edges,
            target_nodes,
            target_edges,
        }
    }

    pub fn identity(g: &Hypergraph) -> Self {
        PartialMorphism {
            nodes: g.nodes().map(Some).collect(),
            edges: g.edges().map(|(e, _)| Some(e)).collect(),
            target_nodes: g.node_count(),
            target_edges: g.edge_count(),
        }
    }

    /// The everywhere-undefined morphism `source -> target`.
    pub fn undefined(source: &Hypergraph, target: &Hypergraph) -> Self {
        PartialMorphism {
            nodes: vec![None; source.node_count()],
            edges: vec![None; source.edge_count()],
            target_nodes: target.node_count(),
            target_edges: target.edge_count(),
        }
    }

    #[inline]
    pub fn node(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v.index()]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.edges[e.index()]
    }

    pub fn set_node(&mut self, v: NodeId, image: Option<NodeId>) {
        self.nodes[v.index()] = image;
    }

    pub fn set_edge(&mut self, e: EdgeId, image: Option<EdgeId>) {
        self.edges[e.index()] = image;
    }

    pub fn node_map(&self) -> &[Option<NodeId>] {
        &self.nodes
    }

    pub fn edge_map(&self) -> &[Option<EdgeId>] {
        &self.edges
    }

    pub fn source_shape(&self) -> (usize, usize) {
        (self.nodes.len(), self.edges.len())
    }

    pub fn target_shape(&self) -> (usize, usize) {
        (self.target_nodes, self.target_edges)
    }

    pub fn is_total(&self) -> bool {
        self.nodes.iter().all(Option::is_some) && self.edges.iter().all(Option::is_some)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen_n = vec![false; self.target_nodes];
        for v in self.nodes.iter().flatten() {
            if std::mem::replace(&mut seen_n[v.index()], true) {
                return false;
            }
        }
        let mut seen_e = vec![false; self.target_edges];
        for e in self.edges.iter().flatten() {
            if std::mem::replace(&mut seen_e[e.index()], true) {
                return false;
            }
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit_n = vec![false; self.target_nodes];
        for v in self.nodes.iter().flatten() {
            hit_n[v.index()] = true;
        }
        let mut hit_e = vec![false; self.target_edges];
        for e in self.edges.iter().flatten() {
            hit_e[e.index()] = true;
        }
        hit_n.into_iter().all(|b| b) && hit_e.into_iter().all(|b| b)
    }

    /// Total and injective.
    pub fn is_match(&self) -> bool {
        self.is_total() && self.is_injective()
    }

    /// Partial, injective and surjective.
    pub fn is_subgraph_morphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Checks the morphism conditions against concrete graphs.
    pub fn check(&self, source: &Hypergraph, target: &Hypergraph) -> Result<(), MorphismError> {
        if self.source_shape() != (source.node_count(), source.edge_count()) {
            return Err(MorphismError::Mismatch("source"));
        }
        if self.target_shape() != (target.node_count(), target.edge_count()) {
            return Err(MorphismError::Mismatch("target"));
        }
        if self
            .nodes
            .iter()
            .flatten()
            .any(|v| v.index() >= target.node_count())
            || self
                .edges
                .iter()
                .flatten()
                .any(|e| e.index() >= target.edge_count())
        {
            return Err(MorphismError::OutOfRange);
        }
        for (id, edge) in source.edges() {
            let Some(img) = self.edge(id) else { continue };
            let timg = target.edge(img);
            if timg.label != edge.label {
                return Err(MorphismError::LabelMismatch { edge: id });
            }
            if timg.conn.len() != edge.conn.len() {
                return Err(MorphismError::ConnMismatch { edge: id });
            }
            for (&v, &w) in edge.conn.iter().zip(&timg.conn) {
                match self.node(v) {
                    None => return Err(MorphismError::UndefinedIncidentNode { edge: id, node: v }),
                    Some(x) if x != w => return Err(MorphismError::ConnMismatch { edge: id }),
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }

    /// `next ∘ self`: defined on `x` iff `self(x)` and `next(self(x))` are.
    pub fn then(&self, next: &PartialMorphism) -> Result<PartialMorphism, MorphismError> {
        if self.target_shape() != next.source_shape() {
            return Err(MorphismError::Mismatch("composition"));
        }
        Ok(PartialMorphism {
            nodes: self
                .nodes
                .iter()
                .map(|v| v.and_then(|v| next.node(v)))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| e.and_then(|e| next.edge(e)))
                .collect(),
            target_nodes: next.target_nodes,
            target_edges: next.target_edges,
        })
    }

    /// Inverse of an injective morphism, as a partial map back to the source.
    pub fn invert(&self) -> Option<PartialMorphism> {
        if !self.is_injective() {
            return None;
        }
        let mut nodes = vec![None; self.target_nodes];
        for (i, v) in self.nodes.iter().enumerate() {
            if let Some(v) = v {
                nodes[v.index()] = Some(NodeId(i as u32));
            }
        }
        let mut edges = vec![None; self.target_edges];
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(e) = e {
                edges[e.index()] = Some(EdgeId(i as u32));
            }
        }
        Some(PartialMorphism {
            nodes,
            edges,
            target_nodes: self.nodes.len(),
            target_edges: self.edges.len(),
        })
    }

    /// Number of source elements mapped onto each target node.
    pub(crate) fn node_preimages(&self) -> Vec<Vec<NodeId>> {
        let mut pre = vec![Vec::new(); self.target_nodes];
        for (i, v) in self.nodes.iter().enumerate() {
            if let Some(v) = v {
                pre[v.index()].push(NodeId(i as u32));
            }
        }
        pre
    }

    pub(crate) fn edge_preimages(&self) -> Vec<Vec<EdgeId>> {
        let mut pre = vec![Vec::new(); self.target_edges];
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(e) = e {
                pre[e.index()].push(EdgeId(i as u32));
            }
        }
        pre
    }
}

/// `g ∘ f`, the spec-level composition.
pub fn compose(f: &PartialMorphism, g: &PartialMorphism) -> Result<PartialMorphism, MorphismError> {
    f.then(g)
}
