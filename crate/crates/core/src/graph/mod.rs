//! Labelled hypergraphs over an arity signature.
//!
//! Node and edge identifiers are dense indices local to one graph. Identity
//! across graphs is only ever expressed through [`PartialMorphism`]s.
//!
//! [`PartialMorphism`]: crate::morphism::PartialMorphism

mod canon;
mod path;

pub use canon::{canonical_form, canonical_key, CanonicalKey};
pub use path::{longest_path, within_path_bound, PathBound};

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;
use thiserror::Error;

use crate::morphism::{MatchProblem, PartialMorphism};

/// Index of an edge label inside a [`Signature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("label `{0}` declared twice")]
    Duplicate(String),
    #[error("too many labels")]
    Overflow,
}

/// Finite set of edge labels, each with a fixed arity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    arities: Vec<usize>,
    by_name: HashMap<String, Label>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a signature from `(name, arity)` pairs.
    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for (name, arity) in pairs {
            sig.add(name, arity)?;
        }
        Ok(sig)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<Label, SignatureError> {
        if self.by_name.contains_key(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        let idx = u16::try_from(self.names.len()).map_err(|_| SignatureError::Overflow)?;
        let label = Label(idx);
        self.names.push(name.to_string());
        self.arities.push(arity);
        self.by_name.insert(name.to_string(), label);
        Ok(label)
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, label: Label) -> &str {
        self.names
            .get(label.0 as usize)
            .map(String::as_str)
            .unwrap_or("?")
    }

    pub fn arity(&self, label: Label) -> Option<usize> {
        self.arities.get(label.0 as usize).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = (Label, &str, usize)> + '_ {
        self.names
            .iter()
            .zip(&self.arities)
            .enumerate()
            .map(|(i, (n, &a))| (Label(i as u16), n.as_str(), a))
    }
}

/// A hyperedge: a label and an ordered sequence of attached nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: Label,
    pub conn: SmallVec<[NodeId; 3]>,
}

/// A finite hypergraph. Nodes are `0..node_count`, edges `0..edges.len()`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    nodes: u32,
    edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_nodes(n: usize) -> Self {
        Hypergraph {
            nodes: n as u32,
            edges: Vec::new(),
        }
    }

    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.nodes);
        self.nodes += 1;
        id
    }

    /// Appends an edge without checking it; see [`validate_graph`].
    pub fn add_edge(&mut self, label: Label, conn: impl IntoIterator<Item = NodeId>) -> EdgeId {
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Edge {
            label,
            conn: conn.into_iter().collect(),
        });
        id
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.nodes as usize
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of nodes plus number of edges.
    #[inline]
    pub fn size(&self) -> usize {
        self.node_count() + self.edge_count()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes == 0 && self.edges.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.nodes).map(NodeId)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (EdgeId, &Edge)> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| (EdgeId(i as u32), e))
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    /// For every node, the edges attached to it (each edge listed once per node).
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.node_count()];
        for (id, edge) in self.edges() {
            for (i, &v) in edge.conn.iter().enumerate() {
                if edge.conn[..i].contains(&v) {
                    continue;
                }
                if let Some(slot) = inc.get_mut(v.index()) {
                    slot.push(id);
                }
            }
        }
        inc
    }

    /// Number of edges per label, indexed by label.
    pub fn label_counts(&self) -> Vec<u32> {
        let mut counts = Vec::new();
        for e in &self.edges {
            let l = e.label.0 as usize;
            if counts.len() <= l {
                counts.resize(l + 1, 0);
            }
            counts[l] += 1;
        }
        counts
    }

    /// Disjoint union; the nodes and edges of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Hypergraph {
        let mut out = self.clone();
        let shift = self.nodes;
        out.nodes += other.nodes;
        for e in &other.edges {
            out.edges.push(Edge {
                label: e.label,
                conn: e.conn.iter().map(|v| NodeId(v.0 + shift)).collect(),
            });
        }
        out
    }

    /// Renames nodes by `perm[old] = new` and reorders edges into sorted order.
    pub(crate) fn relabelled(&self, perm: &[u32]) -> Hypergraph {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                label: e.label,
                conn: e.conn.iter().map(|v| NodeId(perm[v.index()])).collect(),
            })
            .collect();
        edges.sort();
        Hypergraph {
            nodes: self.nodes,
            edges,
        }
    }
}

/// A violated hypergraph invariant.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("edge {edge}: unknown label #{label}")]
    UnknownLabel { edge: EdgeId, label: u16 },
    #[error("edge {edge}: arity mismatch for `{label}` (expected {expected}, found {found})")]
    ArityMismatch {
        edge: EdgeId,
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("edge {edge}: dangling endpoint {node}")]
    DanglingEndpoint { edge: EdgeId, node: NodeId },
}

/// Checks every hypergraph invariant of `g` against `sig`.
pub fn validate_graph(g: &Hypergraph, sig: &Signature) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    for (id, edge) in g.edges() {
        match sig.arity(edge.label) {
            None => out.push(Violation::UnknownLabel {
                edge: id,
                label: edge.label.0,
            }),
            Some(ar) if ar != edge.conn.len() => out.push(Violation::ArityMismatch {
                edge: id,
                label: sig.name(edge.label).to_string(),
                expected: ar,
                found: edge.conn.len(),
            }),
            Some(_) => {}
        }
        for &v in &edge.conn {
            if v.index() >= g.node_count() {
                out.push(Violation::DanglingEndpoint { edge: id, node: v });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Returns a total bijective structure-preserving map `g -> h`, if one exists.
pub fn isomorphic(g: &Hypergraph, h: &Hypergraph) -> Option<PartialMorphism> {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    if invariant_hash(g) != invariant_hash(h) {
        return None;
    }
    // total + injective between equally sized graphs is bijective
    MatchProblem::new(g, h).first()
}

/// Isomorphism-invariant hash: node count plus the sorted multiset of
/// `(label, endpoint degree profile)` tuples. Equal graphs up to
/// isomorphism always hash equal; the converse does not hold.
pub fn invariant_hash(g: &Hypergraph) -> u64 {
    let colors = node_profiles(g);
    let mut node_colors: Vec<u64> = colors.clone();
    node_colors.sort_unstable();
    let mut tuples: Vec<(u16, SmallVec<[u64; 3]>)> = g
        .edges
        .iter()
        .map(|e| {
            (
                e.label.0,
                e.conn.iter().map(|v| colors[v.index()]).collect(),
            )
        })
        .collect();
    tuples.sort_unstable();
    let mut h = DefaultHasher::new();
    g.nodes.hash(&mut h);
    node_colors.hash(&mut h);
    tuples.hash(&mut h);
    h.finish()
}

/// A per-node hash of the sorted `(label, position)` incidences.
fn node_profiles(g: &Hypergraph) -> Vec<u64> {
    let mut profiles: Vec<Vec<(u16, u8)>> = vec![Vec::new(); g.node_count()];
    for e in &g.edges {
        for (pos, v) in e.conn.iter().enumerate() {
            profiles[v.index()].push((e.label.0, pos as u8));
        }
    }
    profiles
        .into_iter()
        .map(|mut p| {
            p.sort_unstable();
            let mut h = DefaultHasher::new();
            p.hash(&mut h);
            h.finish()
        })
        .collect()
}
