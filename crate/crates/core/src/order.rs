//! Antichains under the subgraph ordering, representing upward-closed sets.

use crate::graph::{invariant_hash, Hypergraph};
use crate::morphism::subgraph_leq;

#[derive(Clone, Debug)]
struct Member {
    id: usize,
    graph: Hypergraph,
    labels: Vec<u32>,
}

impl Member {
    fn new(id: usize, graph: Hypergraph) -> Self {
        Member {
            id,
            labels: graph.label_counts(),
            graph,
        }
    }

    /// Cheap necessary condition for `self ⊑ other`.
    fn may_embed_in(&self, other: &Member) -> bool {
        self.graph.node_count() <= other.graph.node_count()
            && self.graph.edge_count() <= other.graph.edge_count()
            && self
                .labels
                .iter()
                .enumerate()
                .all(|(l, &c)| c <= other.labels.get(l).copied().unwrap_or(0))
    }

    fn leq(&self, other: &Member) -> bool {
        self.may_embed_in(other) && subgraph_leq(&self.graph, &other.graph).is_some()
    }
}

/// A finite antichain of graphs. Members carry ids that stay fixed while
/// they remain in the basis.
#[derive(Clone, Debug, Default)]
pub struct Basis {
    members: Vec<Member>,
    next_id: usize,
}

impl Basis {
    pub fn new() -> Self {
        Basis::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Hypergraph> {
        self.members.iter().map(|m| &m.graph)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Hypergraph)> {
        self.members.iter().map(|m| (m.id, &m.graph))
    }

    pub fn get(&self, id: usize) -> Option<&Hypergraph> {
        self.members.iter().find(|m| m.id == id).map(|m| &m.graph)
    }

    /// True iff some member is a subgraph of `g`.
    pub fn represents(&self, g: &Hypergraph) -> bool {
        let probe = Member::new(usize::MAX, g.clone());
        self.members.iter().any(|m| m.leq(&probe))
    }

    /// Adds `g` unless it is already represented, dropping members above it.
    /// Returns the new member's id.
    pub fn insert(&mut self, g: Hypergraph) -> Option<usize> {
        let cand = Member::new(self.next_id, g);
        if self.members.iter().any(|m| m.leq(&cand)) {
            return None;
        }
        self.members.retain(|m| !cand.leq(m));
        self.next_id += 1;
        let id = cand.id;
        self.members.push(cand);
        Some(id)
    }
}

/// Minimal elements of `graphs`, one per isomorphism class. Smaller graphs
/// are considered first; ties keep input order after ordering by invariant
/// hash, so the result is deterministic.
pub fn minimize(graphs: impl IntoIterator<Item = Hypergraph>) -> Basis {
    let mut all: Vec<Hypergraph> = graphs.into_iter().collect();
    all.sort_by_cached_key(|g| (g.size(), g.node_count(), invariant_hash(g)));
    let mut basis = Basis::new();
    for g in all {
        // sorted by size: nothing later can be strictly below an earlier member
        basis.insert(g);
    }
    basis
}

pub fn represented(g: &Hypergraph, basis: &Basis) -> bool {
    basis.represents(g)
}
