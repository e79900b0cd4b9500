use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{canonical_form, Hypergraph, Signature};

use super::{print_graph, print_graph_body};

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Stats {
    pub iterations: usize,
    pub backward_steps: usize,
    pub wall_ms: u64,
}

/// Outcome of a check, in a form that serializes deterministically.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Report {
    pub stationary: bool,
    /// Basis members in canonical form, sorted.
    pub basis: Vec<String>,
    /// Verdict per initial graph name.
    pub verdicts: BTreeMap<String, String>,
    pub stats: Stats,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Canonical forms of the given graphs in a fixed order: by size, then by
/// printed body.
pub fn canonical_graphs<'a>(
    basis: impl IntoIterator<Item = &'a Hypergraph>,
    sig: &Signature,
) -> Vec<Hypergraph> {
    let mut out: Vec<(usize, String, Hypergraph)> = basis
        .into_iter()
        .map(|g| {
            let c = canonical_form(g).0;
            (c.size(), print_graph_body(&c, sig), c)
        })
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, _, g)| g).collect()
}

/// The given graphs as `graph` declarations named `b0`, `b1`, ... in the
/// order of [`canonical_graphs`], so isomorphic bases print identically
/// regardless of discovery order.
pub fn canonical_basis<'a>(
    basis: impl IntoIterator<Item = &'a Hypergraph>,
    sig: &Signature,
) -> Vec<String> {
    canonical_graphs(basis, sig)
        .iter()
        .enumerate()
        .map(|(i, g)| print_graph(&format!("b{i}"), g, sig))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    #[test]
    fn basis_order_is_irrelevant() {
        let sig = Signature::from_pairs([("T", 1), ("F", 2)]).unwrap();
        let mut a = Hypergraph::with_nodes(2);
        a.add_edge(sig.label("F").unwrap(), [NodeId(0), NodeId(1)]);
        a.add_edge(sig.label("T").unwrap(), [NodeId(1)]);
        let mut b = Hypergraph::with_nodes(2);
        b.add_edge(sig.label("T").unwrap(), [NodeId(0)]);
        b.add_edge(sig.label("F").unwrap(), [NodeId(1), NodeId(0)]);
        let mut c = Hypergraph::with_nodes(1);
        c.add_edge(sig.label("T").unwrap(), [NodeId(0)]);
        assert_eq!(
            canonical_basis([&a, &c], &sig),
            canonical_basis([&c, &b], &sig)
        );
        assert_eq!(
            canonical_basis([&a, &c], &sig)[0],
            "graph b0 { nodes n0; T(n0); }"
        );
    }
}
