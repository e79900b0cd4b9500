//! Brute-force reference computations for small graphs.
//!
//! Everything here is exhaustive and only meant for graphs of a handful of
//! elements. The search engine is checked against these results.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::backward::{backward_step, SearchConfig};
use crate::graph::{
    canonical_key, within_path_bound, CanonicalKey, Hypergraph, Label, NodeId, PathBound, Signature,
};
use crate::morphism::{subgraph_leq, PartialMorphism};
use crate::order::minimize;
use crate::pushout::{is_pushout, PushoutResult};
use crate::rules::{apply, PreparedRule};

/// Largest total element count the enumerators accept.
pub const GUARD: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_nodes: usize,
    pub max_edges: usize,
    /// Optional cap on nodes plus edges.
    pub max_elements: Option<usize>,
    pub path_bound: Option<PathBound>,
}

impl EnumBounds {
    /// All graphs with at most `n` elements in total.
    pub fn elements(n: usize) -> Self {
        EnumBounds {
            max_nodes: n,
            max_edges: n,
            max_elements: Some(n),
            path_bound: None,
        }
    }

    fn total(&self) -> usize {
        let sum = self.max_nodes + self.max_edges;
        self.max_elements.map_or(sum, |m| m.min(sum))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration bound {0} exceeds the limit of {GUARD} elements")]
    Guard(usize),
}

/// One representative per isomorphism class of graphs within the bounds,
/// in order of node count, then edge count, then construction order.
pub fn enumerate_graphs(sig: &Signature, b: EnumBounds) -> Result<Vec<Hypergraph>, OracleError> {
    if b.total() > GUARD {
        return Err(OracleError::Guard(b.total()));
    }
    let limit = b.total();
    let mut out = Vec::new();
    for n in 0..=b.max_nodes.min(limit) {
        let mut candidates: Vec<(Label, Vec<NodeId>)> = Vec::new();
        for (label, _, arity) in sig.labels() {
            for tuple in tuples(n, arity) {
                candidates.push((label, tuple));
            }
        }
        let max_m = b.max_edges.min(limit - n);
        let mut seen: HashSet<Hypergraph> = HashSet::new();
        for m in 0..=max_m {
            if m > 0 && candidates.is_empty() {
                break;
            }
            let mut level = Vec::new();
            multisets(candidates.len(), m, &mut |pick| {
                let mut g = Hypergraph::with_nodes(n);
                for &i in pick {
                    let (label, conn) = &candidates[i];
                    g.add_edge(*label, conn.iter().copied());
                }
                if b.path_bound.is_some_and(|pb| !within_path_bound(&g, pb)) {
                    return;
                }
                let key = canonical_key(&g);
                if seen.insert(key.clone()) {
                    level.push(key);
                }
            });
            out.extend(level);
        }
    }
    Ok(out)
}

fn tuples(n: usize, arity: usize) -> Vec<Vec<NodeId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n as u32).map(move |v| {
                    let mut t = t.clone();
                    t.push(NodeId(v));
                    t
                })
            })
            .collect();
    }
    out
}

fn multisets(n: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, size: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in from..n {
            cur.push(i);
            go(n, size, i, cur, f);
            cur.pop();
        }
    }
    go(n, size, 0, &mut Vec::new(), f);
}

/// Every one-step successor of every host, computed once.
pub struct SuccessorTable {
    pub hosts: Vec<Hypergraph>,
    pub successors: Vec<Vec<Hypergraph>>,
}

impl SuccessorTable {
    pub fn build(rules: &[PreparedRule], hosts: Vec<Hypergraph>) -> Self {
        let successors = hosts
            .par_iter()
            .map(|h| {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for rule in rules {
                    for (inst, m) in rule.applicable_instances(h) {
                        let next = canonical_key(&apply(&inst, &m, h));
                        if seen.insert(next.clone()) {
                            out.push(next);
                        }
                    }
                }
                out
            })
            .collect();
        SuccessorTable { hosts, successors }
    }

    /// Hosts with a successor above `g`.
    pub fn predecessors(&self, g: &Hypergraph) -> Vec<Hypergraph> {
        self.hosts
            .iter()
            .zip(&self.successors)
            .filter(|(_, succ)| succ.iter().any(|s| subgraph_leq(g, s).is_some()))
            .map(|(h, _)| h.clone())
            .collect()
    }
}

/// All enumerated graphs that rewrite in one step to something above `g`.
pub fn pred_oracle(
    rules: &[PreparedRule],
    g: &Hypergraph,
    sig: &Signature,
    b: EnumBounds,
) -> Result<Vec<Hypergraph>, OracleError> {
    let hosts = enumerate_graphs(sig, b)?;
    Ok(SuccessorTable::build(rules, hosts).predecessors(g))
}

/// Minimal elements on which the oracle and the backward step disagree.
#[derive(Clone, Debug, Default)]
pub struct Discrepancy {
    /// Minimal oracle predecessors the backward step does not produce.
    pub missing: Vec<Hypergraph>,
    /// Minimal backward outputs within the table bounds the oracle rejects.
    pub extra: Vec<Hypergraph>,
}

impl Discrepancy {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Compares the minimal oracle predecessors of `g` with the minimal outputs
/// of one backward step over all rules. Backward outputs larger than
/// `max_elements` or outside the configured path bound are dropped, since the
/// table cannot contain them.
pub fn agreement(
    rules: &[PreparedRule],
    g: &Hypergraph,
    table: &SuccessorTable,
    cfg: &SearchConfig,
    max_elements: usize,
) -> Discrepancy {
    let oracle = minimize(table.predecessors(g));
    let produced = rules
        .iter()
        .flat_map(|r| backward_step(r, g, cfg))
        .map(|p| p.graph);
    let backward = minimize(produced.filter(|h| {
        h.size() <= max_elements && cfg.path_bound.is_none_or(|pb| within_path_bound(h, pb))
    }));
    let keys = |b: &crate::order::Basis| -> HashSet<CanonicalKey> {
        b.graphs().map(canonical_key).collect()
    };
    let (ok, bk) = (keys(&oracle), keys(&backward));
    Discrepancy {
        missing: oracle
            .graphs()
            .filter(|h| !bk.contains(&canonical_key(h)))
            .cloned()
            .collect(),
        extra: backward
            .graphs()
            .filter(|h| !ok.contains(&canonical_key(h)))
            .cloned()
            .collect(),
    }
}

/// Every pushout complement of `delta: A ⇀ B` and `comatch: B -> G` whose
/// non-`A` part is a subgraph of the elements of `G` outside the co-match.
/// Context edges may attach to any node of `A` where they meet the image of
/// the co-match; each candidate is certified by the pushout check.
pub fn complement_oracle(
    a: &Hypergraph,
    delta: &PartialMorphism,
    b: &Hypergraph,
    comatch: &PartialMorphism,
    g: &Hypergraph,
) -> Vec<Hypergraph> {
    let inv = comatch.invert().expect("co-match must be injective");
    let ctx_nodes: Vec<NodeId> = g.nodes().filter(|&v| inv.node(v).is_none()).collect();
    let ctx_edges: Vec<_> = g
        .edges()
        .filter(|(e, _)| inv.edge(*e).is_none())
        .map(|(e, _)| e)
        .collect();
    assert!(
        ctx_nodes.len() + ctx_edges.len() <= 16,
        "host too large for the oracle"
    );
    let mut out = Vec::new();
    for nmask in 0u32..(1 << ctx_nodes.len()) {
        for emask in 0u32..(1 << ctx_edges.len()) {
            let mut c = a.clone();
            let mut glue_nodes: Vec<Option<NodeId>> = a
                .nodes()
                .map(|v| delta.node(v).map(|w| comatch.node(w).expect("total")))
                .collect();
            let mut glue_edges: Vec<_> = a
                .edges()
                .map(|(e, _)| delta.edge(e).map(|f| comatch.edge(f).expect("total")))
                .collect();
            let mut local = vec![None; g.node_count()];
            for (i, &v) in ctx_nodes.iter().enumerate() {
                if nmask >> i & 1 == 1 {
                    local[v.index()] = Some(c.add_node());
                    glue_nodes.push(Some(v));
                }
            }
            // each endpoint: a chosen context node, or any node of A
            let mut slots: Vec<Vec<NodeId>> = Vec::new();
            let mut chosen = Vec::new();
            let mut feasible = true;
            for (i, &e) in ctx_edges.iter().enumerate() {
                if emask >> i & 1 == 0 {
                    continue;
                }
                for &v in &g.edge(e).conn {
                    match (local[v.index()], inv.node(v)) {
                        (Some(l), _) => slots.push(vec![l]),
                        (None, Some(_)) => slots.push(a.nodes().collect()),
                        (None, None) => feasible = false,
                    }
                }
                chosen.push(e);
                glue_edges.push(Some(e));
            }
            if !feasible || slots.iter().any(Vec::is_empty) {
                continue;
            }
            let glue = PartialMorphism::new(glue_nodes, glue_edges, g);
            let square = PushoutResult {
                object: g.clone(),
                left: comatch.clone(),
                right: glue,
            };
            let mut pick = vec![0usize; slots.len()];
            loop {
                let mut cand = c.clone();
                let mut k = 0;
                for &e in &chosen {
                    let edge = g.edge(e);
                    let conn: Vec<NodeId> = (0..edge.conn.len())
                        .map(|j| slots[k + j][pick[k + j]])
                        .collect();
                    k += edge.conn.len();
                    cand.add_edge(edge.label, conn);
                }
                let matching = PartialMorphism::from_parts(
                    a.nodes().map(Some).collect(),
                    a.edges().map(|(e, _)| Some(e)).collect(),
                    cand.node_count(),
                    cand.edge_count(),
                );
                if is_pushout(delta, b, &matching, &cand, &square) {
                    out.push(cand);
                }
                let mut i = 0;
                loop {
                    if i == pick.len() {
                        break;
                    }
                    pick[i] += 1;
                    if pick[i] < slots[i].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == pick.len() {
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(pairs: &[(&str, usize)]) -> Signature {
        Signature::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn unary_signature_counts() {
        let s = sig(&[("T", 1)]);
        let b = EnumBounds {
            max_nodes: 1,
            max_edges: 1,
            max_elements: None,
            path_bound: None,
        };
        assert_eq!(enumerate_graphs(&s, b).unwrap().len(), 3);
        let zero = EnumBounds { max_nodes: 0, ..b };
        assert_eq!(enumerate_graphs(&s, zero).unwrap(), vec![Hypergraph::new()]);
    }

    #[test]
    fn binary_edge_is_enumerated() {
        let s = sig(&[("F", 2)]);
        let b = EnumBounds {
            max_nodes: 2,
            max_edges: 1,
            max_elements: None,
            path_bound: Some(PathBound(1)),
        };
        let all = enumerate_graphs(&s, b).unwrap();
        let mut fab = Hypergraph::with_nodes(2);
        fab.add_edge(Label(0), [NodeId(0), NodeId(1)]);
        assert!(all.contains(&canonical_key(&fab)));
        // empty; node; loop; two nodes; edge; loop beside a node
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn guard_is_enforced() {
        let s = sig(&[("T", 1)]);
        assert_eq!(
            enumerate_graphs(&s, EnumBounds::elements(9)).unwrap_err(),
            OracleError::Guard(9)
        );
    }

    #[test]
    fn no_rules_no_predecessors() {
        let s = sig(&[("T", 1)]);
        let preds = pred_oracle(&[], &Hypergraph::new(), &s, EnumBounds::elements(2)).unwrap();
        assert!(preds.is_empty());
    }
}
