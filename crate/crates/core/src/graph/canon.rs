//! Canonical labelling by colour refinement plus individualisation.
//!
//! Used for deterministic output and for isomorphism-class bookkeeping in the
//! exhaustive enumerators. Cost grows with symmetry; transposition twins are
//! pruned, which covers the common case of interchangeable leaves.

use std::collections::HashMap;

use super::{Edge, Hypergraph};

/// Canonical representative of an isomorphism class: equal keys iff isomorphic.
pub type CanonicalKey = Hypergraph;

pub fn canonical_key(g: &Hypergraph) -> CanonicalKey {
    canonical_form(g).0
}

/// Returns the canonical relabelling of `g` together with the permutation
/// `perm[old] = new` that produces it.
pub fn canonical_form(g: &Hypergraph) -> (Hypergraph, Vec<u32>) {
    let n = g.node_count();
    if n == 0 {
        return (g.relabelled(&[]), Vec::new());
    }
    let ctx = Ctx::new(g);
    let mut best: Option<(Vec<Edge>, Vec<u32>)> = None;
    ctx.search(vec![0; n], &mut best);
    let (_, perm) = best.expect("search visits at least one leaf");
    (g.relabelled(&perm), perm)
}

struct Ctx<'g> {
    g: &'g Hypergraph,
    // node -> (edge index, position) occurrences
    occurrences: Vec<Vec<(usize, usize)>>,
    sorted_edges: Vec<Edge>,
}

impl<'g> Ctx<'g> {
    fn new(g: &'g Hypergraph) -> Self {
        let mut occurrences = vec![Vec::new(); g.node_count()];
        for (id, e) in g.edges() {
            for (pos, v) in e.conn.iter().enumerate() {
                occurrences[v.index()].push((id.index(), pos));
            }
        }
        let mut sorted_edges: Vec<Edge> = g.edges().map(|(_, e)| e.clone()).collect();
        sorted_edges.sort();
        Ctx {
            g,
            occurrences,
            sorted_edges,
        }
    }

    /// Refines `colors` to the coarsest equitable colouring, renumbering
    /// colours by the sorted order of their signatures.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        // (label, position, colours along the edge) for each occurrence
        type Local = Vec<(u16, usize, Vec<u32>)>;
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(u32, Local)> = (0..colors.len())
                .map(|v| {
                    let mut local: Local = self.occurrences[v]
                        .iter()
                        .map(|&(e, pos)| {
                            let edge = self.g.edge(super::EdgeId(e as u32));
                            (
                                edge.label.0,
                                pos,
                                edge.conn.iter().map(|u| colors[u.index()]).collect(),
                            )
                        })
                        .collect();
                    local.sort_unstable();
                    (colors[v], local)
                })
                .collect();
            let mut uniq: Vec<&(u32, Local)> = sigs.iter().collect();
            uniq.sort();
            uniq.dedup();
            let rank: HashMap<&(u32, Local), u32> = uniq
                .iter()
                .enumerate()
                .map(|(i, s)| (*s, i as u32))
                .collect();
            let next: Vec<u32> = sigs.iter().map(|s| rank[s]).collect();
            let next_classes = uniq.len();
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<(Vec<Edge>, Vec<u32>)>) {
        let colors = self.refine(colors);
        let n = colors.len();
        // first non-singleton cell, by colour
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
            let perm = colors;
            let mut edges: Vec<Edge> = self
                .g
                .edges()
                .map(|(_, e)| Edge {
                    label: e.label,
                    conn: e
                        .conn
                        .iter()
                        .map(|v| super::NodeId(perm[v.index()]))
                        .collect(),
                })
                .collect();
            edges.sort();
            let better = match best {
                None => true,
                Some((b, _)) => edges < *b,
            };
            if better {
                *best = Some((edges, perm));
            }
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == target).collect();
        let mut reps: Vec<usize> = Vec::new();
        for &v in &cell {
            if reps.iter().any(|&r| self.is_twin(r, v)) {
                continue;
            }
            reps.push(v);
            let individualised: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| if u == v { 2 * c } else { 2 * c + 1 })
                .collect();
            self.search(individualised, best);
        }
    }

    /// True iff swapping `a` and `b` is an automorphism of the graph.
    fn is_twin(&self, a: usize, b: usize) -> bool {
        let swap = |v: super::NodeId| {
            if v.index() == a {
                super::NodeId(b as u32)
            } else if v.index() == b {
                super::NodeId(a as u32)
            } else {
                v
            }
        };
        let mut swapped: Vec<Edge> = self
            .sorted_edges
            .iter()
            .map(|e| Edge {
                label: e.label,
                conn: e.conn.iter().map(|&v| swap(v)).collect(),
            })
            .collect();
        swapped.sort();
        swapped == self.sorted_edges
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{isomorphic, Label, NodeId};

    const F: Label = Label(0);
    const E: Label = Label(1);

    #[test]
    fn renamings_share_a_key() {
        let mut g = Hypergraph::with_nodes(3);
        g.add_edge(F, [NodeId(0), NodeId(1)]);
        g.add_edge(E, [NodeId(2)]);
        let mut h = Hypergraph::with_nodes(3);
        h.add_edge(E, [NodeId(0)]);
        h.add_edge(F, [NodeId(2), NodeId(1)]);
        assert_eq!(canonical_key(&g), canonical_key(&h));
        assert!(isomorphic(&canonical_key(&g), &g).is_some());
    }

    #[test]
    fn direction_distinguishes() {
        let mut g = Hypergraph::with_nodes(2);
        g.add_edge(F, [NodeId(0), NodeId(1)]);
        g.add_edge(E, [NodeId(0)]);
        let mut h = Hypergraph::with_nodes(2);
        h.add_edge(F, [NodeId(0), NodeId(1)]);
        h.add_edge(E, [NodeId(1)]);
        assert_ne!(canonical_key(&g), canonical_key(&h));
    }

    #[test]
    fn symmetric_star_is_cheap() {
        let mut g = Hypergraph::with_nodes(12);
        for i in 1..12 {
            g.add_edge(F, [NodeId(i), NodeId(0)]);
        }
        let (c, perm) = canonical_form(&g);
        assert_eq!(perm.len(), 12);
        assert!(isomorphic(&c, &g).is_some());
    }
}
