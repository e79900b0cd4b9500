use crate::graph::{EdgeId, Hypergraph, NodeId};

use super::{MatchProblem, PartialMorphism};

/// All total injective morphisms `pattern -> host`.
pub fn enumerate_matches(pattern: &Hypergraph, host: &Hypergraph) -> Vec<PartialMorphism> {
    MatchProblem::new(pattern, host).all()
}

/// Decides `g1 ⊑ g2`. The witness is a subgraph morphism `g2 ⇀ g1`
/// (partial, injective, surjective).
pub fn subgraph_leq(g1: &Hypergraph, g2: &Hypergraph) -> Option<PartialMorphism> {
    MatchProblem::new(g1, g2)
        .first()
        .map(|m| m.invert().expect("matches are injective"))
}

/// Elements of a graph to keep. An edge is only kept if all of its nodes are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubObject {
    pub keep_nodes: Vec<bool>,
    pub keep_edges: Vec<bool>,
}

impl SubObject {
    pub fn full(g: &Hypergraph) -> Self {
        SubObject {
            keep_nodes: vec![true; g.node_count()],
            keep_edges: vec![true; g.edge_count()],
        }
    }

    pub fn is_closed(&self, g: &Hypergraph) -> bool {
        g.edges().all(|(id, e)| {
            !self.keep_edges[id.index()] || e.conn.iter().all(|v| self.keep_nodes[v.index()])
        })
    }
}

/// Builds the subgraph selected by `sub` (edges whose nodes are dropped are
/// dropped too) and the subgraph morphism onto it. Kept elements retain
/// their relative order.
pub fn restrict(g: &Hypergraph, sub: &SubObject) -> (Hypergraph, PartialMorphism) {
    let mut out = Hypergraph::new();
    let mut nodes = vec![None; g.node_count()];
    for v in g.nodes() {
        if sub.keep_nodes[v.index()] {
            nodes[v.index()] = Some(out.add_node());
        }
    }
    let mut edges = vec![None; g.edge_count()];
    for (id, e) in g.edges() {
        if !sub.keep_edges[id.index()] {
            continue;
        }
        let conn: Option<Vec<NodeId>> = e.conn.iter().map(|v| nodes[v.index()]).collect();
        if let Some(conn) = conn {
            edges[id.index()] = Some(out.add_edge(e.label, conn));
        }
    }
    let mu = PartialMorphism::new(nodes, edges, &out);
    (out, mu)
}

/// One `(witness, subgraph)` pair per orbit of node-closed sub-objects of `g`
/// under the automorphisms of `g`. Includes the identity and the empty
/// subgraph. Exponential in the size of `g`.
pub fn enumerate_subgraph_quotients(g: &Hypergraph) -> Vec<(PartialMorphism, Hypergraph)> {
    let n = g.node_count();
    let m = g.edge_count();
    assert!(
        n + m <= 24,
        "graph too large for exhaustive subgraph enumeration"
    );
    let autos: Vec<PartialMorphism> = MatchProblem::new(g, g).all();
    let encode = |nodes: u32, edges: u32| (u64::from(nodes) << 32) | u64::from(edges);
    let mut out = Vec::new();
    for nodes in 0u32..(1 << n) {
        // edges whose nodes all survive
        let allowed: Vec<usize> = g
            .edges()
            .filter(|(_, e)| e.conn.iter().all(|v| nodes >> v.0 & 1 == 1))
            .map(|(id, _)| id.index())
            .collect();
        for pick in 0u32..(1 << allowed.len()) {
            let mut edges = 0u32;
            for (bit, &e) in allowed.iter().enumerate() {
                if pick >> bit & 1 == 1 {
                    edges |= 1 << e;
                }
            }
            let code = encode(nodes, edges);
            let is_rep = autos.iter().all(|a| {
                let mut an = 0u32;
                for v in 0..n {
                    if nodes >> v & 1 == 1 {
                        an |= 1 << a.node(NodeId(v as u32)).expect("total").0;
                    }
                }
                let mut ae = 0u32;
                for e in 0..m {
                    if edges >> e & 1 == 1 {
                        ae |= 1 << a.edge(EdgeId(e as u32)).expect("total").0;
                    }
                }
                encode(an, ae) >= code
            });
            if !is_rep {
                continue;
            }
            let sub = SubObject {
                keep_nodes: (0..n).map(|v| nodes >> v & 1 == 1).collect(),
                keep_edges: (0..m).map(|e| edges >> e & 1 == 1).collect(),
            };
            let (rep, mu) = restrict(g, &sub);
            out.push((mu, rep));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{isomorphic, Label};

    const F: Label = Label(0);
    const T: Label = Label(1);
    const E: Label = Label(2);

    fn fab() -> Hypergraph {
        let mut g = Hypergraph::with_nodes(2);
        g.add_edge(F, [NodeId(0), NodeId(1)]);
        g
    }

    #[test]
    fn quotient_counts() {
        assert_eq!(enumerate_subgraph_quotients(&Hypergraph::new()).len(), 1);
        let mut t = Hypergraph::with_nodes(1);
        t.add_edge(T, [NodeId(0)]);
        assert_eq!(enumerate_subgraph_quotients(&t).len(), 3);
        assert_eq!(enumerate_subgraph_quotients(&fab()).len(), 5);
    }

    #[test]
    fn quotients_are_subgraphs() {
        let mut g = fab();
        g.add_edge(T, [NodeId(0)]);
        g.add_edge(T, [NodeId(1)]);
        for (mu, rep) in enumerate_subgraph_quotients(&g) {
            mu.check(&g, &rep).unwrap();
            assert!(mu.is_subgraph_morphism());
            assert!(subgraph_leq(&rep, &g).is_some());
        }
    }

    #[test]
    fn leq_basics() {
        let empty = Hypergraph::new();
        let g = fab();
        let w = subgraph_leq(&empty, &g).unwrap();
        assert!(w.node_map().iter().all(Option::is_none));
        let id = subgraph_leq(&g, &g).unwrap();
        assert!(id.is_total());

        let mut big = Hypergraph::with_nodes(2);
        big.add_edge(E, [NodeId(0)]);
        big.add_edge(E, [NodeId(1)]);
        big.add_edge(F, [NodeId(0), NodeId(1)]);
        let mut small = Hypergraph::with_nodes(1);
        small.add_edge(E, [NodeId(0)]);
        assert!(subgraph_leq(&big, &small).is_none());
        let w = subgraph_leq(&small, &big).unwrap();
        w.check(&big, &small).unwrap();
        assert!(w.is_subgraph_morphism());
    }

    #[test]
    fn restrict_drops_dangling_edges() {
        let g = fab();
        let sub = SubObject {
            keep_nodes: vec![true, false],
            keep_edges: vec![true],
        };
        assert!(!sub.is_closed(&g));
        let (h, mu) = restrict(&g, &sub);
        assert_eq!(h.size(), 1);
        mu.check(&g, &h).unwrap();
        assert!(isomorphic(&h, &Hypergraph::with_nodes(1)).is_some());
    }
}
