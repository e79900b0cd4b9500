use super::{Hypergraph, NodeId};

/// Upper bound `k` on the length of simple undirected paths; membership in `P_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathBound(pub usize);

/// True iff no simple undirected path in `g` has more than `bound` edges.
pub fn within_path_bound(g: &Hypergraph, bound: PathBound) -> bool {
    Search::new(g).longest(Some(bound.0)) <= bound.0
}

/// Length of the longest simple undirected path (alternating nodes and
/// edges, each used at most once). Exhaustive, so keep graphs small.
pub fn longest_path(g: &Hypergraph) -> usize {
    Search::new(g).longest(None)
}

struct Search {
    // adjacency: node -> (neighbour, edge) for every edge joining two distinct nodes
    adj: Vec<Vec<(u32, u32)>>,
    edge_count: usize,
}

impl Search {
    fn new(g: &Hypergraph) -> Self {
        let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); g.node_count()];
        for (id, edge) in g.edges() {
            let mut ends: Vec<NodeId> = edge.conn.to_vec();
            ends.sort_unstable();
            ends.dedup();
            for &a in &ends {
                for &b in &ends {
                    if a != b {
                        adj[a.index()].push((b.0, id.0));
                    }
                }
            }
        }
        Search {
            adj,
            edge_count: g.edge_count(),
        }
    }

    /// Longest path length, stopping early once `cap` is exceeded.
    fn longest(&self, cap: Option<usize>) -> usize {
        let mut node_seen = vec![false; self.adj.len()];
        let mut edge_seen = vec![false; self.edge_count];
        let mut best = 0;
        for start in 0..self.adj.len() {
            node_seen[start] = true;
            self.dfs(start, 0, &mut node_seen, &mut edge_seen, &mut best, cap);
            node_seen[start] = false;
            if cap.is_some_and(|c| best > c) {
                break;
            }
        }
        best
    }

    fn dfs(
        &self,
        at: usize,
        len: usize,
        node_seen: &mut [bool],
        edge_seen: &mut [bool],
        best: &mut usize,
        cap: Option<usize>,
    ) {
        if len > *best {
            *best = len;
        }
        if cap.is_some_and(|c| *best > c) {
            return;
        }
        for &(next, e) in &self.adj[at] {
            let (next, e) = (next as usize, e as usize);
            if node_seen[next] || edge_seen[e] {
                continue;
            }
            node_seen[next] = true;
            edge_seen[e] = true;
            self.dfs(next, len + 1, node_seen, edge_seen, best, cap);
            node_seen[next] = false;
            edge_seen[e] = false;
            if cap.is_some_and(|c| *best > c) {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Label;

    const F: Label = Label(0);
    const T: Label = Label(1);

    fn triangle() -> Hypergraph {
        let mut g = Hypergraph::with_nodes(3);
        g.add_edge(F, [NodeId(0), NodeId(1)]);
        g.add_edge(F, [NodeId(1), NodeId(2)]);
        g.add_edge(F, [NodeId(2), NodeId(0)]);
        g
    }

    #[test]
    fn single_node() {
        let g = Hypergraph::with_nodes(1);
        assert!(within_path_bound(&g, PathBound(0)));
        assert_eq!(longest_path(&g), 0);
    }

    #[test]
    fn triangle_has_paths_of_length_two() {
        let g = triangle();
        assert_eq!(longest_path(&g), 2);
        assert!(within_path_bound(&g, PathBound(2)));
        assert!(!within_path_bound(&g, PathBound(1)));
    }

    #[test]
    fn unary_edges_never_form_paths() {
        let mut g = Hypergraph::with_nodes(1);
        g.add_edge(T, [NodeId(0)]);
        g.add_edge(T, [NodeId(0)]);
        assert!(within_path_bound(&g, PathBound(0)));
    }

    #[test]
    fn loops_do_not_count() {
        let mut g = Hypergraph::with_nodes(1);
        g.add_edge(F, [NodeId(0), NodeId(0)]);
        assert_eq!(longest_path(&g), 0);
    }

    #[test]
    fn parallel_edges_give_length_one() {
        // two nodes joined twice: a simple path may not revisit a node
        let mut g = Hypergraph::with_nodes(2);
        g.add_edge(F, [NodeId(0), NodeId(1)]);
        g.add_edge(F, [NodeId(1), NodeId(0)]);
        assert_eq!(longest_path(&g), 1);
    }

    #[test]
    fn ternary_edge_joins_any_pair() {
        let mut g = Hypergraph::with_nodes(4);
        g.add_edge(Label(2), [NodeId(0), NodeId(1), NodeId(2)]);
        g.add_edge(F, [NodeId(2), NodeId(3)]);
        assert_eq!(longest_path(&g), 2);
    }
}
