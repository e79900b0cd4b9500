//! Pushouts of partial morphisms and minimal pushout complements.
//!
//! The pushout object is built from equivalence classes over the disjoint
//! union of both targets. A class is invalid when it contains the image of
//! an element on which the other leg is undefined; an edge class is also
//! invalid when it touches an invalid node class. Valid classes become the
//! elements of the object.

use crate::graph::{
    canonical_key, within_path_bound, EdgeId, Hypergraph, Label, NodeId, PathBound,
};
use crate::morphism::PartialMorphism;

/// Pushout object and the two injections into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutResult {
    pub object: Hypergraph,
    /// `G1 -> object`
    pub left: PartialMorphism,
    /// `G2 -> object`
    pub right: PartialMorphism,
}

/// A pushout complement: `complement` with a total injective `matching`
/// from the left side `A`, and `glue: complement ⇀ G` closing the square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PocResult {
    pub complement: Hypergraph,
    pub matching: PartialMorphism,
    pub glue: PartialMorphism,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let up = self.0[self.0[x as usize] as usize];
            self.0[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        // the smaller index stays root, so classes are keyed by first member
        if ra < rb {
            self.0[rb as usize] = ra;
        } else if rb < ra {
            self.0[ra as usize] = rb;
        }
    }
}

/// Pushout of `phi: G0 ⇀ G1` and `psi: G0 ⇀ G2`.
///
/// Object elements are ordered by their first member: classes meeting `G1`
/// come first in `G1` order, then classes consisting only of `G2` elements
/// in `G2` order. In particular, when `psi` is total and injective every
/// `G1` element survives and keeps its index.
pub fn pushout(
    phi: &PartialMorphism,
    g1: &Hypergraph,
    psi: &PartialMorphism,
    g2: &Hypergraph,
) -> PushoutResult {
    assert_eq!(
        phi.source_shape(),
        psi.source_shape(),
        "pushout needs a common source"
    );
    let (n1, n2) = (g1.node_count(), g2.node_count());
    let (m1, m2) = (g1.edge_count(), g2.edge_count());

    let mut nodes = UnionFind::new(n1 + n2);
    let mut bad_node = vec![false; n1 + n2];
    for (a, b) in phi.node_map().iter().zip(psi.node_map()) {
        match (a, b) {
            (Some(a), Some(b)) => nodes.union(a.0, n1 as u32 + b.0),
            (Some(a), None) => bad_node[a.index()] = true,
            (None, Some(b)) => bad_node[n1 + b.index()] = true,
            (None, None) => {}
        }
    }
    let mut edges = UnionFind::new(m1 + m2);
    let mut bad_edge = vec![false; m1 + m2];
    for (a, b) in phi.edge_map().iter().zip(psi.edge_map()) {
        match (a, b) {
            (Some(a), Some(b)) => edges.union(a.0, m1 as u32 + b.0),
            (Some(a), None) => bad_edge[a.index()] = true,
            (None, Some(b)) => bad_edge[m1 + b.index()] = true,
            (None, None) => {}
        }
    }

    // propagate invalidity to class roots
    let mut bad_node_root = vec![false; n1 + n2];
    for (i, _) in bad_node.iter().enumerate().filter(|(_, &bad)| bad) {
        let r = nodes.find(i as u32) as usize;
        bad_node_root[r] = true;
    }
    let node_conn = |i: usize| -> &[NodeId] {
        if i < m1 {
            &g1.edge(EdgeId(i as u32)).conn
        } else {
            &g2.edge(EdgeId((i - m1) as u32)).conn
        }
    };
    let node_slot = |side_edge: usize, v: NodeId| -> u32 {
        if side_edge < m1 {
            v.0
        } else {
            n1 as u32 + v.0
        }
    };
    let mut bad_edge_root = vec![false; m1 + m2];
    for i in 0..m1 + m2 {
        let incident_bad = node_conn(i)
            .iter()
            .any(|&v| bad_node_root[nodes.find(node_slot(i, v)) as usize]);
        if bad_edge[i] || incident_bad {
            let r = edges.find(i as u32) as usize;
            bad_edge_root[r] = true;
        }
    }

    let mut object = Hypergraph::new();
    let mut node_of_root: Vec<Option<NodeId>> = vec![None; n1 + n2];
    for i in 0..n1 + n2 {
        let r = nodes.find(i as u32) as usize;
        if r == i && !bad_node_root[r] {
            node_of_root[r] = Some(object.add_node());
        }
    }
    let mut edge_of_root: Vec<Option<EdgeId>> = vec![None; m1 + m2];
    for i in 0..m1 + m2 {
        let r = edges.find(i as u32) as usize;
        if r == i && !bad_edge_root[r] {
            let (label, conn): (Label, Vec<NodeId>) = {
                let e = if i < m1 {
                    g1.edge(EdgeId(i as u32))
                } else {
                    g2.edge(EdgeId((i - m1) as u32))
                };
                let conn = e
                    .conn
                    .iter()
                    .map(|&v| {
                        let root = nodes.find(node_slot(i, v)) as usize;
                        node_of_root[root].expect("valid edge has valid nodes")
                    })
                    .collect();
                (e.label, conn)
            };
            edge_of_root[r] = Some(object.add_edge(label, conn));
        }
    }

    let mut node_img = |i: usize| node_of_root[nodes.find(i as u32) as usize];
    let left_nodes: Vec<Option<NodeId>> = (0..n1).map(&mut node_img).collect();
    let right_nodes: Vec<Option<NodeId>> = (n1..n1 + n2).map(&mut node_img).collect();
    let mut edge_img = |i: usize| edge_of_root[edges.find(i as u32) as usize];
    let left_edges: Vec<Option<EdgeId>> = (0..m1).map(&mut edge_img).collect();
    let right_edges: Vec<Option<EdgeId>> = (m1..m1 + m2).map(&mut edge_img).collect();

    PushoutResult {
        left: PartialMorphism::new(left_nodes, left_edges, &object),
        right: PartialMorphism::new(right_nodes, right_edges, &object),
        object,
    }
}

/// Checks that `candidate` is a pushout of `phi` and `psi`: the square
/// commutes and the candidate is isomorphic to the constructed pushout via
/// an isomorphism compatible with both injections.
pub fn is_pushout(
    phi: &PartialMorphism,
    g1: &Hypergraph,
    psi: &PartialMorphism,
    g2: &Hypergraph,
    candidate: &PushoutResult,
) -> bool {
    if candidate.left.check(g1, &candidate.object).is_err()
        || candidate.right.check(g2, &candidate.object).is_err()
    {
        return false;
    }
    let reference = pushout(phi, g1, psi, g2);
    let r = &reference.object;
    let c = &candidate.object;
    if r.node_count() != c.node_count() || r.edge_count() != c.edge_count() {
        return false;
    }
    // induced map reference -> candidate, which must be well defined
    let mut h_nodes: Vec<Option<NodeId>> = vec![None; r.node_count()];
    let pairs_n = reference
        .left
        .node_map()
        .iter()
        .zip(candidate.left.node_map())
        .chain(
            reference
                .right
                .node_map()
                .iter()
                .zip(candidate.right.node_map()),
        );
    for (ref_img, cand_img) in pairs_n {
        match (ref_img, cand_img) {
            (Some(a), Some(b)) => match h_nodes[a.index()] {
                None => h_nodes[a.index()] = Some(*b),
                Some(prev) if prev != *b => return false,
                Some(_) => {}
            },
            (None, None) => {}
            _ => return false,
        }
    }
    let mut h_edges: Vec<Option<EdgeId>> = vec![None; r.edge_count()];
    let pairs_e = reference
        .left
        .edge_map()
        .iter()
        .zip(candidate.left.edge_map())
        .chain(
            reference
                .right
                .edge_map()
                .iter()
                .zip(candidate.right.edge_map()),
        );
    for (ref_img, cand_img) in pairs_e {
        match (ref_img, cand_img) {
            (Some(a), Some(b)) => match h_edges[a.index()] {
                None => h_edges[a.index()] = Some(*b),
                Some(prev) if prev != *b => return false,
                Some(_) => {}
            },
            (None, None) => {}
            _ => return false,
        }
    }
    // every reference element is hit by some injection, so h is total
    let h = PartialMorphism::new(h_nodes, h_edges, c);
    h.is_total() && h.is_injective() && h.check(r, c).is_ok()
}

/// All minimal pushout complements of `delta: A ⇀ B` and the total
/// injective `comatch: B -> G`, one per isomorphism class compatible with
/// the matching of `A`. With a path bound, complements outside the bounded
/// class are dropped.
///
/// A minimal complement consists of a copy of `A` plus the context, i.e.
/// the elements of `G` outside the image of the co-match. Each position of
/// a context edge that lands on an image node `comatch(b)` is attached to a
/// `delta`-preimage of `b`; every combination of choices is tried and
/// verified as a pushout.
pub fn minimal_pushout_complements(
    a: &Hypergraph,
    delta: &PartialMorphism,
    b: &Hypergraph,
    comatch: &PartialMorphism,
    g: &Hypergraph,
    path_bound: Option<PathBound>,
) -> Vec<PocResult> {
    debug_assert!(comatch.is_match());
    let b_of = comatch.invert().expect("co-match must be injective");
    let node_pre = delta.node_preimages();

    let mut complement = a.clone();
    let mut ctx_node: Vec<Option<NodeId>> = vec![None; g.node_count()];
    let mut glue_nodes: Vec<Option<NodeId>> = a
        .nodes()
        .map(|v| delta.node(v).map(|w| comatch.node(w).expect("total")))
        .collect();
    let mut glue_edges: Vec<Option<EdgeId>> = a
        .edges()
        .map(|(e, _)| delta.edge(e).map(|f| comatch.edge(f).expect("total")))
        .collect();
    for v in g.nodes() {
        if b_of.node(v).is_none() {
            ctx_node[v.index()] = Some(complement.add_node());
            glue_nodes.push(Some(v));
        }
    }

    // per context edge position: the candidate attachment points
    let mut slots: Vec<(EdgeId, Vec<Vec<NodeId>>)> = Vec::new();
    for (id, e) in g.edges() {
        if b_of.edge(id).is_some() {
            continue;
        }
        let mut choices = Vec::with_capacity(e.conn.len());
        for &v in &e.conn {
            match ctx_node[v.index()] {
                Some(c) => choices.push(vec![c]),
                None => {
                    let bn = b_of.node(v).expect("node is in the co-match image");
                    let pre = &node_pre[bn.index()];
                    if pre.is_empty() {
                        // the edge would hang off an element created by the rule
                        return Vec::new();
                    }
                    choices.push(pre.clone());
                }
            }
        }
        slots.push((id, choices));
        glue_edges.push(Some(id));
    }

    let matching = PartialMorphism::from_parts(
        a.nodes().map(Some).collect(),
        a.edges().map(|(e, _)| Some(e)).collect(),
        complement.node_count(),
        a.edge_count() + slots.len(),
    );

    let flat: Vec<&Vec<NodeId>> = slots.iter().flat_map(|(_, c)| c.iter()).collect();
    let mut pick = vec![0usize; flat.len()];
    let mut seen: Vec<CanonicalMarked> = Vec::new();
    let mut out = Vec::new();
    loop {
        let mut c = complement.clone();
        let mut k = 0;
        for (id, choices) in &slots {
            let conn: Vec<NodeId> = (0..choices.len())
                .map(|j| flat[k + j][pick[k + j]])
                .collect();
            k += choices.len();
            c.add_edge(g.edge(*id).label, conn);
        }
        let keep = path_bound.is_none_or(|pb| within_path_bound(&c, pb));
        if keep {
            let key = marked_key(&c, a.node_count());
            if !seen.contains(&key) {
                let glue = PartialMorphism::new(glue_nodes.clone(), glue_edges.clone(), g);
                let square = PushoutResult {
                    object: g.clone(),
                    left: comatch.clone(),
                    right: glue.clone(),
                };
                if is_pushout(delta, b, &matching, &c, &square) {
                    seen.push(key);
                    out.push(PocResult {
                        complement: c,
                        matching: matching.clone(),
                        glue,
                    });
                }
            }
        }
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == pick.len() {
                return out;
            }
            pick[i] += 1;
            if pick[i] < flat[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

type CanonicalMarked = Hypergraph;

/// Canonical key of `c` with the first `fixed` nodes individually marked, so
/// that equal keys mean isomorphic by a map fixing those nodes.
fn marked_key(c: &Hypergraph, fixed: usize) -> CanonicalMarked {
    let mut marked = c.clone();
    for v in 0..fixed {
        marked.add_edge(Label(u16::MAX - v as u16), [NodeId(v as u32)]);
    }
    canonical_key(&marked)
}
