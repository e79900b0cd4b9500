#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ugts::frontend::{fixtures, parse_spec, SpecFile};
use ugts::graph::{canonical_key, EdgeId, Hypergraph, Label, NodeId, Signature};
use ugts::morphism::{MatchProblem, PartialMorphism};
use ugts::rules::{application_condition, apply, quantified_nodes, Instantiation, PreparedRule};

pub fn dining() -> SpecFile {
    fixtures::dining()
}

pub fn prepared(spec: &SpecFile) -> Vec<PreparedRule> {
    spec.rules.iter().cloned().map(PreparedRule::new).collect()
}

/// Parses a graph body such as `E(p); F(p, q);` over the given signature.
pub fn graph(sig: &Signature, body: &str) -> Hypergraph {
    let labels: Vec<String> = sig.labels().map(|(_, n, a)| format!("{n}/{a}")).collect();
    let text = format!("signature {{ {} }} graph g {{ {body} }}", labels.join(" "));
    let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{e} in {body:?}"));
    spec.graph("g").unwrap().clone()
}

pub fn same_class(a: &[Hypergraph], b: &[Hypergraph]) -> bool {
    let mut ka: Vec<_> = a.iter().map(canonical_key).collect();
    let mut kb: Vec<_> = b.iter().map(canonical_key).collect();
    ka.sort_by_key(|k| format!("{k:?}"));
    kb.sort_by_key(|k| format!("{k:?}"));
    ka == kb
}

/// A small signature with one label of each arity up to three.
pub fn mixed_signature() -> Signature {
    Signature::from_pairs([("T", 1), ("F", 2), ("X", 3)]).unwrap()
}

/// A random graph with at most `max_elements` nodes plus edges.
pub fn random_graph(rng: &mut ChaCha8Rng, sig: &Signature, max_elements: usize) -> Hypergraph {
    let total = rng.gen_range(0..=max_elements);
    let nodes = if total == 0 {
        0
    } else {
        rng.gen_range(1..=total)
    };
    let mut g = Hypergraph::with_nodes(nodes);
    add_random_edges(rng, sig, &mut g, total - nodes);
    g
}

fn add_random_edges(rng: &mut ChaCha8Rng, sig: &Signature, g: &mut Hypergraph, count: usize) {
    if g.node_count() == 0 {
        return;
    }
    let labels: Vec<(Label, usize)> = sig.labels().map(|(l, _, a)| (l, a)).collect();
    for _ in 0..count {
        let &(l, arity) = labels.choose(rng).unwrap();
        let conn: Vec<NodeId> = (0..arity)
            .map(|_| NodeId(rng.gen_range(0..g.node_count() as u32)))
            .collect();
        g.add_edge(l, conn);
    }
}

/// A random partial morphism out of `g0`: some elements are deleted, some
/// surviving nodes are merged, and fresh elements are added to the target,
/// keeping the target within `max_elements`.
pub fn random_morphism(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    g0: &Hypergraph,
    max_elements: usize,
    total_injective: bool,
) -> (Hypergraph, PartialMorphism) {
    let n = g0.node_count();
    let mut class: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut classes = 0;
    for v in 0..n {
        if !total_injective && rng.gen_bool(0.2) {
            class.push(None);
        } else if !total_injective && v > 0 && rng.gen_bool(0.25) {
            class.push(class[rng.gen_range(0..v)]);
        } else {
            class.push(Some(classes));
            classes += 1;
        }
    }
    // renumber the classes that survive
    let mut ids = vec![None; classes];
    let mut target = Hypergraph::new();
    for c in class.iter().flatten() {
        if ids[*c].is_none() {
            ids[*c] = Some(target.add_node());
        }
    }
    let node_map: Vec<Option<NodeId>> = class.iter().map(|c| c.and_then(|c| ids[c])).collect();
    let mut edge_map = Vec::with_capacity(g0.edge_count());
    for (_, e) in g0.edges() {
        let conn: Option<Vec<NodeId>> = e.conn.iter().map(|v| node_map[v.index()]).collect();
        match conn {
            Some(conn) if total_injective || !rng.gen_bool(0.15) => {
                edge_map.push(Some(target.add_edge(e.label, conn)));
            }
            _ => edge_map.push(None),
        }
    }
    let room = max_elements.saturating_sub(target.size());
    if room > 0 {
        let extra_nodes = rng.gen_range(0..=room);
        for _ in 0..extra_nodes {
            target.add_node();
        }
        let extra_edges = rng.gen_range(0..=room - extra_nodes);
        add_random_edges(rng, sig, &mut target, extra_edges);
    }
    let m = PartialMorphism::new(node_map, edge_map, &target);
    (target, m)
}

/// Whether two instantiations of the same rule are isomorphic as spans:
/// there are isomorphisms of the left and right sides that commute with the
/// embeddings of the rule's left side and with the rule morphisms.
pub fn instantiations_isomorphic(a: &Instantiation, b: &Instantiation) -> bool {
    if a.lhs.node_count() != b.lhs.node_count()
        || a.lhs.edge_count() != b.lhs.edge_count()
        || a.rhs.node_count() != b.rhs.node_count()
        || a.rhs.edge_count() != b.rhs.edge_count()
    {
        return false;
    }
    let mut left = MatchProblem::new(&a.lhs, &b.lhs);
    for (x, y) in a.embed.node_map().iter().zip(b.embed.node_map()) {
        left = left.fix_node(x.unwrap(), y.unwrap());
    }
    for (x, y) in a.embed.edge_map().iter().zip(b.embed.edge_map()) {
        left = left.fix_edge(x.unwrap(), y.unwrap());
    }
    left.all()
        .iter()
        .any(|sigma| right_side_commutes(a, b, sigma))
}

fn right_side_commutes(a: &Instantiation, b: &Instantiation, sigma: &PartialMorphism) -> bool {
    let mut fixed_nodes: Vec<Option<NodeId>> = vec![None; a.rhs.node_count()];
    for z in a.lhs.nodes() {
        let s = sigma.node(z).unwrap();
        match (a.morphism.node(z), b.morphism.node(s)) {
            (None, None) => {}
            (Some(x), Some(y)) => match fixed_nodes[x.index()] {
                Some(prev) if prev != y => return false,
                _ => fixed_nodes[x.index()] = Some(y),
            },
            _ => return false,
        }
    }
    let mut fixed_edges: Vec<Option<EdgeId>> = vec![None; a.rhs.edge_count()];
    for (f, _) in a.lhs.edges() {
        let s = sigma.edge(f).unwrap();
        match (a.morphism.edge(f), b.morphism.edge(s)) {
            (None, None) => {}
            (Some(x), Some(y)) => match fixed_edges[x.index()] {
                Some(prev) if prev != y => return false,
                _ => fixed_edges[x.index()] = Some(y),
            },
            _ => return false,
        }
    }
    let mut right = MatchProblem::new(&a.rhs, &b.rhs);
    for (i, y) in fixed_nodes.iter().enumerate() {
        if let Some(y) = y {
            right = right.fix_node(NodeId(i as u32), *y);
        }
    }
    for (i, y) in fixed_edges.iter().enumerate() {
        if let Some(y) = y {
            right = right.fix_edge(EdgeId(i as u32), *y);
        }
    }
    right.exists()
}

/// Replays a predecessor forward: the recorded instance must be applicable
/// at the recorded match, and its result must contain `source`.
pub fn replays(
    rule: &PreparedRule,
    source: &Hypergraph,
    graph: &Hypergraph,
    inst: &Instantiation,
    m: &PartialMorphism,
) -> bool {
    if m.check(&inst.lhs, graph).is_err() || !m.is_match() {
        return false;
    }
    if !application_condition(&quantified_nodes(&rule.rule), inst, m, graph) {
        return false;
    }
    ugts::morphism::subgraph_leq(source, &apply(inst, m, graph)).is_some()
}
