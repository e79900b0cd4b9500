mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{mixed_signature, random_graph};
use ugts::graph::{
    canonical_key, invariant_hash, isomorphic, longest_path, within_path_bound, EdgeId, Hypergraph,
    NodeId, PathBound,
};
use ugts::morphism::{enumerate_matches, enumerate_subgraph_quotients, subgraph_leq};
use ugts::order::minimize;

/// The same graph with nodes and edges listed in a random order.
fn shuffled(rng: &mut ChaCha8Rng, g: &Hypergraph) -> Hypergraph {
    let mut perm: Vec<u32> = (0..g.node_count() as u32).collect();
    perm.shuffle(rng);
    let mut edges: Vec<_> = g.edges().map(|(_, e)| e.clone()).collect();
    edges.shuffle(rng);
    let mut h = Hypergraph::with_nodes(g.node_count());
    for e in edges {
        h.add_edge(e.label, e.conn.iter().map(|v| NodeId(perm[v.index()])));
    }
    h
}

/// Every subgraph of `g`, built directly from subsets of nodes and edges.
fn all_subgraphs(g: &Hypergraph) -> Vec<Hypergraph> {
    let (n, m) = (g.node_count(), g.edge_count());
    let mut out = Vec::new();
    for nodes in 0u32..(1 << n) {
        let mut index = vec![None; n];
        let mut sub = Hypergraph::new();
        for (v, slot) in index.iter_mut().enumerate() {
            if nodes >> v & 1 == 1 {
                *slot = Some(sub.add_node());
            }
        }
        for edges in 0u32..(1 << m) {
            let mut h = sub.clone();
            let mut ok = true;
            for (i, (_, e)) in g.edges().enumerate() {
                if edges >> i & 1 == 0 {
                    continue;
                }
                match e
                    .conn
                    .iter()
                    .map(|v| index[v.index()])
                    .collect::<Option<Vec<_>>>()
                {
                    Some(conn) => {
                        h.add_edge(e.label, conn);
                    }
                    None => ok = false,
                }
            }
            if ok {
                out.push(h);
            }
        }
    }
    out
}

/// Number of closed (node set, edge set) pairs of `g` up to automorphisms.
fn subset_orbits(g: &Hypergraph) -> usize {
    let autos = enumerate_matches(g, g);
    let (n, m) = (g.node_count(), g.edge_count());
    let mut seen = HashSet::new();
    let mut orbits = 0;
    for nodes in 0u32..(1 << n) {
        for edges in 0u32..(1 << m) {
            let closed = g.edges().enumerate().all(|(i, (_, e))| {
                edges >> i & 1 == 0 || e.conn.iter().all(|v| nodes >> v.0 & 1 == 1)
            });
            if !closed || seen.contains(&(nodes, edges)) {
                continue;
            }
            orbits += 1;
            for a in &autos {
                let image_nodes = (0..n)
                    .filter(|&v| nodes >> v & 1 == 1)
                    .map(|v| 1u32 << a.node(NodeId(v as u32)).unwrap().0)
                    .sum::<u32>();
                let image_edges = (0..m)
                    .filter(|&e| edges >> e & 1 == 1)
                    .map(|e| 1u32 << a.edge(EdgeId(e as u32)).unwrap().0)
                    .sum::<u32>();
                seen.insert((image_nodes, image_edges));
            }
        }
    }
    orbits
}

proptest! {
    #[test]
    fn renaming_preserves_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, &mixed_signature(), 8);
        let h = shuffled(&mut rng, &g);
        prop_assert_eq!(canonical_key(&g), canonical_key(&h));
        prop_assert_eq!(invariant_hash(&g), invariant_hash(&h));
        let iso = isomorphic(&g, &h).expect("renaming is an isomorphism");
        prop_assert!(iso.check(&g, &h).is_ok() && iso.is_match() && iso.is_surjective());
    }

    #[test]
    fn keys_separate_non_isomorphic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = mixed_signature();
        let g = random_graph(&mut rng, &sig, 6);
        let h = random_graph(&mut rng, &sig, 6);
        prop_assert_eq!(canonical_key(&g) == canonical_key(&h), isomorphic(&g, &h).is_some());
    }

    #[test]
    fn path_bound_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, &mixed_signature(), 8);
        let len = longest_path(&g);
        for k in 0..=8 {
            prop_assert_eq!(within_path_bound(&g, PathBound(k)), len <= k);
        }
        // subgraphs never have longer paths
        for sub in all_subgraphs(&g).into_iter().take(64) {
            prop_assert!(longest_path(&sub) <= len);
        }
    }

    #[test]
    fn leq_agrees_with_deletions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = mixed_signature();
        let g2 = random_graph(&mut rng, &sig, 6);
        let g1 = random_graph(&mut rng, &sig, 4);
        let by_deletion = all_subgraphs(&g2).iter().any(|s| isomorphic(s, &g1).is_some());
        let witness = subgraph_leq(&g1, &g2);
        prop_assert_eq!(witness.is_some(), by_deletion);
        if let Some(w) = witness {
            prop_assert!(w.check(&g2, &g1).is_ok());
            prop_assert!(w.is_subgraph_morphism());
        }
    }

    #[test]
    fn leq_witnesses_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g3 = random_graph(&mut rng, &mixed_signature(), 7);
        let subs = all_subgraphs(&g3);
        let g2 = subs.choose(&mut rng).unwrap().clone();
        let subs2 = all_subgraphs(&g2);
        let g1 = subs2.choose(&mut rng).unwrap().clone();
        let w32 = subgraph_leq(&g2, &g3).expect("built by deletion");
        let w21 = subgraph_leq(&g1, &g2).expect("built by deletion");
        let w31 = w32.then(&w21).expect("shapes line up");
        prop_assert!(w31.check(&g3, &g1).is_ok());
        prop_assert!(w31.is_subgraph_morphism());
    }

    #[test]
    fn quotients_are_subsets_up_to_automorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, &mixed_signature(), 6);
        let classes: HashSet<_> = all_subgraphs(&g).iter().map(canonical_key).collect();
        let quotients = enumerate_subgraph_quotients(&g);
        let keys: HashSet<_> = quotients.iter().map(|(_, h)| canonical_key(h)).collect();
        prop_assert_eq!(keys, classes);
        prop_assert_eq!(quotients.len(), subset_orbits(&g));
        for (w, h) in &quotients {
            prop_assert!(w.check(&g, h).is_ok() && w.is_subgraph_morphism());
        }
    }

    #[test]
    fn minimize_is_an_idempotent_antichain(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = mixed_signature();
        let input: Vec<Hypergraph> = (0..8).map(|_| random_graph(&mut rng, &sig, 5)).collect();
        let once = minimize(input.iter().cloned());
        let members: Vec<Hypergraph> = once.graphs().cloned().collect();
        for (i, a) in members.iter().enumerate() {
            for (j, b) in members.iter().enumerate() {
                prop_assert!(i == j || subgraph_leq(a, b).is_none());
            }
        }
        for g in &input {
            prop_assert!(once.represents(g));
        }
        let twice = minimize(members.iter().cloned());
        prop_assert!(common::same_class(&members, &twice.graphs().cloned().collect::<Vec<_>>()));
    }
}
