//! Backtracking search for total injective morphisms (matches).
//!
//! Edges are placed first, in an order that prefers edges touching
//! already-placed nodes, then higher arity, then rarer labels. Nodes not
//! reached by any pattern edge are placed last.

use std::ops::ControlFlow;

use crate::graph::{EdgeId, Hypergraph, NodeId};

use super::PartialMorphism;

const FREE: u32 = u32::MAX;

/// A match-enumeration query: all total injective morphisms `pattern -> host`,
/// optionally with some images fixed in advance and with ordering
/// constraints between images (used for symmetry breaking).
#[derive(Clone, Debug)]
pub struct MatchProblem<'a> {
    pattern: &'a Hypergraph,
    host: &'a Hypergraph,
    fixed_nodes: Vec<(NodeId, NodeId)>,
    fixed_edges: Vec<(EdgeId, EdgeId)>,
    node_order: Vec<(NodeId, NodeId)>,
    edge_order: Vec<(EdgeId, EdgeId)>,
}

impl<'a> MatchProblem<'a> {
    pub fn new(pattern: &'a Hypergraph, host: &'a Hypergraph) -> Self {
        MatchProblem {
            pattern,
            host,
            fixed_nodes: Vec::new(),
            fixed_edges: Vec::new(),
            node_order: Vec::new(),
            edge_order: Vec::new(),
        }
    }

    /// Requires pattern node `p` to map to host node `h`.
    pub fn fix_node(mut self, p: NodeId, h: NodeId) -> Self {
        self.fixed_nodes.push((p, h));
        self
    }

    pub fn fix_edge(mut self, p: EdgeId, h: EdgeId) -> Self {
        self.fixed_edges.push((p, h));
        self
    }

    /// Requires `image(a) < image(b)`.
    pub fn order_nodes(mut self, a: NodeId, b: NodeId) -> Self {
        self.node_order.push((a, b));
        self
    }

    pub fn order_edges(mut self, a: EdgeId, b: EdgeId) -> Self {
        self.edge_order.push((a, b));
        self
    }

    /// Calls `f` on every match until it returns `Break`.
    pub fn for_each(&self, mut f: impl FnMut(&PartialMorphism) -> ControlFlow<()>) {
        if let Some(mut search) = Search::prepare(self) {
            let _ = search.place_edge(0, &mut f);
        }
    }

    pub fn first(&self) -> Option<PartialMorphism> {
        let mut out = None;
        self.for_each(|m| {
            out = Some(m.clone());
            ControlFlow::Break(())
        });
        out
    }

    pub fn exists(&self) -> bool {
        self.first().is_some()
    }

    pub fn all(&self) -> Vec<PartialMorphism> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(m.clone());
            ControlFlow::Continue(())
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

struct Search<'a> {
    pattern: &'a Hypergraph,
    host: &'a Hypergraph,
    // compat[p * host_nodes + h]: degree profile of p fits inside that of h
    compat: Vec<bool>,
    host_by_label: Vec<Vec<EdgeId>>,
    edge_plan: Vec<EdgeId>,
    node_plan: Vec<NodeId>,
    node_map: Vec<u32>,
    node_owner: Vec<u32>,
    edge_map: Vec<u32>,
    edge_used: Vec<bool>,
    // per pattern node: (other, self_must_be_smaller)
    node_cons: Vec<Vec<(u32, bool)>>,
    edge_cons: Vec<Vec<(u32, bool)>>,
}

impl<'a> Search<'a> {
    fn prepare(q: &MatchProblem<'a>) -> Option<Search<'a>> {
        let (p, h) = (q.pattern, q.host);
        if p.node_count() > h.node_count() || p.edge_count() > h.edge_count() {
            return None;
        }
        let pl = p.label_counts();
        let hl = h.label_counts();
        if pl
            .iter()
            .enumerate()
            .any(|(l, &c)| c > hl.get(l).copied().unwrap_or(0))
        {
            return None;
        }

        let pprof = profiles(p);
        let hprof = profiles(h);
        let hn = h.node_count();
        let mut compat = vec![false; p.node_count() * hn];
        for (i, pp) in pprof.iter().enumerate() {
            let mut any = false;
            for (j, hp) in hprof.iter().enumerate() {
                if sub_multiset(pp, hp) {
                    compat[i * hn + j] = true;
                    any = true;
                }
            }
            if !any {
                return None;
            }
        }

        let mut host_by_label: Vec<Vec<EdgeId>> = vec![Vec::new(); hl.len()];
        for (id, e) in h.edges() {
            host_by_label[e.label.0 as usize].push(id);
        }

        let mut node_cons = vec![Vec::new(); p.node_count()];
        for &(a, b) in &q.node_order {
            node_cons[a.index()].push((b.0, true));
            node_cons[b.index()].push((a.0, false));
        }
        let mut edge_cons = vec![Vec::new(); p.edge_count()];
        for &(a, b) in &q.edge_order {
            edge_cons[a.index()].push((b.0, true));
            edge_cons[b.index()].push((a.0, false));
        }

        let mut s = Search {
            pattern: p,
            host: h,
            compat,
            host_by_label,
            edge_plan: Vec::new(),
            node_plan: Vec::new(),
            node_map: vec![FREE; p.node_count()],
            node_owner: vec![FREE; hn],
            edge_map: vec![FREE; p.edge_count()],
            edge_used: vec![false; h.edge_count()],
            node_cons,
            edge_cons,
        };

        for &(pn, hn_) in &q.fixed_nodes {
            if !s.try_node(pn.0, hn_.0) {
                return None;
            }
        }
        for &(pe, he) in &q.fixed_edges {
            let (pedge, hedge) = (p.edge(pe), h.edge(he));
            if pedge.label != hedge.label
                || pedge.conn.len() != hedge.conn.len()
                || s.edge_used[he.index()]
                || s.edge_map[pe.index()] != FREE
            {
                return None;
            }
            for (&a, &b) in pedge.conn.iter().zip(&hedge.conn) {
                let cur = s.node_map[a.index()];
                if cur == FREE {
                    if !s.try_node(a.0, b.0) {
                        return None;
                    }
                } else if cur != b.0 {
                    return None;
                }
            }
            if !s.edge_order_ok(pe.0, he.0) {
                return None;
            }
            s.edge_map[pe.index()] = he.0;
            s.edge_used[he.index()] = true;
        }
        s.plan();
        Some(s)
    }

    fn plan(&mut self) {
        let p = self.pattern;
        let mut covered: Vec<bool> = self.node_map.iter().map(|&m| m != FREE).collect();
        let mut pending: Vec<EdgeId> = p
            .edges()
            .map(|(id, _)| id)
            .filter(|id| self.edge_map[id.index()] == FREE)
            .collect();
        while !pending.is_empty() {
            let (best_i, _) = pending
                .iter()
                .enumerate()
                .map(|(i, &e)| {
                    let edge = p.edge(e);
                    let touched = edge.conn.iter().filter(|v| covered[v.index()]).count();
                    let cands = self
                        .host_by_label
                        .get(edge.label.0 as usize)
                        .map_or(0, Vec::len);
                    (i, (touched, edge.conn.len(), usize::MAX - cands))
                })
                .max_by_key(|&(i, key)| (key, usize::MAX - i))
                .expect("pending is non-empty");
            let e = pending.remove(best_i);
            for v in &p.edge(e).conn {
                covered[v.index()] = true;
            }
            self.edge_plan.push(e);
        }
        self.node_plan = p.nodes().filter(|v| !covered[v.index()]).collect();
    }

    fn node_order_ok(&self, p: u32, h: u32) -> bool {
        self.node_cons[p as usize].iter().all(|&(other, smaller)| {
            let o = self.node_map[other as usize];
            o == FREE || (if smaller { h < o } else { h > o })
        })
    }

    fn edge_order_ok(&self, p: u32, h: u32) -> bool {
        self.edge_cons[p as usize].iter().all(|&(other, smaller)| {
            let o = self.edge_map[other as usize];
            o == FREE || (if smaller { h < o } else { h > o })
        })
    }

    fn try_node(&mut self, p: u32, h: u32) -> bool {
        if (h as usize) >= self.node_owner.len()
            || self.node_owner[h as usize] != FREE
            || self.node_map[p as usize] != FREE
            || !self.compat[p as usize * self.host.node_count() + h as usize]
            || !self.node_order_ok(p, h)
        {
            return false;
        }
        self.node_map[p as usize] = h;
        self.node_owner[h as usize] = p;
        true
    }

    fn release_node(&mut self, p: u32) {
        let h = self.node_map[p as usize];
        self.node_owner[h as usize] = FREE;
        self.node_map[p as usize] = FREE;
    }

    fn place_edge(
        &mut self,
        i: usize,
        f: &mut dyn FnMut(&PartialMorphism) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == self.edge_plan.len() {
            return self.place_node(0, f);
        }
        let pe = self.edge_plan[i];
        let pedge = self.pattern.edge(pe);
        let label = pedge.label.0 as usize;
        let mut newly: Vec<u32> = Vec::with_capacity(pedge.conn.len());
        for k in 0..self.host_by_label[label].len() {
            let he = self.host_by_label[label][k];
            if self.edge_used[he.index()] || !self.edge_order_ok(pe.0, he.0) {
                continue;
            }
            let hedge = self.host.edge(he);
            if hedge.conn.len() != pedge.conn.len() {
                continue;
            }
            newly.clear();
            let mut ok = true;
            for (&a, &b) in pedge.conn.iter().zip(&hedge.conn) {
                let cur = self.node_map[a.index()];
                if cur == FREE {
                    if self.try_node(a.0, b.0) {
                        newly.push(a.0);
                    } else {
                        ok = false;
                        break;
                    }
                } else if cur != b.0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.edge_map[pe.index()] = he.0;
                self.edge_used[he.index()] = true;
                let flow = self.place_edge(i + 1, f);
                self.edge_used[he.index()] = false;
                self.edge_map[pe.index()] = FREE;
                if flow.is_break() {
                    for &v in &newly {
                        self.release_node(v);
                    }
                    return flow;
                }
            }
            for &v in &newly {
                self.release_node(v);
            }
        }
        ControlFlow::Continue(())
    }

    fn place_node(
        &mut self,
        j: usize,
        f: &mut dyn FnMut(&PartialMorphism) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if j == self.node_plan.len() {
            let m = PartialMorphism::from_parts(
                self.node_map.iter().map(|&h| Some(NodeId(h))).collect(),
                self.edge_map.iter().map(|&h| Some(EdgeId(h))).collect(),
                self.host.node_count(),
                self.host.edge_count(),
            );
            return f(&m);
        }
        let pv = self.node_plan[j].0;
        for h in 0..self.host.node_count() as u32 {
            if self.try_node(pv, h) {
                let flow = self.place_node(j + 1, f);
                self.release_node(pv);
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

fn profiles(g: &Hypergraph) -> Vec<Vec<(u16, u8)>> {
    let mut out: Vec<Vec<(u16, u8)>> = vec![Vec::new(); g.node_count()];
    for (_, e) in g.edges() {
        for (pos, v) in e.conn.iter().enumerate() {
            out[v.index()].push((e.label.0, pos as u8));
        }
    }
    for p in &mut out {
        p.sort_unstable();
    }
    out
}

/// Both inputs sorted.
fn sub_multiset(small: &[(u16, u8)], big: &[(u16, u8)]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}
