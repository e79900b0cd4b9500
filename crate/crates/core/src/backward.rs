//! Backward steps and the backward search over upward-closed sets.
//!
//! A backward step from `g` instantiates the rule up to the length bound,
//! restricts the right side to each of its sub-objects, matches the result
//! into `g` and reconstructs the possible left contexts as minimal pushout
//! complements. Candidates violating the application condition are dropped.
//!
//! Copies of the same quantification are interchangeable, so sub-objects are
//! enumerated per copy as a non-decreasing sequence of local choices, and
//! co-matches of copies with equal choices are ordered. A copy whose right
//! part is removed entirely yields a predecessor that contains the one
//! obtained from the shorter instantiation, so such choices are skipped.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{within_path_bound, EdgeId, Hypergraph, NodeId, PathBound};
use crate::morphism::{restrict, MatchProblem, PartialMorphism, SubObject};
use crate::order::Basis;
use crate::pushout::minimal_pushout_complements;
use crate::rules::{
    application_condition, bound_for, count_vectors, CopyBlock, Instantiation, PreparedRule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every graph in the computation must stay within the path bound.
    Restricted,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: Mode,
    pub path_bound: Option<PathBound>,
    /// Skip co-matches that cannot lead to an applicable predecessor.
    pub postcond_lift: bool,
    /// Maximum number of sweeps; `None` means unlimited.
    pub max_iterations: Option<usize>,
    /// Use the node-plus-edge instantiation bound for every quantified rule.
    pub coarse_bound: bool,
    pub record_trace: bool,
}

pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

impl SearchConfig {
    pub fn general() -> Self {
        SearchConfig {
            mode: Mode::General,
            path_bound: None,
            postcond_lift: true,
            max_iterations: Some(DEFAULT_MAX_ITERATIONS),
            coarse_bound: false,
            record_trace: false,
        }
    }

    pub fn restricted(k: usize) -> Self {
        SearchConfig {
            mode: Mode::Restricted,
            path_bound: Some(PathBound(k)),
            max_iterations: None,
            ..SearchConfig::general()
        }
    }

    fn active_bound(&self) -> Option<PathBound> {
        match self.mode {
            Mode::Restricted => self.path_bound,
            Mode::General => None,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("restricted mode needs a path bound")]
    MissingPathBound,
    #[error("final graph {0} lies outside the path bound")]
    FinalOutsideBound(usize),
}

/// A graph produced by a backward step together with the instance that
/// rewrites it forward.
#[derive(Clone, Debug)]
pub struct Predecessor {
    pub graph: Hypergraph,
    pub instantiation: Arc<Instantiation>,
    /// `L̄ -> graph`
    pub matching: PartialMorphism,
}

pub fn backward_step(rule: &PreparedRule, g: &Hypergraph, cfg: &SearchConfig) -> Vec<Predecessor> {
    let k = rule.rule.quants.len();
    let bound = if cfg.coarse_bound && k > 0 {
        g.size()
    } else {
        bound_for(rule.bound, g)
    };
    let mut out = Vec::new();
    for total in 0..=bound {
        for counts in count_vectors(k, total) {
            let inst = rule.instantiation(&counts);
            step_with(rule, &inst, g, cfg, &mut out);
        }
    }
    out
}

/// Shape of one copy relative to its block, shared by all copies of a
/// quantification.
struct BlockShape {
    nodes: usize,
    // per block edge: endpoints as base node index or block-relative index
    edges: Vec<Vec<Endpoint>>,
}

#[derive(Clone, Copy)]
enum Endpoint {
    Base(usize),
    Local(usize),
}

impl BlockShape {
    fn of(rhs: &Hypergraph, block: &CopyBlock) -> Self {
        let edges = (block.rhs_edges.start..block.rhs_edges.end)
            .map(|e| {
                rhs.edge(EdgeId(e))
                    .conn
                    .iter()
                    .map(|v| {
                        if block.rhs_nodes.contains(&v.0) {
                            Endpoint::Local((v.0 - block.rhs_nodes.start) as usize)
                        } else {
                            Endpoint::Base(v.index())
                        }
                    })
                    .collect()
            })
            .collect();
        BlockShape {
            nodes: block.rhs_nodes.len(),
            edges,
        }
    }

    /// Non-empty node-closed selections, given which base nodes survive.
    fn choices(&self, base_nodes: &[bool]) -> Vec<(Vec<bool>, Vec<bool>)> {
        assert!(
            self.nodes + self.edges.len() <= 20,
            "quantification copy too large"
        );
        let mut out = Vec::new();
        for nmask in 0u32..(1 << self.nodes) {
            let allowed: Vec<usize> = (0..self.edges.len())
                .filter(|&e| {
                    self.edges[e].iter().all(|ep| match *ep {
                        Endpoint::Base(v) => base_nodes[v],
                        Endpoint::Local(v) => nmask >> v & 1 == 1,
                    })
                })
                .collect();
            for pick in 0u32..(1 << allowed.len()) {
                if nmask == 0 && pick == 0 {
                    continue;
                }
                let nodes = (0..self.nodes).map(|v| nmask >> v & 1 == 1).collect();
                let mut edges = vec![false; self.edges.len()];
                for (bit, &e) in allowed.iter().enumerate() {
                    edges[e] = pick >> bit & 1 == 1;
                }
                out.push((nodes, edges));
            }
        }
        out
    }
}

fn step_with(
    rule: &PreparedRule,
    inst: &Arc<Instantiation>,
    g: &Hypergraph,
    cfg: &SearchConfig,
    out: &mut Vec<Predecessor>,
) {
    let base_rhs = &rule.rule.base.rhs;
    let (nb, eb) = (base_rhs.node_count(), base_rhs.edge_count());
    assert!(nb + eb <= 20, "rule right side too large");
    let rhs = &inst.rhs;
    let k = rule.rule.quants.len();

    // blocks grouped by quantification, in block order
    let mut by_quant: Vec<Vec<&CopyBlock>> = vec![Vec::new(); k];
    for b in &inst.blocks {
        by_quant[b.quant].push(b);
    }
    let shapes: Vec<Option<BlockShape>> = by_quant
        .iter()
        .map(|bs| bs.first().map(|b| BlockShape::of(rhs, b)))
        .collect();

    // a predecessor is at least L̄, so nothing larger than the bound fits
    if let Some(pb) = cfg.active_bound() {
        if !within_path_bound(&inst.lhs, pb) {
            return;
        }
    }

    for nmask in 0u32..(1 << nb) {
        let base_nodes: Vec<bool> = (0..nb).map(|v| nmask >> v & 1 == 1).collect();
        let allowed: Vec<usize> = base_rhs
            .edges()
            .filter(|(_, e)| e.conn.iter().all(|v| base_nodes[v.index()]))
            .map(|(id, _)| id.index())
            .collect();
        let choices: Vec<Vec<(Vec<bool>, Vec<bool>)>> = shapes
            .iter()
            .map(|s| s.as_ref().map_or_else(Vec::new, |s| s.choices(&base_nodes)))
            .collect();
        if (0..k).any(|u| !by_quant[u].is_empty() && choices[u].is_empty()) {
            continue;
        }
        let per_quant: Vec<Vec<Vec<usize>>> = (0..k)
            .map(|u| non_decreasing(by_quant[u].len(), choices[u].len()))
            .collect();
        for pick in 0u32..(1 << allowed.len()) {
            let mut keep = SubObject {
                keep_nodes: vec![false; rhs.node_count()],
                keep_edges: vec![false; rhs.edge_count()],
            };
            keep.keep_nodes[..nb].copy_from_slice(&base_nodes);
            for (bit, &e) in allowed.iter().enumerate() {
                keep.keep_edges[e] = pick >> bit & 1 == 1;
            }
            for_each_product(&per_quant, &mut |seqs: &[&Vec<usize>]| {
                let mut sub = keep.clone();
                // (block, choice index) per copy, for symmetry constraints
                let mut assigned: Vec<(&CopyBlock, usize)> = Vec::new();
                for (u, seq) in seqs.iter().enumerate() {
                    for (block, &c) in by_quant[u].iter().zip(seq.iter()) {
                        let (ns, es) = &choices[u][c];
                        for (i, &kn) in ns.iter().enumerate() {
                            sub.keep_nodes[block.rhs_nodes.start as usize + i] = kn;
                        }
                        for (i, &ke) in es.iter().enumerate() {
                            sub.keep_edges[block.rhs_edges.start as usize + i] = ke;
                        }
                        assigned.push((block, c));
                    }
                }
                process_subobject(rule, inst, g, cfg, &sub, &assigned, out);
            });
        }
    }
}

fn process_subobject(
    rule: &PreparedRule,
    inst: &Arc<Instantiation>,
    g: &Hypergraph,
    cfg: &SearchConfig,
    sub: &SubObject,
    assigned: &[(&CopyBlock, usize)],
    out: &mut Vec<Predecessor>,
) {
    let (rprime, mu) = restrict(&inst.rhs, sub);
    if rprime.node_count() > g.node_count() || rprime.edge_count() > g.edge_count() {
        return;
    }
    let delta = inst.morphism.then(&mu).expect("shapes");

    let mut problem = MatchProblem::new(&rprime, g);
    for pair in assigned.windows(2) {
        let ((b1, c1), (b2, c2)) = (pair[0], pair[1]);
        if b1.quant != b2.quant || c1 != c2 {
            continue;
        }
        match (first_kept_node(b1, &mu), first_kept_node(b2, &mu)) {
            (Some(x), Some(y)) => problem = problem.order_nodes(x, y),
            _ => {
                if let (Some(x), Some(y)) = (first_kept_edge(b1, &mu), first_kept_edge(b2, &mu)) {
                    problem = problem.order_edges(x, y);
                }
            }
        }
    }

    // quantified nodes whose image has no other preimage: any context edge
    // there would have to attach to the quantified node itself
    let lifted: Vec<NodeId> = if cfg.postcond_lift {
        let pre = delta.node_preimages();
        rule.qnodes
            .iter()
            .filter_map(|&x| {
                let y = inst.embed.node(x).expect("embedding is total");
                delta.node(y).filter(|b| pre[b.index()].len() == 1)
            })
            .collect()
    } else {
        Vec::new()
    };
    let incidence = if lifted.is_empty() {
        Vec::new()
    } else {
        g.incidence()
    };

    let bound = cfg.active_bound();
    problem.for_each(|comatch| {
        if !lifted.is_empty() {
            let mut hit = vec![false; g.edge_count()];
            for e in comatch.edge_map().iter().flatten() {
                hit[e.index()] = true;
            }
            let blocked = lifted.iter().any(|&b| {
                let v = comatch.node(b).expect("co-match is total");
                incidence[v.index()].iter().any(|e| !hit[e.index()])
            });
            if blocked {
                return std::ops::ControlFlow::Continue(());
            }
        }
        for poc in minimal_pushout_complements(&inst.lhs, &delta, &rprime, comatch, g, bound) {
            if application_condition(&rule.qnodes, inst, &poc.matching, &poc.complement) {
                out.push(Predecessor {
                    graph: poc.complement,
                    instantiation: Arc::clone(inst),
                    matching: poc.matching,
                });
            }
        }
        std::ops::ControlFlow::Continue(())
    });
}

fn first_kept_node(block: &CopyBlock, mu: &PartialMorphism) -> Option<NodeId> {
    block.rhs_nodes.clone().find_map(|v| mu.node(NodeId(v)))
}

fn first_kept_edge(block: &CopyBlock, mu: &PartialMorphism) -> Option<EdgeId> {
    block.rhs_edges.clone().find_map(|e| mu.edge(EdgeId(e)))
}

/// All non-decreasing sequences of length `len` over `0..n`.
fn non_decreasing(len: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, n: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in from..n {
            cur.push(c);
            go(len, n, c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, n, 0, &mut Vec::new(), &mut out);
    out
}

fn for_each_product<'a>(lists: &'a [Vec<Vec<usize>>], f: &mut dyn FnMut(&[&'a Vec<usize>])) {
    fn go<'a>(
        lists: &'a [Vec<Vec<usize>>],
        cur: &mut Vec<&'a Vec<usize>>,
        f: &mut dyn FnMut(&[&'a Vec<usize>]),
    ) {
        if cur.len() == lists.len() {
            f(cur);
            return;
        }
        for item in &lists[cur.len()] {
            cur.push(item);
            go(lists, cur, f);
            cur.pop();
        }
    }
    go(lists, &mut Vec::new(), f);
}

/// What one (member, rule) expansion produced.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub iteration: usize,
    pub source: Hypergraph,
    pub rule: usize,
    pub produced: Vec<Predecessor>,
}

#[derive(Clone, Debug)]
pub struct SearchState {
    pub working: Basis,
    pub iteration: usize,
    pub stationary: bool,
    pub backward_steps: usize,
    pub trace: Vec<StepRecord>,
}

/// Repeats backward steps from every unexpanded basis member until a sweep
/// adds nothing new or the sweep budget runs out.
pub fn backward_search(
    rules: &[PreparedRule],
    finals: &[Hypergraph],
    cfg: &SearchConfig,
) -> Result<SearchState, SearchError> {
    if cfg.mode == Mode::Restricted && cfg.path_bound.is_none() {
        return Err(SearchError::MissingPathBound);
    }
    if let Some(pb) = cfg.active_bound() {
        if let Some(i) = finals.iter().position(|f| !within_path_bound(f, pb)) {
            return Err(SearchError::FinalOutsideBound(i));
        }
    }
    let mut working = Basis::new();
    let mut dirty: Vec<usize> = Vec::new();
    for f in crate::order::minimize(finals.iter().cloned()).graphs() {
        if let Some(id) = working.insert(f.clone()) {
            dirty.push(id);
        }
    }
    let mut state = SearchState {
        working,
        iteration: 0,
        stationary: false,
        backward_steps: 0,
        trace: Vec::new(),
    };
    loop {
        dirty.retain(|&id| state.working.get(id).is_some());
        if dirty.is_empty() {
            state.stationary = true;
            return Ok(state);
        }
        if cfg.max_iterations.is_some_and(|m| state.iteration >= m) {
            return Ok(state);
        }
        state.iteration += 1;
        let sources: Vec<Hypergraph> = dirty
            .iter()
            .map(|&id| state.working.get(id).expect("retained").clone())
            .collect();
        let jobs: Vec<(usize, usize)> = (0..sources.len())
            .flat_map(|s| (0..rules.len()).map(move |r| (s, r)))
            .collect();
        let results: Vec<Vec<Predecessor>> = jobs
            .par_iter()
            .map(|&(s, r)| backward_step(&rules[r], &sources[s], cfg))
            .collect();
        state.backward_steps += jobs.len();
        dirty.clear();
        for (&(s, r), produced) in jobs.iter().zip(results) {
            for p in &produced {
                if let Some(id) = state.working.insert(p.graph.clone()) {
                    dirty.push(id);
                }
            }
            if cfg.record_trace {
                state.trace.push(StepRecord {
                    iteration: state.iteration,
                    source: sources[s].clone(),
                    rule: r,
                    produced,
                });
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Safe,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Safe => "safe",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Safe iff the search converged and `init` is not above any basis member.
pub fn verdict(init: &Hypergraph, state: &SearchState) -> Verdict {
    if state.stationary && !state.working.represents(init) {
        Verdict::Safe
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        assert_eq!(non_decreasing(0, 3), vec![Vec::<usize>::new()]);
        assert_eq!(
            non_decreasing(2, 2),
            vec![vec![0, 0], vec![0, 1], vec![1, 1]]
        );
        assert!(non_decreasing(1, 0).is_empty());
    }

    #[test]
    fn empty_finals_are_stationary() {
        let state = backward_search(&[], &[], &SearchConfig::general()).unwrap();
        assert!(state.stationary);
        assert!(state.working.is_empty());
        assert_eq!(verdict(&Hypergraph::new(), &state), Verdict::Safe);
    }

    #[test]
    fn restricted_needs_bound() {
        let mut cfg = SearchConfig::restricted(2);
        cfg.path_bound = None;
        assert_eq!(
            backward_search(&[], &[], &cfg).unwrap_err(),
            SearchError::MissingPathBound
        );
    }
}
