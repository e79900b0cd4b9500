//! Rules with universal quantifications, their instantiations and forward
//! application.
//!
//! An instantiation glues copies of quantification bodies onto the base
//! rule, one pushout on each side per copy. The pushout construction keeps
//! existing element indices, so every copy occupies a contiguous block
//! appended to both sides, which is recorded in [`CopyBlock`].

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::graph::{isomorphic, EdgeId, Hypergraph, NodeId};
use crate::morphism::{MatchProblem, MorphismError, PartialMorphism};
use crate::pushout::{pushout, PushoutResult};

/// A plain rule `L ⇀ R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Hypergraph,
    pub rhs: Hypergraph,
    pub morphism: PartialMorphism,
}

/// One universal quantification: `embed: L -> L_u` (total injective) and
/// `morphism: L_u ⇀ R_u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantification {
    pub name: String,
    pub lhs: Hypergraph,
    pub rhs: Hypergraph,
    pub embed: PartialMorphism,
    pub morphism: PartialMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UqRule {
    pub name: String,
    pub base: Rule,
    pub quants: Vec<Quantification>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RuleViolation {
    #[error("rule morphism: {0}")]
    Base(MorphismError),
    #[error("quantification {quant}: embedding: {source}")]
    Embed {
        quant: String,
        source: MorphismError,
    },
    #[error("quantification {quant}: embedding of the left side is not total and injective")]
    EmbedNotMatch { quant: String },
    #[error("quantification {quant}: morphism: {source}")]
    Morphism {
        quant: String,
        source: MorphismError,
    },
    #[error("quantification {quant}: q∘p undefined on {element}")]
    CompositeUndefined { quant: String, element: String },
    #[error(
        "quantification {quant}: image of {element} must have exactly one preimage, found {found}"
    )]
    PreimageCount {
        quant: String,
        element: String,
        found: usize,
    },
    #[error("quantification {quant}: no quantified nodes")]
    NoQuantifiedNodes { quant: String },
}

pub fn validate_rule(rho: &UqRule) -> Result<(), Vec<RuleViolation>> {
    let mut out = Vec::new();
    let base = &rho.base;
    if let Err(e) = base.morphism.check(&base.lhs, &base.rhs) {
        out.push(RuleViolation::Base(e));
    }
    for u in &rho.quants {
        let quant = u.name.clone();
        if let Err(source) = u.embed.check(&base.lhs, &u.lhs) {
            out.push(RuleViolation::Embed { quant, source });
            continue;
        }
        if !u.embed.is_match() {
            out.push(RuleViolation::EmbedNotMatch { quant });
            continue;
        }
        if let Err(source) = u.morphism.check(&u.lhs, &u.rhs) {
            out.push(RuleViolation::Morphism { quant, source });
            continue;
        }
        let qp = u.embed.then(&u.morphism).expect("shapes checked");
        let node_pre = u.morphism.node_preimages();
        let edge_pre = u.morphism.edge_preimages();
        for v in base.lhs.nodes() {
            match qp.node(v) {
                None => out.push(RuleViolation::CompositeUndefined {
                    quant: quant.clone(),
                    element: v.to_string(),
                }),
                Some(w) if node_pre[w.index()].len() != 1 => {
                    out.push(RuleViolation::PreimageCount {
                        quant: quant.clone(),
                        element: v.to_string(),
                        found: node_pre[w.index()].len(),
                    })
                }
                Some(_) => {}
            }
        }
        for (e, _) in base.lhs.edges() {
            match qp.edge(e) {
                None => out.push(RuleViolation::CompositeUndefined {
                    quant: quant.clone(),
                    element: e.to_string(),
                }),
                Some(f) if edge_pre[f.index()].len() != 1 => {
                    out.push(RuleViolation::PreimageCount {
                        quant: quant.clone(),
                        element: e.to_string(),
                        found: edge_pre[f.index()].len(),
                    })
                }
                Some(_) => {}
            }
        }
        if quantification_nodes(&base.lhs, u).is_empty() {
            out.push(RuleViolation::NoQuantifiedNodes { quant });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Nodes `v` of `L` such that some edge at `embed(v)` in `L_u` has no
/// preimage in `L`.
pub fn quantification_nodes(lhs: &Hypergraph, u: &Quantification) -> Vec<NodeId> {
    let mut has_pre = vec![false; u.lhs.edge_count()];
    for f in u.embed.edge_map().iter().flatten() {
        has_pre[f.index()] = true;
    }
    let mut touched = vec![false; u.lhs.node_count()];
    for (f, e) in u.lhs.edges() {
        if !has_pre[f.index()] {
            for v in &e.conn {
                touched[v.index()] = true;
            }
        }
    }
    lhs.nodes()
        .filter(|&v| u.embed.node(v).is_some_and(|w| touched[w.index()]))
        .collect()
}

/// Union of the quantified nodes of all quantifications, sorted.
pub fn quantified_nodes(rho: &UqRule) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = rho
        .quants
        .iter()
        .flat_map(|u| quantification_nodes(&rho.base.lhs, u))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Element ranges contributed by one quantification copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyBlock {
    pub quant: usize,
    pub lhs_nodes: Range<u32>,
    pub lhs_edges: Range<u32>,
    pub rhs_nodes: Range<u32>,
    pub rhs_edges: Range<u32>,
}

/// A derived rule `embed: L -> L̄`, `morphism: L̄ ⇀ R̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instantiation {
    pub lhs: Hypergraph,
    pub rhs: Hypergraph,
    pub embed: PartialMorphism,
    pub morphism: PartialMorphism,
    pub counts: Vec<usize>,
    pub blocks: Vec<CopyBlock>,
}

impl Instantiation {
    /// The length-zero instantiation `(id_L, r)`.
    pub fn base(rho: &UqRule) -> Self {
        Instantiation {
            lhs: rho.base.lhs.clone(),
            rhs: rho.base.rhs.clone(),
            embed: PartialMorphism::identity(&rho.base.lhs),
            morphism: rho.base.morphism.clone(),
            counts: vec![0; rho.quants.len()],
            blocks: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Glues one more copy of quantification `u`.
    pub fn extend(&self, rho: &UqRule, u: usize) -> Instantiation {
        let q = &rho.quants[u];
        let lpo = pushout(&self.embed, &self.lhs, &q.embed, &q.lhs);
        let gp = self
            .embed
            .then(&self.morphism)
            .expect("instantiation shapes");
        let qp = q.embed.then(&q.morphism).expect("quantification shapes");
        let rpo = pushout(&gp, &self.rhs, &qp, &q.rhs);

        // mediating morphism: through the old side where possible, else
        // through the quantification copy
        let (ln, le) = (lpo.object.node_count(), lpo.object.edge_count());
        let mut nodes: Vec<Option<Option<NodeId>>> = vec![None; ln];
        let mut edges: Vec<Option<Option<EdgeId>>> = vec![None; le];
        for v in self.lhs.nodes() {
            let x = lpo.left.node(v).expect("old side embeds totally");
            nodes[x.index()] = Some(self.morphism.node(v).and_then(|w| rpo.left.node(w)));
        }
        for (e, _) in self.lhs.edges() {
            let x = lpo.left.edge(e).expect("old side embeds totally");
            edges[x.index()] = Some(self.morphism.edge(e).and_then(|f| rpo.left.edge(f)));
        }
        for z in q.lhs.nodes() {
            let x = lpo.right.node(z).expect("copy embeds totally");
            let via = q.morphism.node(z).and_then(|w| rpo.right.node(w));
            debug_assert!(nodes[x.index()].is_none_or(|old| old == via));
            nodes[x.index()].get_or_insert(via);
        }
        for (f, _) in q.lhs.edges() {
            let x = lpo.right.edge(f).expect("copy embeds totally");
            let via = q.morphism.edge(f).and_then(|w| rpo.right.edge(w));
            debug_assert!(edges[x.index()].is_none_or(|old| old == via));
            edges[x.index()].get_or_insert(via);
        }
        let eta = PartialMorphism::new(
            nodes
                .into_iter()
                .map(|x| x.expect("pushout legs are jointly surjective"))
                .collect(),
            edges
                .into_iter()
                .map(|x| x.expect("pushout legs are jointly surjective"))
                .collect(),
            &rpo.object,
        );

        let mut counts = self.counts.clone();
        counts[u] += 1;
        let mut blocks = self.blocks.clone();
        blocks.push(CopyBlock {
            quant: u,
            lhs_nodes: self.lhs.node_count() as u32..ln as u32,
            lhs_edges: self.lhs.edge_count() as u32..le as u32,
            rhs_nodes: self.rhs.node_count() as u32..rpo.object.node_count() as u32,
            rhs_edges: self.rhs.edge_count() as u32..rpo.object.edge_count() as u32,
        });
        Instantiation {
            embed: self.embed.then(&lpo.left).expect("shapes"),
            morphism: eta,
            lhs: lpo.object,
            rhs: rpo.object,
            counts,
            blocks,
        }
    }
}

/// Instantiation with `counts[u]` copies of quantification `u`, glued in
/// quantification order.
pub fn instantiate(rho: &UqRule, counts: &[usize]) -> Instantiation {
    assert_eq!(
        counts.len(),
        rho.quants.len(),
        "one count per quantification"
    );
    let seq: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(u, &c)| std::iter::repeat_n(u, c))
        .collect();
    instantiate_sequence(rho, &seq)
}

/// Instantiation built by gluing the quantifications in the given order.
pub fn instantiate_sequence(rho: &UqRule, seq: &[usize]) -> Instantiation {
    seq.iter()
        .fold(Instantiation::base(rho), |inst, &u| inst.extend(rho, u))
}

/// Which bound on instantiation length applies to a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Copies never change the right side.
    Zero,
    /// Every edge a copy adds on the right touches a node the copy adds.
    Nodes,
    NodesAndEdges,
}

pub fn bound_kind(rho: &UqRule) -> BoundKind {
    if rho.quants.is_empty() {
        return BoundKind::Zero;
    }
    let base = Instantiation::base(rho);
    let singles: Vec<Instantiation> = (0..rho.quants.len()).map(|u| base.extend(rho, u)).collect();
    if singles
        .iter()
        .all(|i| isomorphic(&i.rhs, &rho.base.rhs).is_some())
    {
        return BoundKind::Zero;
    }
    let local = singles.iter().all(|i| {
        let block = &i.blocks[0];
        i.rhs
            .edges()
            .filter(|(e, _)| block.rhs_edges.contains(&e.0))
            .all(|(_, edge)| edge.conn.iter().any(|v| block.rhs_nodes.contains(&v.0)))
    });
    if local {
        BoundKind::Nodes
    } else {
        BoundKind::NodesAndEdges
    }
}

/// Upper bound on the instantiation length needed for a backward step from `g`.
pub fn instantiation_bound(rho: &UqRule, g: &Hypergraph) -> usize {
    bound_for(bound_kind(rho), g)
}

pub(crate) fn bound_for(kind: BoundKind, g: &Hypergraph) -> usize {
    match kind {
        BoundKind::Zero => 0,
        BoundKind::Nodes => g.node_count(),
        BoundKind::NodesAndEdges => g.size(),
    }
}

/// True iff no edge of `g` at the image of a quantified node lies outside
/// the image of `m: L̄ -> g`.
pub fn application_condition(
    qnodes: &[NodeId],
    inst: &Instantiation,
    m: &PartialMorphism,
    g: &Hypergraph,
) -> bool {
    let mut in_image = vec![false; g.edge_count()];
    for e in m.edge_map().iter().flatten() {
        in_image[e.index()] = true;
    }
    qnodes.iter().all(|&x| {
        let Some(v) = inst.embed.node(x).and_then(|y| m.node(y)) else {
            return true;
        };
        g.edges()
            .all(|(e, edge)| in_image[e.index()] || !edge.conn.contains(&v))
    })
}

/// Count vectors over `k` quantifications summing to exactly `total`, in
/// lexicographically decreasing order.
pub(crate) fn count_vectors(k: usize, total: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            go(k, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(k, total, &mut Vec::new(), &mut out);
    out
}

/// All applicable `(instantiation, match)` pairs of `rho` on `g`.
/// Instantiations are tried by increasing length until none fits into `g`.
pub fn applicable_instances(
    rho: &UqRule,
    g: &Hypergraph,
) -> Vec<(Arc<Instantiation>, PartialMorphism)> {
    let prepared = PreparedRule::new(rho.clone());
    prepared.applicable_instances(g)
}

/// Result of applying an instance: the pushout of `γ` and the match.
pub fn apply(inst: &Instantiation, m: &PartialMorphism, g: &Hypergraph) -> Hypergraph {
    apply_with_legs(inst, m, g).object
}

/// Like [`apply`], also returning the morphisms `R̄ -> H` and `G ⇀ H`.
pub fn apply_with_legs(inst: &Instantiation, m: &PartialMorphism, g: &Hypergraph) -> PushoutResult {
    pushout(&inst.morphism, &inst.rhs, m, g)
}

/// A validated rule with derived data and an instantiation cache that may
/// be shared between threads.
#[derive(Debug)]
pub struct PreparedRule {
    pub rule: UqRule,
    pub qnodes: Vec<NodeId>,
    pub bound: BoundKind,
    cache: Mutex<HashMap<Vec<usize>, Arc<Instantiation>>>,
}

impl PreparedRule {
    pub fn new(rule: UqRule) -> Self {
        PreparedRule {
            qnodes: quantified_nodes(&rule),
            bound: bound_kind(&rule),
            rule,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn name(&self) -> &str {
        &self.rule.name
    }

    pub fn instantiation(&self, counts: &[usize]) -> Arc<Instantiation> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(counts) {
            return Arc::clone(hit);
        }
        // built outside the lock; a concurrent insert of an equal value is harmless
        let built = Arc::new(instantiate(&self.rule, counts));
        let mut cache = self.cache.lock().expect("cache lock");
        Arc::clone(cache.entry(counts.to_vec()).or_insert(built))
    }

    pub fn applicable_instances(
        &self,
        g: &Hypergraph,
    ) -> Vec<(Arc<Instantiation>, PartialMorphism)> {
        let k = self.rule.quants.len();
        let mut out = Vec::new();
        for total in 0.. {
            let mut any_fits = false;
            for counts in count_vectors(k, total) {
                let inst = self.instantiation(&counts);
                if inst.lhs.node_count() > g.node_count() || inst.lhs.edge_count() > g.edge_count()
                {
                    continue;
                }
                any_fits = true;
                MatchProblem::new(&inst.lhs, g).for_each(|m| {
                    if application_condition(&self.qnodes, &inst, m, g) {
                        out.push((Arc::clone(&inst), m.clone()));
                    }
                    std::ops::ControlFlow::Continue(())
                });
            }
            // copies always add an edge, so longer instantiations only grow
            if !any_fits || k == 0 {
                break;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Label;

    const T: Label = Label(0);
    const E: Label = Label(1);
    const F: Label = Label(2);
    const OF: Label = Label(3);

    fn unary(l: Label) -> Hypergraph {
        let mut g = Hypergraph::with_nodes(1);
        g.add_edge(l, [NodeId(0)]);
        g
    }

    /// E(p) => T(p), and for all OF(q,p): OF(q,p) => F(q,p)
    pub(crate) fn release_all() -> UqRule {
        let lhs = unary(E);
        let rhs = unary(T);
        let morphism = PartialMorphism::new(vec![Some(NodeId(0))], vec![None], &rhs);
        let mut lu = unary(E);
        let q = lu.add_node();
        lu.add_edge(OF, [q, NodeId(0)]);
        let mut ru = Hypergraph::with_nodes(2);
        ru.add_edge(E, [NodeId(0)]);
        ru.add_edge(F, [NodeId(1), NodeId(0)]);
        let embed = PartialMorphism::new(vec![Some(NodeId(0))], vec![Some(EdgeId(0))], &lu);
        let qm = PartialMorphism::new(
            vec![Some(NodeId(0)), Some(NodeId(1))],
            vec![Some(EdgeId(0)), None],
            &ru,
        );
        UqRule {
            name: "release_all".into(),
            base: Rule { lhs, rhs, morphism },
            quants: vec![Quantification {
                name: "forks".into(),
                lhs: lu,
                rhs: ru,
                embed,
                morphism: qm,
            }],
        }
    }

    #[test]
    fn valid_and_quantified() {
        let rho = release_all();
        validate_rule(&rho).unwrap();
        assert_eq!(quantified_nodes(&rho), vec![NodeId(0)]);
        assert_eq!(bound_kind(&rho), BoundKind::Nodes);
    }

    #[test]
    fn composite_must_be_defined() {
        let mut rho = release_all();
        rho.quants[0].morphism.set_edge(EdgeId(0), None);
        let errs = validate_rule(&rho).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, RuleViolation::CompositeUndefined { .. })));
        assert!(errs[0].to_string().contains("q∘p undefined"));
    }

    #[test]
    fn one_copy() {
        let rho = release_all();
        let inst = instantiate(&rho, &[1]);
        assert_eq!(inst.lhs.node_count(), 2);
        assert_eq!(inst.lhs.label_counts()[OF.0 as usize], 1);
        assert_eq!(inst.rhs.node_count(), 2);
        let rl = inst.rhs.label_counts();
        assert_eq!(
            (
                rl[T.0 as usize],
                rl[F.0 as usize],
                rl.get(E.0 as usize).copied()
            ),
            (1, 1, Some(0))
        );
        inst.embed.check(&rho.base.lhs, &inst.lhs).unwrap();
        inst.morphism.check(&inst.lhs, &inst.rhs).unwrap();
        assert!(inst.embed.is_match());
    }

    #[test]
    fn base_instantiation_is_the_rule() {
        let rho = release_all();
        let inst = instantiate(&rho, &[0]);
        assert_eq!(inst.morphism, rho.base.morphism);
        assert_eq!(inst.embed, PartialMorphism::identity(&rho.base.lhs));
    }

    #[test]
    fn release_all_converts_every_fork() {
        let rho = release_all();
        let mut g = Hypergraph::with_nodes(3);
        g.add_edge(E, [NodeId(0)]);
        g.add_edge(OF, [NodeId(1), NodeId(0)]);
        g.add_edge(OF, [NodeId(2), NodeId(0)]);
        let inst = applicable_instances(&rho, &g);
        // two copies, two ways to order them
        assert_eq!(inst.len(), 2);
        for (i, m) in &inst {
            assert_eq!(i.counts, vec![2]);
            let h = apply(i, m, &g);
            let mut expect = Hypergraph::with_nodes(3);
            expect.add_edge(T, [NodeId(0)]);
            expect.add_edge(F, [NodeId(1), NodeId(0)]);
            expect.add_edge(F, [NodeId(2), NodeId(0)]);
            assert!(isomorphic(&h, &expect).is_some());
        }
    }

    #[test]
    fn count_vectors_graded() {
        assert_eq!(count_vectors(0, 0), vec![Vec::<usize>::new()]);
        assert!(count_vectors(0, 1).is_empty());
        assert_eq!(
            count_vectors(2, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
    }
}
