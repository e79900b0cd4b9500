use std::fmt::Write;

use crate::graph::{EdgeId, Hypergraph, Signature};
use crate::morphism::PartialMorphism;
use crate::rules::UqRule;

use super::SpecFile;

/// Element names used when printing one side of a rule.
struct Names {
    nodes: Vec<String>,
    edges: Vec<String>,
}

impl Names {
    fn fresh(g: &Hypergraph, node: &str, edge: &str) -> Self {
        Names {
            nodes: g.nodes().map(|v| format!("{node}{}", v.0)).collect(),
            edges: g.edges().map(|(e, _)| format!("{edge}{}", e.0)).collect(),
        }
    }
}

fn edge_text(sig: &Signature, g: &Hypergraph, e: EdgeId, names: &Names) -> String {
    let edge = g.edge(e);
    let args: Vec<&str> = edge
        .conn
        .iter()
        .map(|v| names.nodes[v.index()].as_str())
        .collect();
    format!("{}({})", sig.name(edge.label), args.join(", "))
}

/// The inside of a `graph` block, on one line: `nodes n0 n1; F(n0, n1);`.
pub fn print_graph_body(g: &Hypergraph, sig: &Signature) -> String {
    let names = Names::fresh(g, "n", "e");
    let mut parts = Vec::new();
    if g.node_count() > 0 {
        parts.push(format!("nodes {};", names.nodes.join(" ")));
    }
    for (e, _) in g.edges() {
        parts.push(format!("{};", edge_text(sig, g, e, &names)));
    }
    parts.join(" ")
}

pub fn print_graph(name: &str, g: &Hypergraph, sig: &Signature) -> String {
    let body = print_graph_body(g, sig);
    if body.is_empty() {
        format!("graph {name} {{ }}")
    } else {
        format!("graph {name} {{ {body} }}")
    }
}

/// Prints the elements of `g` that `shared` does not cover, with ids.
fn side(
    sig: &Signature,
    g: &Hypergraph,
    names: &Names,
    shared: Option<&PartialMorphism>,
) -> String {
    let (mut own_nodes, mut own_edges) = (vec![true; g.node_count()], vec![true; g.edge_count()]);
    if let Some(p) = shared {
        for v in p.node_map().iter().flatten() {
            own_nodes[v.index()] = false;
        }
        for e in p.edge_map().iter().flatten() {
            own_edges[e.index()] = false;
        }
    }
    let mut parts = Vec::new();
    let listed: Vec<&str> = g
        .nodes()
        .filter(|v| own_nodes[v.index()])
        .map(|v| names.nodes[v.index()].as_str())
        .collect();
    if !listed.is_empty() {
        parts.push(format!("nodes {};", listed.join(" ")));
    }
    for (e, _) in g.edges() {
        if own_edges[e.index()] {
            parts.push(format!(
                "{}: {};",
                names.edges[e.index()],
                edge_text(sig, g, e, names)
            ));
        }
    }
    if parts.is_empty() {
        "{ }".to_string()
    } else {
        format!("{{ {} }}", parts.join(" "))
    }
}

fn mapping(m: &PartialMorphism, from: &Names, to: &Names) -> String {
    let mut parts = Vec::new();
    for (i, v) in m.node_map().iter().enumerate() {
        if let Some(w) = v {
            parts.push(format!("{} -> {};", from.nodes[i], to.nodes[w.index()]));
        }
    }
    for (i, e) in m.edge_map().iter().enumerate() {
        if let Some(f) = e {
            parts.push(format!("{} -> {};", from.edges[i], to.edges[f.index()]));
        }
    }
    if parts.is_empty() {
        "{ }".to_string()
    } else {
        format!("{{ {} }}", parts.join(" "))
    }
}

fn print_rule(out: &mut String, sig: &Signature, rule: &UqRule) {
    let base = &rule.base;
    let ln = Names::fresh(&base.lhs, "p", "l");
    let rn = Names::fresh(&base.rhs, "r", "k");
    let _ = writeln!(out, "rule {} {{", rule.name);
    let _ = writeln!(out, "    left  {}", side(sig, &base.lhs, &ln, None));
    let _ = writeln!(out, "    right {}", side(sig, &base.rhs, &rn, None));
    let _ = writeln!(out, "    map   {}", mapping(&base.morphism, &ln, &rn));
    for (i, q) in rule.quants.iter().enumerate() {
        // elements of L_u coming from L keep their names
        let mut un = Names::fresh(&q.lhs, &format!("u{i}_"), &format!("ue{i}_"));
        for v in base.lhs.nodes() {
            let w = q.embed.node(v).expect("embedding is total");
            un.nodes[w.index()] = ln.nodes[v.index()].clone();
        }
        for (e, _) in base.lhs.edges() {
            let f = q.embed.edge(e).expect("embedding is total");
            un.edges[f.index()] = ln.edges[e.index()].clone();
        }
        let vn = Names::fresh(&q.rhs, &format!("v{i}_"), &format!("ve{i}_"));
        let _ = writeln!(out, "    forall {} {{", q.name);
        let _ = writeln!(
            out,
            "        left  {}",
            side(sig, &q.lhs, &un, Some(&q.embed))
        );
        let _ = writeln!(out, "        right {}", side(sig, &q.rhs, &vn, None));
        let _ = writeln!(out, "        map   {}", mapping(&q.morphism, &un, &vn));
        let _ = writeln!(out, "    }}");
    }
    let _ = writeln!(out, "}}");
}

/// Prints a specification in the input language. Element names are
/// regenerated, so reparsing yields isomorphic graphs and rules.
pub fn print_spec(spec: &SpecFile) -> String {
    let sig = &spec.signature;
    let mut out = String::new();
    let labels: Vec<String> = sig
        .labels()
        .map(|(_, name, arity)| format!("{name}/{arity}"))
        .collect();
    let _ = writeln!(out, "signature {{ {} }}\n", labels.join(" "));
    for rule in &spec.rules {
        print_rule(&mut out, sig, rule);
        out.push('\n');
    }
    for (name, g) in &spec.graphs {
        let _ = writeln!(out, "{}", print_graph(name, g, sig));
    }
    if !spec.graphs.is_empty() {
        out.push('\n');
    }
    for name in &spec.errors {
        let _ = writeln!(out, "error {name};");
    }
    for name in &spec.inits {
        let _ = writeln!(out, "init {name};");
    }
    out
}
