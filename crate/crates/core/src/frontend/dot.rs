use std::fmt::Write;

use crate::graph::{Hypergraph, Signature};

/// Graphviz rendering: nodes are circles annotated with their unary labels,
/// binary edges are arrows from the first to the second node, and edges of
/// any other arity become boxes with numbered tentacles.
pub fn render_dot(g: &Hypergraph, sig: &Signature, name: &str) -> String {
    let mut unary: Vec<Vec<&str>> = vec![Vec::new(); g.node_count()];
    for (_, e) in g.edges() {
        if e.conn.len() == 1 {
            unary[e.conn[0].index()].push(sig.name(e.label));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\""));
    let _ = writeln!(out, "  node [shape=circle];");
    for v in g.nodes() {
        let mut tags = unary[v.index()].clone();
        tags.sort_unstable();
        if tags.is_empty() {
            let _ = writeln!(out, "  {v} [label=\"\"];");
        } else {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", tags.join(","));
        }
    }
    for (id, e) in g.edges() {
        let label = sig.name(e.label);
        match e.conn.len() {
            1 => {}
            2 => {
                let _ = writeln!(out, "  {} -> {} [label=\"{label}\"];", e.conn[0], e.conn[1]);
            }
            _ => {
                let _ = writeln!(out, "  {id} [shape=box, label=\"{label}\"];");
                for (i, v) in e.conn.iter().enumerate() {
                    let _ = writeln!(out, "  {id} -> {v} [label=\"{}\", arrowhead=none];", i + 1);
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
