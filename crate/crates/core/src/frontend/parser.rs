//! Parser for the specification language.
//!
//! ```text
//! signature { T/1 F/2 }
//! rule r {
//!     left  { t: T(p); }
//!     right { F(p, q); }
//!     map   { p -> p; }
//!     forall u { left { ... } right { ... } map { ... } }
//! }
//! graph g { nodes a b; T(a); F(a, b); }
//! init g;
//! error g;
//! ```
//!
//! Nodes are introduced by a `nodes` clause or, when it is absent, by the
//! edges that mention them. A `forall` left side extends the rule's left
//! side: names it shares with the rule denote the same elements.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Hypergraph, NodeId, Signature};
use crate::morphism::PartialMorphism;
use crate::rules::{validate_rule, Quantification, Rule, UqRule};

use super::SpecFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(word), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let n = word.parse().map_err(|_| ParseError {
                pos,
                message: format!("number `{word}` too large"),
            })?;
            out.push((Tok::Nat(n), pos));
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Sym("->"), pos));
            i += 2;
            col += 2;
            continue;
        }
        let sym = match c {
            '{' => "{",
            '}' => "}",
            '(' => "(",
            ')' => ")",
            ',' => ",",
            ';' => ";",
            ':' => ":",
            '/' => "/",
            _ => return err(pos, format!("unexpected character `{c}`")),
        };
        out.push((Tok::Sym(sym), pos));
        i += 1;
        col += 1;
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

type Name = (String, Pos);

#[derive(Clone, Debug, Default)]
struct BodyAst {
    nodes: Option<Vec<Name>>,
    edges: Vec<EdgeAst>,
}

#[derive(Clone, Debug)]
struct EdgeAst {
    id: Option<Name>,
    label: Name,
    args: Vec<Name>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, sym: &'static str) -> Result<Pos, ParseError> {
        let (t, pos) = self.bump();
        if t == Tok::Sym(sym) {
            Ok(pos)
        } else {
            err(pos, format!("expected `{sym}`, found {t}"))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        let (t, pos) = self.bump();
        match t {
            Tok::Ident(ref w) if w == kw => Ok(pos),
            _ => err(pos, format!("expected `{kw}`, found {t}")),
        }
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        let (t, pos) = self.bump();
        match t {
            Tok::Ident(w) => Ok((w, pos)),
            _ => err(pos, format!("expected a name, found {t}")),
        }
    }

    fn body(&mut self) -> Result<BodyAst, ParseError> {
        self.expect("{")?;
        let mut body = BodyAst::default();
        if matches!(self.peek(), Tok::Ident(w) if w == "nodes")
            && !matches!(self.peek2(), Tok::Sym(":") | Tok::Sym("("))
        {
            self.bump();
            let mut nodes = Vec::new();
            while matches!(self.peek(), Tok::Ident(_)) {
                nodes.push(self.name()?);
            }
            self.expect(";")?;
            body.nodes = Some(nodes);
        }
        while *self.peek() != Tok::Sym("}") {
            let first = self.name()?;
            let (id, label) = if *self.peek() == Tok::Sym(":") {
                self.bump();
                (Some(first), self.name()?)
            } else {
                (None, first)
            };
            self.expect("(")?;
            let mut args = Vec::new();
            if *self.peek() != Tok::Sym(")") {
                args.push(self.name()?);
                while *self.peek() == Tok::Sym(",") {
                    self.bump();
                    args.push(self.name()?);
                }
            }
            self.expect(")")?;
            self.expect(";")?;
            body.edges.push(EdgeAst { id, label, args });
        }
        self.expect("}")?;
        Ok(body)
    }

    fn mapping(&mut self) -> Result<Vec<(Name, Name)>, ParseError> {
        self.expect("{")?;
        let mut out = Vec::new();
        while *self.peek() != Tok::Sym("}") {
            let from = self.name()?;
            self.expect("->")?;
            let to = self.name()?;
            self.expect(";")?;
            out.push((from, to));
        }
        self.expect("}")?;
        Ok(out)
    }
}

/// Names of the elements of one graph.
#[derive(Clone, Debug, Default)]
struct Scope {
    nodes: HashMap<String, NodeId>,
    edges: HashMap<String, EdgeId>,
}

/// Adds the body to `g`, extending `scope`. Shared edge ids must repeat the
/// existing edge exactly.
fn build(
    body: &BodyAst,
    sig: &Signature,
    g: &mut Hypergraph,
    scope: &mut Scope,
) -> Result<(), ParseError> {
    let declared = body.nodes.is_some();
    for (name, pos) in body.nodes.iter().flatten() {
        if scope.edges.contains_key(name) {
            return err(*pos, format!("`{name}` already names an edge"));
        }
        scope
            .nodes
            .entry(name.clone())
            .or_insert_with(|| g.add_node());
    }
    let listed: Vec<&str> = body
        .nodes
        .iter()
        .flatten()
        .map(|(n, _)| n.as_str())
        .collect();
    for e in &body.edges {
        let (lname, lpos) = &e.label;
        let Some(label) = sig.label(lname) else {
            return err(*lpos, format!("unknown label `{lname}`"));
        };
        let arity = sig.arity(label).expect("known label");
        if arity != e.args.len() {
            return err(
                *lpos,
                format!(
                    "arity mismatch: `{lname}` expects {arity} nodes, found {}",
                    e.args.len()
                ),
            );
        }
        let mut conn = Vec::with_capacity(arity);
        for (arg, apos) in &e.args {
            if scope.edges.contains_key(arg) {
                return err(*apos, format!("`{arg}` names an edge, not a node"));
            }
            let known = scope.nodes.get(arg).copied();
            let v = match known {
                Some(v) => v,
                None if declared && !listed.contains(&arg.as_str()) => {
                    return err(*apos, format!("dangling endpoint `{arg}`"));
                }
                None => {
                    let v = g.add_node();
                    scope.nodes.insert(arg.clone(), v);
                    v
                }
            };
            conn.push(v);
        }
        match &e.id {
            Some((id, ipos)) => {
                if scope.nodes.contains_key(id) {
                    return err(*ipos, format!("`{id}` already names a node"));
                }
                if let Some(&existing) = scope.edges.get(id) {
                    let old = g.edge(existing);
                    if old.label != label || old.conn.as_slice() != conn.as_slice() {
                        return err(*ipos, format!("edge `{id}` redeclared differently"));
                    }
                } else {
                    let eid = g.add_edge(label, conn);
                    scope.edges.insert(id.clone(), eid);
                }
            }
            None => {
                g.add_edge(label, conn);
            }
        }
    }
    Ok(())
}

fn resolve_map(
    map: &[(Name, Name)],
    lhs: (&Hypergraph, &Scope),
    rhs: (&Hypergraph, &Scope),
) -> Result<PartialMorphism, ParseError> {
    let mut nodes = vec![None; lhs.0.node_count()];
    let mut edges = vec![None; lhs.0.edge_count()];
    for ((from, fpos), (to, tpos)) in map {
        if let Some(&v) = lhs.1.nodes.get(from) {
            let Some(&w) = rhs.1.nodes.get(to) else {
                return err(*tpos, format!("`{to}` is not a node of the right side"));
            };
            if nodes[v.index()].replace(w).is_some() {
                return err(*fpos, format!("`{from}` mapped twice"));
            }
        } else if let Some(&e) = lhs.1.edges.get(from) {
            let Some(&f) = rhs.1.edges.get(to) else {
                return err(*tpos, format!("`{to}` is not an edge of the right side"));
            };
            if edges[e.index()].replace(f).is_some() {
                return err(*fpos, format!("`{from}` mapped twice"));
            }
        } else {
            return err(
                *fpos,
                format!("`{from}` is not an element of the left side"),
            );
        }
    }
    Ok(PartialMorphism::new(nodes, edges, rhs.0))
}

pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    p.keyword("signature")?;
    p.expect("{")?;
    let mut sig = Signature::new();
    while *p.peek() != Tok::Sym("}") {
        let (name, pos) = p.name()?;
        p.expect("/")?;
        let (t, npos) = p.bump();
        let Tok::Nat(arity) = t else {
            return err(npos, format!("expected an arity, found {t}"));
        };
        if sig.add(&name, arity).is_err() {
            return err(
                pos,
                format!("label `{name}` declared twice or too many labels"),
            );
        }
    }
    p.expect("}")?;
    if sig.is_empty() {
        return err(p.pos(), "signature declares no labels");
    }

    let mut spec = SpecFile {
        signature: sig,
        ..SpecFile::default()
    };
    let mut graph_pos: HashMap<String, Pos> = HashMap::new();
    let mut rule_pos: HashMap<String, Pos> = HashMap::new();
    let mut refs: Vec<(bool, Name)> = Vec::new();
    loop {
        let (t, pos) = p.bump();
        let Tok::Ident(kw) = t else {
            if t == Tok::Eof {
                break;
            }
            return err(pos, format!("expected an item, found {t}"));
        };
        match kw.as_str() {
            "graph" => {
                let (name, npos) = p.name()?;
                if graph_pos.insert(name.clone(), npos).is_some() {
                    return err(npos, format!("graph `{name}` defined twice"));
                }
                let body = p.body()?;
                let mut g = Hypergraph::new();
                build(&body, &spec.signature, &mut g, &mut Scope::default())?;
                spec.graphs.push((name, g));
            }
            "rule" => {
                let (name, npos) = p.name()?;
                if rule_pos.insert(name.clone(), npos).is_some() {
                    return err(npos, format!("rule `{name}` defined twice"));
                }
                let rule = parse_rule(&mut p, &spec.signature, name)?;
                spec.rules.push(rule);
            }
            "init" | "error" => {
                let name = p.name()?;
                p.expect(";")?;
                refs.push((kw == "init", name));
            }
            _ => {
                return err(
                    pos,
                    format!("expected `graph`, `rule`, `init` or `error`, found `{kw}`"),
                )
            }
        }
    }
    for (is_init, (name, pos)) in refs {
        if !graph_pos.contains_key(&name) {
            return err(pos, format!("unknown graph `{name}`"));
        }
        if is_init {
            spec.inits.push(name);
        } else {
            spec.errors.push(name);
        }
    }
    Ok(spec)
}

fn parse_rule(p: &mut Parser, sig: &Signature, name: String) -> Result<UqRule, ParseError> {
    p.expect("{")?;
    p.keyword("left")?;
    let left = p.body()?;
    p.keyword("right")?;
    let right = p.body()?;
    let mpos = p.keyword("map")?;
    let map = p.mapping()?;

    let (mut lhs, mut lscope) = (Hypergraph::new(), Scope::default());
    build(&left, sig, &mut lhs, &mut lscope)?;
    let (mut rhs, mut rscope) = (Hypergraph::new(), Scope::default());
    build(&right, sig, &mut rhs, &mut rscope)?;
    let morphism = resolve_map(&map, (&lhs, &lscope), (&rhs, &rscope))?;
    if let Err(e) = morphism.check(&lhs, &rhs) {
        return err(mpos, format!("rule `{name}`: {e}"));
    }

    let mut quants = Vec::new();
    let mut qpos = Vec::new();
    while matches!(p.peek(), Tok::Ident(w) if w == "forall") {
        let fpos = p.bump().1;
        let (qname, _) = p.name()?;
        p.expect("{")?;
        p.keyword("left")?;
        let qleft = p.body()?;
        p.keyword("right")?;
        let qright = p.body()?;
        let qmpos = p.keyword("map")?;
        let qmap = p.mapping()?;
        p.expect("}")?;

        let (mut lu, mut uscope) = (lhs.clone(), lscope.clone());
        build(&qleft, sig, &mut lu, &mut uscope)?;
        let (mut ru, mut ruscope) = (Hypergraph::new(), Scope::default());
        build(&qright, sig, &mut ru, &mut ruscope)?;
        let qm = resolve_map(&qmap, (&lu, &uscope), (&ru, &ruscope))?;
        if let Err(e) = qm.check(&lu, &ru) {
            return err(qmpos, format!("quantification `{qname}`: {e}"));
        }
        let embed = PartialMorphism::new(
            lhs.nodes().map(Some).collect(),
            lhs.edges().map(|(e, _)| Some(e)).collect(),
            &lu,
        );
        quants.push(Quantification {
            name: qname,
            lhs: lu,
            rhs: ru,
            embed,
            morphism: qm,
        });
        qpos.push(fpos);
    }
    p.expect("}")?;

    let mut rule = UqRule {
        name,
        base: Rule { lhs, rhs, morphism },
        quants: Vec::new(),
    };
    // one quantification at a time, so errors point at the right block
    for (q, pos) in quants.into_iter().zip(qpos) {
        rule.quants.push(q);
        let single = UqRule {
            quants: vec![rule.quants.last().expect("just pushed").clone()],
            ..rule.clone()
        };
        if let Err(violations) = validate_rule(&single) {
            return err(pos, format!("rule `{}`: {}", rule.name, violations[0]));
        }
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "signature { T/1 OF/2 F/2 E/1 }\n";

    #[test]
    fn arity_error_is_located() {
        let text = format!("{HEAD}graph g {{\n  nodes p;\n  OF(p);\n}}\n");
        let e = parse_spec(&text).unwrap_err();
        assert_eq!(e.pos, Pos { line: 4, col: 3 });
        assert!(e.message.contains("arity mismatch"), "{e}");
    }

    #[test]
    fn dangling_endpoint() {
        let text = format!("{HEAD}graph g {{ nodes p; F(p, q); }}");
        let e = parse_spec(&text).unwrap_err();
        assert!(e.message.contains("dangling endpoint `q`"), "{e}");
    }

    #[test]
    fn implicit_nodes() {
        let text = format!("{HEAD}graph g {{ F(p, q); T(p); }} init g;");
        let spec = parse_spec(&text).unwrap();
        let g = spec.graph("g").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 2));
        assert_eq!(spec.inits, vec!["g".to_string()]);
    }

    #[test]
    fn forall_dropping_shared_node() {
        let text = format!(
            "{HEAD}rule r {{ left {{ e: E(p); }} right {{ T(p); }} map {{ p -> p; }}
             forall u {{ left {{ OF(q, p); }} right {{ F(q, x); }} map {{ q -> q; }} }} }}"
        );
        let e = parse_spec(&text).unwrap_err();
        assert!(e.message.contains("q∘p undefined"), "{e}");
        assert_eq!(e.pos.line, 3);
    }

    #[test]
    fn unknown_reference() {
        let text = format!("{HEAD}init nowhere;");
        assert!(parse_spec(&text)
            .unwrap_err()
            .message
            .contains("unknown graph"));
    }

    #[test]
    fn syntax_error() {
        let text = format!("{HEAD}graph g {{ T(p) }}");
        let e = parse_spec(&text).unwrap_err();
        assert!(e.message.contains("expected `;`"), "{e}");
    }
}
