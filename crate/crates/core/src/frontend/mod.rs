//! Specification files, printing, DOT export and reports.

mod dot;
pub mod fixtures;
mod parser;
mod printer;
mod report;

pub use dot::render_dot;
pub use parser::{parse_spec, ParseError, Pos};
pub use printer::{print_graph, print_graph_body, print_spec};
pub use report::{canonical_basis, canonical_graphs, Report, Stats};

use std::time::Instant;

use crate::backward::{backward_search, verdict, SearchConfig, SearchError, SearchState};
use crate::graph::{Hypergraph, Signature};
use crate::rules::{PreparedRule, UqRule};

/// A parsed specification: signature, named graphs, rules, and the names
/// of the initial and error graphs.
#[derive(Clone, Debug, Default)]
pub struct SpecFile {
    pub signature: Signature,
    pub graphs: Vec<(String, Hypergraph)>,
    pub rules: Vec<UqRule>,
    pub inits: Vec<String>,
    pub errors: Vec<String>,
}

impl SpecFile {
    pub fn graph(&self, name: &str) -> Option<&Hypergraph> {
        self.graphs.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn rule(&self, name: &str) -> Option<&UqRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn error_graphs(&self) -> Vec<Hypergraph> {
        self.errors
            .iter()
            .map(|n| self.graph(n).expect("names resolved by the parser").clone())
            .collect()
    }

    pub fn init_graphs(&self) -> Vec<(String, Hypergraph)> {
        self.inits
            .iter()
            .map(|n| {
                (
                    n.clone(),
                    self.graph(n).expect("names resolved by the parser").clone(),
                )
            })
            .collect()
    }
}

/// Runs the backward search from the error graphs and judges every init.
pub fn check(spec: &SpecFile, cfg: &SearchConfig) -> Result<(SearchState, Report), SearchError> {
    let rules: Vec<PreparedRule> = spec.rules.iter().cloned().map(PreparedRule::new).collect();
    let start = Instant::now();
    let state = backward_search(&rules, &spec.error_graphs(), cfg)?;
    let wall_ms = start.elapsed().as_millis() as u64;
    let verdicts = spec
        .init_graphs()
        .into_iter()
        .map(|(name, g)| (name, verdict(&g, &state).as_str().to_string()))
        .collect();
    let report = Report {
        stationary: state.stationary,
        basis: canonical_basis(state.working.graphs(), &spec.signature),
        verdicts,
        stats: Stats {
            iterations: state.iteration,
            backward_steps: state.backward_steps,
            wall_ms,
        },
    };
    Ok((state, report))
}
