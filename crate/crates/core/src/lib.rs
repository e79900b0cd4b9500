//! Coverability checking for graph transformation systems whose rules may
//! carry universal quantifications over node neighbourhoods.

pub mod backward;
pub mod frontend;
pub mod graph;
pub mod morphism;
pub mod oracle;
pub mod order;
pub mod pushout;
pub mod rules;
