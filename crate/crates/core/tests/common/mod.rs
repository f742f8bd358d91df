#![allow(dead_code)]

use std::path::PathBuf;

use frustra::{
    balance_with_tree, build_graph, connected_components, enumerate_spanning_trees, read_edge_list,
    BalancedState, ConsensusAccumulator, SignedGraph, SymmetrizationPolicy, TieAgreement, VertexId,
};

/// Balances `g` along every spanning tree with the sampling engine.
pub fn exhaustive_states(g: &SignedGraph) -> Vec<BalancedState> {
    enumerate_spanning_trees(g, 1_000_000)
        .unwrap()
        .iter()
        .map(|t| balance_with_tree(g, t).unwrap())
        .collect()
}

pub fn accumulate(
    g: &SignedGraph,
    states: &[BalancedState],
    tie_break: Option<VertexId>,
    rule: TieAgreement,
) -> ConsensusAccumulator {
    let mut acc = ConsensusAccumulator::new(g).with_tie_agreement(rule);
    if let Some(t) = tie_break {
        acc = acc.with_tie_break(t).unwrap();
    }
    for s in states {
        acc.accumulate(g, s).unwrap();
    }
    acc
}

/// Location of the Highland Tribes edge list: `$FRUSTRA_HIGHLAND`, or
/// `tests/data/highland_tribes.txt` when present.
pub fn highland_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("FRUSTRA_HIGHLAND") {
        return Some(PathBuf::from(p));
    }
    let bundled = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/highland_tribes.txt");
    bundled.exists().then_some(bundled)
}

pub fn load_largest(path: &std::path::Path) -> SignedGraph {
    let raw = read_edge_list(path).unwrap();
    let g = build_graph(&raw, SymmetrizationPolicy::SumThenSign)
        .unwrap()
        .graph;
    connected_components(&g).into_iter().next().unwrap()
}
