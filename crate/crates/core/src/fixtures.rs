//! Small reference graphs and random graph generators used by tests,
//! benchmarks, and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{LabelMap, Sign, SignedEdge, SignedGraph, VertexId};

/// Vertex ids of [`worked_example`].
pub const TOP_LEFT: VertexId = 0;
pub const TOP_RIGHT: VertexId = 1;
pub const BOTTOM_LEFT: VertexId = 2;
pub const BOTTOM_RIGHT: VertexId = 3;

/// Four vertices on a square with the top-left/bottom-right diagonal.
/// The diagonal and the right side are negative, the rest positive.
///
/// The underlying graph has 8 spanning trees and cyclomatic number 2; the
/// signing has frustration index 1.
pub fn worked_example() -> SignedGraph {
    use Sign::{Negative as N, Positive as P};
    let labels = LabelMap::from_labels(
        ["TL", "TR", "BL", "BR"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    )
    .expect("distinct labels");
    SignedGraph::new(
        labels,
        [
            SignedEdge::new(TOP_LEFT, TOP_RIGHT, P),
            SignedEdge::new(TOP_LEFT, BOTTOM_LEFT, P),
            SignedEdge::new(TOP_LEFT, BOTTOM_RIGHT, N),
            SignedEdge::new(TOP_RIGHT, BOTTOM_RIGHT, N),
            SignedEdge::new(BOTTOM_LEFT, BOTTOM_RIGHT, P),
        ],
    )
    .expect("valid graph")
}

/// The worked example as edge-list text.
pub fn worked_example_text() -> String {
    worked_example().export_edge_list()
}

/// Triangle on `0, 1, 2` with the given signs on `01`, `12`, `02`.
pub fn triangle(signs: [Sign; 3]) -> SignedGraph {
    SignedGraph::from_edges(3, &[(0, 1, signs[0]), (1, 2, signs[1]), (0, 2, signs[2])])
        .expect("valid graph")
}

pub fn complete_graph(n: usize, sign: impl Fn(VertexId, VertexId) -> Sign) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, sign(u, v)));
        }
    }
    SignedGraph::from_edges(n, &edges).expect("valid graph")
}

/// Connected random signed graph: a random spanning tree plus each other
/// pair with probability `density`, signs negative with probability
/// `negative`.
pub fn random_connected_graph(n: usize, density: f64, negative: f64, seed: u64) -> SignedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = vec![vec![false; n]; n];
    for i in 1..n {
        let a = order[i];
        let b = order[rng.random_range(0..i)];
        present[a][b] = true;
        present[b][a] = true;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if present[u][v] || rng.random_bool(density) {
                let sign = if rng.random_bool(negative) {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
                edges.push((u, v, sign));
            }
        }
    }
    SignedGraph::from_edges(n, &edges).expect("valid graph")
}

/// `count` connected graphs with 2 to `max_vertices` vertices.
pub fn random_small_graphs(count: usize, max_vertices: usize, seed: u64) -> Vec<SignedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_vertices);
            let density = rng.random_range(0.1..0.9);
            let negative = rng.random_range(0.0..0.7);
            random_connected_graph(n, density, negative, rng.random())
        })
        .collect()
}
