//! Consensus analytics for signed graphs.
//!
//! Every spanning tree of a signed graph balances it into one nearest
//! balanced state (a Harary bipartition). The set of states reachable this
//! way is the frustration cloud. Sampling trees and tallying which vertices
//! land on the majority side yields per-vertex status, per-edge agreement,
//! per-vertex influence and whole-graph controversy.
//!
//! ```
//! use frustra::{fixtures, sample_tree, balance_with_tree, ConsensusAccumulator, SamplerKind};
//!
//! let g = fixtures::worked_example();
//! let mut acc = ConsensusAccumulator::new(&g);
//! for i in 0..100 {
//!     let t = sample_tree(&g, SamplerKind::RandomMst, 7, i).unwrap();
//!     acc.accumulate(&g, &balance_with_tree(&g, &t).unwrap()).unwrap();
//! }
//! let c = acc.controversy().unwrap().to_f64();
//! assert!((0.5..=1.0).contains(&c));
//! ```

#![allow(clippy::needless_range_loop)]

pub mod balance;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod kirchhoff;
pub mod metrics;
pub mod oracle;
pub mod pipeline;
pub mod sampler;
pub mod scalar;
mod unionfind;

pub use balance::{
    balance_with_tree, fundamental_cycle_sign, is_balanced_signing, verify_balanced, BalancedState,
    SideVector,
};
pub use error::{Error, Result};
pub use graph::{
    build_graph, connected_components, cyclomatic_number, label_cmp, EdgeId, IngestStats, Ingested,
    LabelMap, RawSentiment, Sign, SignedEdge, SignedGraph, SymmetrizationPolicy, VertexId,
};
pub use io::{parse_edge_list, read_edge_list};
pub use kirchhoff::{bareiss_determinant, count_spanning_trees};
pub use metrics::{ConsensusAccumulator, Fraction, MetricsReport, Provenance, TieAgreement};
pub use oracle::{
    enumerate_balanced_states, enumerate_spanning_trees, exact_metrics, frustration_cloud_exact,
    frustration_index, CloudState, FrustrationCloud, SigningLattice,
};
pub use pipeline::{
    run_oracle, run_pipeline, sample_accumulator, summarize, ComponentPolicy, OracleConfig,
    RunConfig, Summary,
};
pub use sampler::{sample_tree, tree_rng, SamplerKind, SpanningTree, TreeSampler};
pub use scalar::Scalar;

/// Exact rational used for golden values and CSV output.
pub type Rational = num_rational::BigRational;

pub type ExactReport = MetricsReport<Rational>;
pub type FloatReport = MetricsReport<f64>;
pub type Float32Report = MetricsReport<f32>;
