//! Prioritized subgraph exploration for top-k subgraph queries.
//!
//! A computation describes how subgraphs grow from single vertices or edges and
//! how promising each one is. The engine expands the most promising subgraph
//! first, keeps the best `k` results, and discards subgraphs that provably cannot
//! beat the current k-th result. Three computations ship with the crate: maximum
//! clique search ([`clique`]), frequent pattern mining ([`mining`]) and top-k
//! subgraph isomorphism ([`iso`]).

pub mod cli;
pub mod clique;
pub mod codec;
pub mod engine;
pub mod generate;
pub mod graph;
pub mod iso;
pub mod mining;
pub mod oracle;
pub mod queue;

pub use engine::{
    run_aggregate, run_basic, AggregateComputation, Computation, EngineError, ExplorationStats,
    Priority, ResultSet, RunConfig, Subgraph, SubgraphGroup,
};
pub use graph::{EdgeRef, Graph, GraphError, Label, VertexId};
pub use queue::{QueueError, QueueKind, SubgraphQueue, VirtualPriorityQueue, VpqConfig};
