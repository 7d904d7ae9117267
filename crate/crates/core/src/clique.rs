//! Maximum clique search with CP-style candidate sets.

use crate::codec::{Codec, CodecError, Reader};
use crate::engine::{edges_into, vertex_oriented_expansions, Computation, Priority, Subgraph};
use crate::graph::{Graph, VertexId};

/// Vertices that can still be added while keeping a clique (`P_s`), ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueState {
    pub candidates: Vec<VertexId>,
}

impl Codec for CliqueState {
    fn encode(&self, out: &mut Vec<u8>) {
        self.candidates.encode(out);
    }

    fn decode(input: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(CliqueState {
            candidates: Vec::decode(input)?,
        })
    }
}

pub type CliqueSubgraph = Subgraph<CliqueState>;

/// Recomputes `P_s` from scratch: neighbors of the first vertex above `max(V_s)`,
/// narrowed to the common neighbors of every other vertex.
pub fn clique_candidates<S>(graph: &Graph, s: &Subgraph<S>) -> Vec<VertexId> {
    let Some(max) = s.max_vertex() else {
        return Vec::new();
    };
    let (first, rest) = s.vertices().split_first().expect("nonempty subgraph");
    let mut p: Vec<VertexId> = graph
        .neighbors(*first)
        .iter()
        .copied()
        .filter(|&x| x > max)
        .collect();
    for &v in rest {
        p.retain(|&x| x != v && graph.has_edge(v, x));
    }
    p
}

pub fn clique_priority(s: &CliqueSubgraph) -> Priority {
    Priority::from([s.vertex_count() as f64, s.state.candidates.len() as f64])
}

/// `s` cannot grow past `|V_s| + |P_s|` vertices.
pub fn clique_dominated(s: &CliqueSubgraph, other: &CliqueSubgraph) -> bool {
    s.vertex_count() + s.state.candidates.len() < other.vertex_count()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MaxClique;

impl Computation for MaxClique {
    type State = CliqueState;
    type Delta = VertexId;

    fn units(&self, graph: &Graph) -> Vec<CliqueSubgraph> {
        graph
            .vertices()
            .map(|v| {
                let candidates = graph.neighbors(v).iter().copied().filter(|&x| x > v).collect();
                Subgraph::from_vertex(v, CliqueState { candidates })
            })
            .collect()
    }

    fn expansions(&self, graph: &Graph, s: &CliqueSubgraph) -> Vec<VertexId> {
        vertex_oriented_expansions(graph, s)
    }

    fn expandable(&self, _graph: &Graph, s: &CliqueSubgraph, delta: &VertexId) -> bool {
        s.state.candidates.binary_search(delta).is_ok()
    }

    fn expand(&self, graph: &Graph, s: &CliqueSubgraph, &v: &VertexId) -> CliqueSubgraph {
        let candidates = s
            .state
            .candidates
            .iter()
            .copied()
            .filter(|&x| x > v && graph.has_edge(v, x))
            .collect();
        s.with_vertex(v, edges_into(graph, s, v), CliqueState { candidates })
    }

    fn priority(&self, _graph: &Graph, s: &CliqueSubgraph) -> Priority {
        clique_priority(s)
    }

    fn dominated(&self, s: &CliqueSubgraph, other: &CliqueSubgraph) -> bool {
        clique_dominated(s, other)
    }
}
