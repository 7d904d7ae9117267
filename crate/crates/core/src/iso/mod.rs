//! Top-k subgraph isomorphism: find the subgraphs matching a query graph with
//! the largest degree sums.
//!
//! Subgraphs grow edge by edge from single seed vertices and carry every partial
//! query mapping still consistent with them, so only subgraphs that can become a
//! match are built. A per-vertex index bounds the degrees the unmatched query
//! vertices can still contribute, which drives both priority and pruning.

use thiserror::Error;

use crate::codec::{put_u64, Codec, CodecError, Reader};
use crate::engine::{edge_oriented_expansions, Computation, Priority, Subgraph};
use crate::graph::{EdgeRef, Graph, VertexId};

mod index;

pub use index::{build_index, IndexError, VertexIndex};

pub const UNMATCHED: VertexId = VertexId::MAX;

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("query graph has no vertices")]
    EmptyQuery,
    #[error("query graph is disconnected")]
    DisconnectedQuery,
    #[error("index covers {have} hops but the query needs {needed}")]
    HopsTooSmall { needed: u32, have: u32 },
    #[error("index has entries for vertex {0}, which the data graph lacks")]
    IndexMismatch(u32),
}

/// Partial matches carried by an isomorphism-search subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchState {
    /// The unit vertex this subgraph grew from.
    pub seed: VertexId,
    /// Each mapping sends query vertex `q` to `mapping[q]`, or [`UNMATCHED`].
    pub mappings: Vec<Vec<VertexId>>,
    /// Sum of data-graph degrees over the subgraph's vertices.
    pub score: u64,
    /// Most the unmatched query vertices can still add to `score`.
    pub bound: u64,
}

impl MatchState {
    pub fn has_total_mapping(&self) -> bool {
        self.mappings
            .iter()
            .any(|m| m.iter().all(|&v| v != UNMATCHED))
    }
}

impl Codec for MatchState {
    fn encode(&self, out: &mut Vec<u8>) {
        self.seed.encode(out);
        self.mappings.encode(out);
        put_u64(out, self.score);
        put_u64(out, self.bound);
    }

    fn decode(input: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(MatchState {
            seed: u32::decode(input)?,
            mappings: Vec::decode(input)?,
            score: input.u64()?,
            bound: input.u64()?,
        })
    }
}

pub type MatchSubgraph = Subgraph<MatchState>;

pub struct IsoSearch {
    query: Graph,
    index: VertexIndex,
    /// Query-graph distances between every pair of query vertices.
    hop: Vec<Vec<u32>>,
}

/// Largest eccentricity of a connected query; the index depth a search needs.
pub fn required_hops(query: &Graph) -> Result<u32, IsoError> {
    if query.is_empty() {
        return Err(IsoError::EmptyQuery);
    }
    if !query.is_connected() {
        return Err(IsoError::DisconnectedQuery);
    }
    let deepest = query
        .vertices()
        .flat_map(|q| query.distances_from(q))
        .map(|d| d.unwrap_or(0) as u32)
        .max()
        .unwrap_or(0);
    Ok(deepest.max(1))
}

impl IsoSearch {
    pub fn new(graph: &Graph, query: Graph, index: VertexIndex) -> Result<Self, IsoError> {
        let needed = required_hops(&query)?;
        if index.hops() < needed {
            return Err(IsoError::HopsTooSmall {
                needed,
                have: index.hops(),
            });
        }
        if index.vertex_count() > graph.vertex_count() {
            return Err(IsoError::IndexMismatch(index.vertex_count() as u32 - 1));
        }
        let hop = query
            .vertices()
            .map(|q| {
                query
                    .distances_from(q)
                    .into_iter()
                    .map(|d| d.unwrap_or(0) as u32)
                    .collect()
            })
            .collect();
        Ok(IsoSearch { query, index, hop })
    }

    pub fn query(&self) -> &Graph {
        &self.query
    }

    pub fn index(&self) -> &VertexIndex {
        &self.index
    }

    /// Bound for one mapping, or `None` when some unmatched query vertex has no
    /// candidate within reach of the seed.
    fn mapping_bound(&self, seed: VertexId, mapping: &[VertexId]) -> Option<u64> {
        let at_seed = mapping.iter().position(|&v| v == seed)?;
        let mut total = 0u64;
        for (q, &v) in mapping.iter().enumerate() {
            if v != UNMATCHED {
                continue;
            }
            let hop = self.hop[at_seed][q];
            let label = self.query.vertex_label(q as VertexId);
            total += self.index.best_within(seed, hop, label)? as u64;
        }
        Some(total)
    }

    /// Keeps the mappings that can still complete and returns the best bound.
    fn settle(&self, seed: VertexId, mut mappings: Vec<Vec<VertexId>>) -> Option<(Vec<Vec<VertexId>>, u64)> {
        mappings.sort_unstable();
        mappings.dedup();
        let mut bound = None;
        mappings.retain(|m| match self.mapping_bound(seed, m) {
            Some(u) => {
                bound = bound.max(Some(u));
                true
            }
            None => false,
        });
        bound.map(|u| (mappings, u))
    }

    fn extend(&self, graph: &Graph, s: &MatchSubgraph, e: EdgeRef) -> Vec<Vec<VertexId>> {
        let (has_u, has_v) = (s.contains_vertex(e.u), s.contains_vertex(e.v));
        let edge_label = graph.edge_label(e.u, e.v);
        let mut out = Vec::new();
        for m in &s.state.mappings {
            let slot = |x: VertexId| m.iter().position(|&y| y == x).map(|q| q as VertexId);
            let fits = |a: VertexId, b: VertexId| {
                self.query.has_edge(a, b) && self.query.edge_label(a, b) == edge_label
            };
            if has_u && has_v {
                if let (Some(a), Some(b)) = (slot(e.u), slot(e.v)) {
                    if fits(a, b) {
                        out.push(m.clone());
                    }
                }
                continue;
            }
            let (old, new) = if has_u { (e.u, e.v) } else { (e.v, e.u) };
            let Some(a) = slot(old) else { continue };
            for &b in self.query.neighbors(a) {
                if m[b as usize] == UNMATCHED
                    && self.query.vertex_label(b) == graph.vertex_label(new)
                    && fits(a, b)
                {
                    let mut next = m.clone();
                    next[b as usize] = new;
                    out.push(next);
                }
            }
        }
        out
    }

    /// `max` over mappings of what the unmatched query vertices can still add.
    pub fn iso_upper_bound(&self, s: &MatchSubgraph) -> u64 {
        s.state.bound
    }
}

pub fn iso_priority(s: &MatchSubgraph) -> Priority {
    Priority::from([s.edge_count() as f64, (s.state.score + s.state.bound) as f64])
}

pub fn iso_dominated(s: &MatchSubgraph, other: &MatchSubgraph) -> bool {
    s.state.score + s.state.bound < other.state.score
}

impl Computation for IsoSearch {
    type State = MatchState;
    type Delta = EdgeRef;

    fn units(&self, graph: &Graph) -> Vec<MatchSubgraph> {
        let n = self.query.vertex_count();
        graph
            .vertices()
            .filter_map(|v| {
                let mappings = self
                    .query
                    .vertices()
                    .filter(|&q| self.query.vertex_label(q) == graph.vertex_label(v))
                    .map(|q| {
                        let mut m = vec![UNMATCHED; n];
                        m[q as usize] = v;
                        m
                    })
                    .collect();
                let (mappings, bound) = self.settle(v, mappings)?;
                let state = MatchState {
                    seed: v,
                    mappings,
                    score: graph.neighbors(v).len() as u64,
                    bound,
                };
                Some(Subgraph::from_vertex(v, state))
            })
            .collect()
    }

    fn expansions(&self, graph: &Graph, s: &MatchSubgraph) -> Vec<EdgeRef> {
        if s.edge_count() >= self.query.edge_count() {
            return Vec::new();
        }
        edge_oriented_expansions(graph, s)
    }

    fn expandable(&self, graph: &Graph, s: &MatchSubgraph, e: &EdgeRef) -> bool {
        let extended = self.extend(graph, s, *e);
        extended
            .iter()
            .any(|m| self.mapping_bound(s.state.seed, m).is_some())
    }

    fn expand(&self, graph: &Graph, s: &MatchSubgraph, e: &EdgeRef) -> MatchSubgraph {
        let extended = self.extend(graph, s, *e);
        let (mappings, bound) = self
            .settle(s.state.seed, extended)
            .expect("expand is only called on expandable edges");
        let added = [e.u, e.v]
            .into_iter()
            .filter(|&x| !s.contains_vertex(x))
            .map(|x| graph.neighbors(x).len() as u64)
            .sum::<u64>();
        let state = MatchState {
            seed: s.state.seed,
            mappings,
            score: s.state.score + added,
            bound,
        };
        s.with_edge(*e, state)
    }

    fn relevant(&self, _graph: &Graph, s: &MatchSubgraph) -> bool {
        s.edge_count() == self.query.edge_count() && s.state.has_total_mapping()
    }

    fn priority(&self, _graph: &Graph, s: &MatchSubgraph) -> Priority {
        iso_priority(s)
    }

    fn dominated(&self, s: &MatchSubgraph, other: &MatchSubgraph) -> bool {
        iso_dominated(s, other)
    }
}
