//! Top-k frequent pattern mining in a single labeled graph.
//!
//! Subgraphs grow one edge at a time along the rightmost path of their DFS code,
//! and a child is built only when its code is the minimum code of its pattern, so
//! each pattern is reached from exactly one parent pattern. Subgraphs are grouped
//! by pattern and a group's frequency is its minimum image-based support.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::codec::{Codec, CodecError, Reader};
use crate::engine::{AggregateComputation, Group, Priority, Subgraph, SubgraphGroup};
use crate::graph::{EdgeRef, Graph, VertexId};

mod dfs_code;

pub use dfs_code::{code_of_child, graph_of, is_minimal, min_dfs_code, DfsCode, DfsTuple};

#[derive(Debug, Error)]
pub enum MiningError {
    #[error("pattern graph is disconnected")]
    Disconnected,
    #[error("invalid code extension {0}")]
    InvalidExtension(String),
    #[error("pattern size must be at least one edge")]
    ZeroEdges,
}

/// The construction code of a subgraph; vertex `t` of the code is `vertices()[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiningState {
    pub code: Arc<DfsCode>,
}

impl Codec for MiningState {
    fn encode(&self, out: &mut Vec<u8>) {
        self.code.encode(out);
    }

    fn decode(input: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(MiningState {
            code: Arc::new(DfsCode::decode(input)?),
        })
    }
}

pub type PatternSubgraph = Subgraph<MiningState>;

/// Distinct data vertices seen at each pattern vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Images(pub Vec<BTreeSet<VertexId>>);

impl Images {
    pub fn mni(&self) -> usize {
        self.0.iter().map(BTreeSet::len).min().unwrap_or(0)
    }
}

impl Codec for Images {
    fn encode(&self, out: &mut Vec<u8>) {
        self.0.encode(out);
    }

    fn decode(input: &mut Reader<'_>) -> Result<Self, CodecError> {
        Ok(Images(Vec::decode(input)?))
    }
}

pub type PatternGroup = SubgraphGroup<DfsCode, MiningState, Images>;

pub fn mni_support(group: &PatternGroup) -> usize {
    group.aggregate().mni()
}

pub fn mining_priority(group: &PatternGroup) -> Priority {
    Priority::from([group.key().edge_count() as f64, mni_support(group) as f64])
}

/// Frequency can only drop as a pattern grows.
pub fn mining_dominated(group: &PatternGroup, other: &PatternGroup) -> bool {
    mni_support(group) < mni_support(other)
}

/// One rightmost-path extension realized by a data edge.
#[derive(Clone, Debug)]
pub struct PatternStep {
    pub edge: EdgeRef,
    pub tuple: DfsTuple,
    /// Data vertex at the tuple's `j` end.
    pub target: VertexId,
    code: Arc<DfsCode>,
}

impl PatternStep {
    pub fn code(&self) -> &DfsCode {
        &self.code
    }
}

/// Mines the top-k patterns with exactly `max_edges` edges.
pub struct PatternMining {
    max_edges: usize,
    minimal: Mutex<HashMap<DfsCode, bool>>,
}

impl PatternMining {
    pub fn new(max_edges: usize) -> Result<Self, MiningError> {
        if max_edges == 0 {
            return Err(MiningError::ZeroEdges);
        }
        Ok(PatternMining {
            max_edges,
            minimal: Mutex::new(HashMap::new()),
        })
    }

    pub fn max_edges(&self) -> usize {
        self.max_edges
    }

    fn is_minimal(&self, code: &DfsCode) -> bool {
        let mut memo = self.minimal.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&known) = memo.get(code) {
            return known;
        }
        let known = is_minimal(code);
        memo.insert(code.clone(), known);
        known
    }

    /// All extensions of `s` whose child code is minimal.
    pub fn pattern_expansions(&self, graph: &Graph, s: &PatternSubgraph) -> Vec<PatternStep> {
        let code = &s.state.code;
        if code.edge_count() >= self.max_edges {
            return Vec::new();
        }
        let order = s.vertices();
        let path = code.rightmost_path();
        let (&r, ancestors) = path.split_last().expect("nonempty code");
        let gr = order[r as usize];
        let mut raw = Vec::new();
        for &x in ancestors {
            let gx = order[x as usize];
            let e = EdgeRef::new(gr, gx);
            if graph.has_edge(gr, gx) && !s.contains_edge(e) {
                let t = DfsTuple::new(r, x, graph.vertex_label(gr), graph.edge_label(gr, gx), graph.vertex_label(gx));
                raw.push((gr, gx, t));
            }
        }
        let next = order.len() as u32;
        for &x in &path {
            let gx = order[x as usize];
            for &y in graph.neighbors(gx) {
                if !s.contains_vertex(y) {
                    let t = DfsTuple::new(x, next, graph.vertex_label(gx), graph.edge_label(gx, y), graph.vertex_label(y));
                    raw.push((gx, y, t));
                }
            }
        }

        let mut codes: HashMap<DfsTuple, Option<Arc<DfsCode>>> = HashMap::new();
        raw.into_iter()
            .filter_map(|(source, target, tuple)| {
                let child = codes
                    .entry(tuple)
                    .or_insert_with(|| {
                        let child = code_of_child(code, tuple).expect("rightmost-path extension");
                        self.is_minimal(&child).then(|| Arc::new(child))
                    })
                    .clone()?;
                Some(PatternStep {
                    edge: EdgeRef::new(source, target),
                    tuple,
                    target,
                    code: child,
                })
            })
            .collect()
    }
}

impl AggregateComputation for PatternMining {
    type State = MiningState;
    type Delta = PatternStep;
    type Key = DfsCode;
    type Aggregate = Images;

    /// One subgraph per edge in its minimal orientation; both orientations when
    /// the two readings of the edge are equal.
    fn units(&self, graph: &Graph) -> Vec<PatternSubgraph> {
        let mut codes: HashMap<DfsTuple, Arc<DfsCode>> = HashMap::new();
        let mut out = Vec::new();
        for e in graph.edges() {
            let le = graph.edge_label(e.u, e.v);
            let (lu, lv) = (graph.vertex_label(e.u), graph.vertex_label(e.v));
            let mut orientations = vec![];
            if lu <= lv {
                orientations.push((e.u, e.v));
            }
            if lv <= lu {
                orientations.push((e.v, e.u));
            }
            for (a, b) in orientations {
                let t = DfsTuple::new(0, 1, graph.vertex_label(a), le, graph.vertex_label(b));
                let code = codes
                    .entry(t)
                    .or_insert_with(|| Arc::new(code_of_child(&DfsCode::new(), t).expect("first step")))
                    .clone();
                out.push(Subgraph::from_edge(a, b, MiningState { code }));
            }
        }
        out
    }

    fn expansions(&self, graph: &Graph, s: &PatternSubgraph) -> Vec<PatternStep> {
        self.pattern_expansions(graph, s)
    }

    fn expandable(&self, _graph: &Graph, s: &PatternSubgraph, _step: &PatternStep) -> bool {
        s.edge_count() < self.max_edges
    }

    fn expand(&self, _graph: &Graph, s: &PatternSubgraph, step: &PatternStep) -> PatternSubgraph {
        s.with_edge(
            step.edge,
            MiningState {
                code: step.code.clone(),
            },
        )
    }

    fn key(&self, _graph: &Graph, s: &PatternSubgraph) -> DfsCode {
        (*s.state.code).clone()
    }

    fn empty_aggregate(&self, key: &DfsCode) -> Images {
        Images(vec![BTreeSet::new(); key.vertex_count()])
    }

    fn absorb(&self, images: &mut Images, s: &PatternSubgraph) {
        for (slot, &v) in images.0.iter_mut().zip(s.vertices()) {
            slot.insert(v);
        }
    }

    fn relevant(&self, group: &Group<Self>) -> bool {
        group.key().edge_count() == self.max_edges
    }

    fn priority(&self, group: &Group<Self>) -> Priority {
        mining_priority(group)
    }

    fn dominated(&self, group: &Group<Self>, other: &Group<Self>) -> bool {
        mining_dominated(group, other)
    }
}
