//! Immutable undirected labeled graphs, plus the edge-list and LG text formats.
//!
//! Vertex ids are dense and 0-based. Loaders remap whatever ids the file uses and
//! keep the original ids around so results can be reported in the input's id space.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

pub type VertexId = u32;
pub type Label = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: u64 },
    #[error("line {line}: expected vertex id {expected}, found {found}")]
    NonConsecutiveId {
        line: usize,
        expected: usize,
        found: u64,
    },
    #[error("line {line}: vertex {vertex} has no label")]
    MissingLabel { line: usize, vertex: u64 },
    #[error("line {line}: edge endpoint {vertex} is not a declared vertex")]
    DanglingEdge { line: usize, vertex: u64 },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(u64),
    #[error("self-loop on vertex {0}")]
    LoopEdge(VertexId),
    #[error("{labels} labels given for {vertices} vertices")]
    LabelCount { labels: usize, vertices: usize },
    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(VertexId, VertexId),
}

/// An undirected edge, normalized so that `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    pub u: VertexId,
    pub v: VertexId,
}

impl EdgeRef {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        debug_assert_ne!(a, b, "self-loop edge");
        if a < b {
            EdgeRef { u: a, v: b }
        } else {
            EdgeRef { u: b, v: a }
        }
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    vertex_labels: Option<Vec<Label>>,
    edge_labels: Option<BTreeMap<EdgeRef, Label>>,
    // `None` means the identity mapping.
    external_ids: Option<Vec<u64>>,
    edge_count: usize,
}

impl Graph {
    /// Builds an unlabeled graph. Duplicate edges are merged; self-loops are rejected.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (a, b) in edges {
            for x in [a, b] {
                if x as usize >= vertex_count {
                    return Err(GraphError::VertexOutOfRange(x as u64));
                }
            }
            if a == b {
                return Err(GraphError::LoopEdge(a));
            }
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adjacency,
            vertex_labels: None,
            edge_labels: None,
            external_ids: None,
            edge_count: edge_count / 2,
        })
    }

    /// Builds a vertex-labeled graph with one label per vertex.
    pub fn labeled(labels: Vec<Label>, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        Graph::from_edges(labels.len(), edges.iter().copied())?.with_vertex_labels(labels)
    }

    pub fn with_vertex_labels(mut self, labels: Vec<Label>) -> Result<Self, GraphError> {
        if labels.len() != self.vertex_count() {
            return Err(GraphError::LabelCount {
                labels: labels.len(),
                vertices: self.vertex_count(),
            });
        }
        self.vertex_labels = Some(labels);
        Ok(self)
    }

    /// Attaches edge labels. Edges not mentioned get label 0.
    pub fn with_edge_labels<I>(mut self, labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Label)>,
    {
        let mut map: BTreeMap<EdgeRef, Label> = self.edges().map(|e| (e, 0)).collect();
        for (a, b, l) in labels {
            if a == b || !self.has_edge(a, b) {
                return Err(GraphError::MissingEdge(a, b));
            }
            map.insert(EdgeRef::new(a, b), l);
        }
        self.edge_labels = Some(map);
        Ok(self)
    }

    fn with_external_ids(mut self, ids: Vec<u64>) -> Self {
        let identity = ids.iter().enumerate().all(|(i, &id)| i as u64 == id);
        self.external_ids = if identity { None } else { Some(ids) };
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.adjacency.len() as VertexId
    }

    /// Neighbors of `v` in ascending order. Panics if `v` is out of range.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.adjacency
            .get(v as usize)
            .map(Vec::len)
            .ok_or(GraphError::VertexOutOfRange(v as u64))
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency
            .get(a as usize)
            .is_some_and(|list| list.binary_search(&b).is_ok())
    }

    /// All edges, ascending by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as VertexId;
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| EdgeRef { u, v })
        })
    }

    pub fn has_vertex_labels(&self) -> bool {
        self.vertex_labels.is_some()
    }

    pub fn has_edge_labels(&self) -> bool {
        self.edge_labels.is_some()
    }

    /// Label of `v`; unlabeled graphs report the single synthetic label 0.
    pub fn vertex_label(&self, v: VertexId) -> Label {
        self.vertex_labels.as_ref().map_or(0, |labels| labels[v as usize])
    }

    pub fn edge_label(&self, a: VertexId, b: VertexId) -> Label {
        self.edge_labels
            .as_ref()
            .and_then(|map| map.get(&EdgeRef::new(a, b)).copied())
            .unwrap_or(0)
    }

    /// The id this vertex had in the file it was loaded from.
    pub fn external_id(&self, v: VertexId) -> u64 {
        self.external_ids
            .as_ref()
            .map_or(v as u64, |ids| ids[v as usize])
    }

    /// Breadth-first distances from `source`, `None` for unreachable vertices.
    pub fn distances_from(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut frontier = std::collections::VecDeque::new();
        dist[source as usize] = Some(0);
        frontier.push_back(source);
        while let Some(x) = frontier.pop_front() {
            let d = dist[x as usize].unwrap_or(0);
            for &y in self.neighbors(x) {
                if dist[y as usize].is_none() {
                    dist[y as usize] = Some(d + 1);
                    frontier.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Serializes to LG text. Edge labels are written only when the graph has them.
    pub fn to_lg(&self) -> String {
        let mut out = String::from("t # 0\n");
        for v in self.vertices() {
            let _ = writeln!(out, "v {} {}", v, self.vertex_label(v));
        }
        for e in self.edges() {
            if self.has_edge_labels() {
                let _ = writeln!(out, "e {} {} {}", e.u, e.v, self.edge_label(e.u, e.v));
            } else {
                let _ = writeln!(out, "e {} {}", e.u, e.v);
            }
        }
        out
    }
}

fn read_file(path: &Path) -> Result<String, GraphError> {
    fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_id(token: &str, line: usize) -> Result<u64, GraphError> {
    token.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("`{token}` is not a non-negative integer"),
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    parse_edge_list(&read_file(path.as_ref())?)
}

/// Parses one edge per line. `#` and `%` lines are comments; tokens after the
/// first two are ignored. External ids are remapped to dense ids in ascending order.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(GraphError::Parse {
                line: lineno,
                message: "expected two vertex ids".into(),
            });
        };
        let (a, b) = (parse_id(a, lineno)?, parse_id(b, lineno)?);
        if a == b {
            return Err(GraphError::SelfLoop {
                line: lineno,
                vertex: a,
            });
        }
        raw.push((a, b));
    }
    let mut ids: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |x: u64| ids.binary_search(&x).unwrap_or(0) as VertexId;
    let edges: Vec<_> = raw.iter().map(|&(a, b)| (dense(a), dense(b))).collect();
    Ok(Graph::from_edges(ids.len(), edges)?.with_external_ids(ids))
}

pub fn load_lg(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    parse_lg(&read_file(path.as_ref())?)
}

/// Parses the LG format: an optional `t # <gid>` header, `v <id> <label>` lines with
/// consecutive ids from 0, and `e <u> <v> [<label>]` lines.
pub fn parse_lg(text: &str) -> Result<Graph, GraphError> {
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut labeled_edges = false;
    let mut seen_body = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let Some(kind) = tokens.next() else { continue };
        match kind {
            "t" if !seen_body => {}
            "t" => {
                return Err(GraphError::Parse {
                    line: lineno,
                    message: "only one graph per file is supported".into(),
                })
            }
            "v" => {
                seen_body = true;
                let id = tokens.next().ok_or_else(|| GraphError::Parse {
                    line: lineno,
                    message: "vertex line without an id".into(),
                })?;
                let id = parse_id(id, lineno)?;
                if id != labels.len() as u64 {
                    return Err(GraphError::NonConsecutiveId {
                        line: lineno,
                        expected: labels.len(),
                        found: id,
                    });
                }
                let label = tokens.next().ok_or(GraphError::MissingLabel {
                    line: lineno,
                    vertex: id,
                })?;
                let label = parse_id(label, lineno)?;
                labels.push(Label::try_from(label).map_err(|_| GraphError::Parse {
                    line: lineno,
                    message: format!("label {label} does not fit in 32 bits"),
                })?);
            }
            "e" => {
                seen_body = true;
                let mut next_id = || -> Result<u64, GraphError> {
                    let token = tokens.next().ok_or_else(|| GraphError::Parse {
                        line: lineno,
                        message: "edge line needs two endpoints".into(),
                    })?;
                    parse_id(token, lineno)
                };
                let (a, b) = (next_id()?, next_id()?);
                let label = match tokens.next() {
                    Some(token) => {
                        labeled_edges = true;
                        parse_id(token, lineno)? as Label
                    }
                    None => 0,
                };
                if a == b {
                    return Err(GraphError::SelfLoop {
                        line: lineno,
                        vertex: a,
                    });
                }
                edges.push((lineno, a, b, label));
            }
            other => {
                return Err(GraphError::Parse {
                    line: lineno,
                    message: format!("unknown record type `{other}`"),
                })
            }
        }
    }
    let n = labels.len() as u64;
    for &(line, a, b, _) in &edges {
        if let Some(vertex) = [a, b].into_iter().find(|&x| x >= n) {
            return Err(GraphError::DanglingEdge { line, vertex });
        }
    }
    let graph = Graph::from_edges(
        labels.len(),
        edges.iter().map(|&(_, a, b, _)| (a as VertexId, b as VertexId)),
    )?
    .with_vertex_labels(labels)?;
    if labeled_edges {
        graph.with_edge_labels(
            edges
                .iter()
                .map(|&(_, a, b, l)| (a as VertexId, b as VertexId, l)),
        )
    } else {
        Ok(graph)
    }
}
