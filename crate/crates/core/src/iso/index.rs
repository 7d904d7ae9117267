use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, Label, VertexId};

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("hop limit must be at least 1")]
    ZeroHops,
    #[error("index line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot access index file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Per vertex: the largest degree among vertices of each label at each exact
/// shortest-path distance `1..=D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexIndex {
    hops: u32,
    table: Vec<BTreeMap<(u32, Label), u32>>,
}

impl VertexIndex {
    pub fn hops(&self) -> u32 {
        self.hops
    }

    /// Number of vertex slots; vertices past the end have no entries.
    pub fn vertex_count(&self) -> usize {
        self.table.len()
    }

    pub fn get(&self, v: VertexId, hop: u32, label: Label) -> Option<u32> {
        self.table.get(v as usize)?.get(&(hop, label)).copied()
    }

    /// Largest degree of a `label` vertex at any distance in `1..=hop`.
    pub fn best_within(&self, v: VertexId, hop: u32, label: Label) -> Option<u32> {
        (1..=hop.min(self.hops))
            .filter_map(|d| self.get(v, d, label))
            .max()
    }

    pub fn entry_count(&self) -> usize {
        self.table.iter().map(BTreeMap::len).sum()
    }

    /// Text form: a `D <hops>` header, then `<vertex> <hop> <label> <maxdeg>` lines
    /// sorted by vertex, hop and label.
    pub fn to_text(&self) -> String {
        let mut out = format!("D {}\n", self.hops);
        for (v, row) in self.table.iter().enumerate() {
            for (&(hop, label), &deg) in row {
                let _ = writeln!(out, "{v} {hop} {label} {deg}");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, IndexError> {
        let err = |line: usize, message: &str| IndexError::Parse {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let hops = header
            .strip_prefix("D ")
            .and_then(|h| h.trim().parse::<u32>().ok())
            .ok_or_else(|| err(1, "expected `D <hops>`"))?;
        if hops == 0 {
            return Err(IndexError::ZeroHops);
        }
        let mut table: Vec<BTreeMap<(u32, Label), u32>> = Vec::new();
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<u32> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err(n, "expected four unsigned integers"))?;
            let [v, hop, label, deg] = fields[..] else {
                return Err(err(n, "expected four unsigned integers"));
            };
            if hop == 0 || hop > hops {
                return Err(err(n, "hop outside 1..=D"));
            }
            if table.len() <= v as usize {
                table.resize_with(v as usize + 1, BTreeMap::new);
            }
            if table[v as usize].insert((hop, label), deg).is_some() {
                return Err(err(n, "duplicate entry"));
            }
        }
        Ok(VertexIndex { hops, table })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IndexError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| IndexError::Io {
            path: path.display().to_string(),
            source,
        })?;
        VertexIndex::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IndexError> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|source| IndexError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Builds the index with one breadth-first search per vertex, in parallel.
pub fn build_index(graph: &Graph, hops: u32) -> Result<VertexIndex, IndexError> {
    if hops == 0 {
        return Err(IndexError::ZeroHops);
    }
    let table = (0..graph.vertex_count() as VertexId)
        .into_par_iter()
        .map(|v| shells(graph, v, hops))
        .collect();
    Ok(VertexIndex { hops, table })
}

fn shells(graph: &Graph, source: VertexId, hops: u32) -> BTreeMap<(u32, Label), u32> {
    let mut row = BTreeMap::new();
    let mut dist = vec![u32::MAX; graph.vertex_count()];
    let mut frontier = VecDeque::from([source]);
    dist[source as usize] = 0;
    while let Some(x) = frontier.pop_front() {
        let d = dist[x as usize];
        if d > 0 {
            let deg = graph.neighbors(x).len() as u32;
            let slot = row.entry((d, graph.vertex_label(x))).or_insert(0);
            *slot = (*slot).max(deg);
        }
        if d == hops {
            continue;
        }
        for &y in graph.neighbors(x) {
            if dist[y as usize] == u32::MAX {
                dist[y as usize] = d + 1;
                frontier.push_back(y);
            }
        }
    }
    row
}
