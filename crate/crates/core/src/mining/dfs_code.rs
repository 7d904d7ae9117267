use std::cmp::Ordering;
use std::fmt;

use crate::codec::{put_len, put_u32, Codec, CodecError, Reader};
use crate::graph::{EdgeRef, Graph, GraphError, Label, VertexId};

use super::MiningError;

/// One directed step of a DFS traversal: `(i, j, L(i), L(i,j), L(j))`.
///
/// Forward steps (`i < j`) discover vertex `j`; backward steps (`i > j`) close a
/// cycle from the rightmost vertex `i` to an ancestor `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DfsTuple {
    pub i: u32,
    pub j: u32,
    pub li: Label,
    pub le: Label,
    pub lj: Label,
}

impl DfsTuple {
    pub fn new(i: u32, j: u32, li: Label, le: Label, lj: Label) -> Self {
        DfsTuple { i, j, li, le, lj }
    }

    pub fn is_forward(&self) -> bool {
        self.i < self.j
    }

    fn labels(&self) -> (Label, Label, Label) {
        (self.li, self.le, self.lj)
    }
}

/// Backward steps sort before forward ones; backward steps by smaller target,
/// forward steps by deeper source; labels decide the rest.
impl Ord for DfsTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_forward(), other.is_forward()) {
            (false, true) => Ordering::Less,
            (true, false) => Ordering::Greater,
            (false, false) => self
                .j
                .cmp(&other.j)
                .then(self.i.cmp(&other.i))
                .then(self.labels().cmp(&other.labels())),
            (true, true) => other
                .i
                .cmp(&self.i)
                .then(self.j.cmp(&other.j))
                .then(self.labels().cmp(&other.labels())),
        }
    }
}

impl PartialOrd for DfsTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DfsTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.i, self.j, self.li, self.le, self.lj)
    }
}

/// A pattern written as a sequence of DFS steps, compared lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DfsCode {
    tuples: Vec<DfsTuple>,
}

impl DfsCode {
    pub fn new() -> Self {
        DfsCode::default()
    }

    /// Builds a code from tuples, checking each one is a legal extension.
    pub fn from_tuples(tuples: impl IntoIterator<Item = DfsTuple>) -> Result<Self, MiningError> {
        tuples
            .into_iter()
            .try_fold(DfsCode::new(), |code, t| code_of_child(&code, t))
    }

    pub fn tuples(&self) -> &[DfsTuple] {
        &self.tuples
    }

    pub fn edge_count(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.tuples
            .iter()
            .map(|t| t.i.max(t.j) as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// The first `n` tuples.
    pub fn prefix(&self, n: usize) -> DfsCode {
        DfsCode {
            tuples: self.tuples[..n.min(self.tuples.len())].to_vec(),
        }
    }

    /// Label of every code vertex.
    pub fn vertex_labels(&self) -> Vec<Label> {
        let mut labels = vec![0; self.vertex_count()];
        for t in &self.tuples {
            labels[t.i as usize] = t.li;
            labels[t.j as usize] = t.lj;
        }
        labels
    }

    /// Code vertices from the root to the most recently discovered vertex.
    pub fn rightmost_path(&self) -> Vec<u32> {
        let n = self.vertex_count();
        if n == 0 {
            return Vec::new();
        }
        let mut parent = vec![u32::MAX; n];
        for t in self.tuples.iter().filter(|t| t.is_forward()) {
            parent[t.j as usize] = t.i;
        }
        let mut path = vec![n as u32 - 1];
        while let Some(&p) = path.last().map(|&x| &parent[x as usize]) {
            if p == u32::MAX {
                break;
            }
            path.push(p);
        }
        path.reverse();
        path
    }

    fn contains_edge(&self, a: u32, b: u32) -> bool {
        self.tuples
            .iter()
            .any(|t| (t.i == a && t.j == b) || (t.i == b && t.j == a))
    }

    fn push(&mut self, t: DfsTuple) {
        self.tuples.push(t);
    }
}

impl fmt::Display for DfsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in self.tuples.iter().enumerate() {
            if n > 0 {
                f.write_str(";")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Codec for DfsCode {
    fn encode(&self, out: &mut Vec<u8>) {
        put_len(out, self.tuples.len());
        for t in &self.tuples {
            for x in [t.i, t.j, t.li, t.le, t.lj] {
                put_u32(out, x);
            }
        }
    }

    fn decode(input: &mut Reader<'_>) -> Result<Self, CodecError> {
        let n = input.count(20)?;
        let mut tuples = Vec::with_capacity(n);
        for _ in 0..n {
            tuples.push(DfsTuple::new(
                input.u32()?,
                input.u32()?,
                input.u32()?,
                input.u32()?,
                input.u32()?,
            ));
        }
        DfsCode::from_tuples(tuples).map_err(|e| CodecError::Invalid(e.to_string()))
    }
}

/// Appends one rightmost-path extension to `parent`.
pub fn code_of_child(parent: &DfsCode, t: DfsTuple) -> Result<DfsCode, MiningError> {
    let invalid = |why: &str| Err(MiningError::InvalidExtension(format!("{t}: {why}")));
    if parent.is_empty() {
        if (t.i, t.j) != (0, 1) {
            return invalid("the first step must be (0,1)");
        }
    } else {
        let n = parent.vertex_count() as u32;
        let path = parent.rightmost_path();
        let labels = parent.vertex_labels();
        let rightmost = n - 1;
        if t.is_forward() {
            if t.j != n {
                return invalid("a forward step must discover the next vertex id");
            }
            if !path.contains(&t.i) {
                return invalid("source is not on the rightmost path");
            }
        } else {
            if t.i == t.j {
                return invalid("self-loop");
            }
            if t.i != rightmost {
                return invalid("a backward step must start at the rightmost vertex");
            }
            if !path.contains(&t.j) {
                return invalid("target is not on the rightmost path");
            }
            if parent.contains_edge(t.i, t.j) {
                return invalid("edge already present");
            }
            if labels[t.j as usize] != t.lj {
                return invalid("target label disagrees with the code");
            }
        }
        if labels[t.i as usize] != t.li {
            return invalid("source label disagrees with the code");
        }
    }
    let mut child = parent.clone();
    child.push(t);
    Ok(child)
}

/// The labeled pattern graph a code describes; vertex `t` is code vertex `t`.
pub fn graph_of(code: &DfsCode) -> Result<Graph, GraphError> {
    let pairs: Vec<(VertexId, VertexId)> = code.tuples.iter().map(|t| (t.i, t.j)).collect();
    Graph::from_edges(code.vertex_count(), pairs)?
        .with_vertex_labels(code.vertex_labels())?
        .with_edge_labels(code.tuples.iter().map(|t| (t.i, t.j, t.le)))
}

/// A partial traversal of a pattern graph that spells the current best prefix.
#[derive(Clone)]
struct Walk {
    /// code vertex -> graph vertex
    order: Vec<VertexId>,
    /// graph vertex -> code vertex
    slot: Vec<u32>,
    parent: Vec<u32>,
    used: Vec<bool>,
}

const NONE: u32 = u32::MAX;

impl Walk {
    fn start(g: &Graph, edges: &[EdgeRef], from: VertexId, to: VertexId) -> Walk {
        let mut walk = Walk {
            order: vec![from, to],
            slot: vec![NONE; g.vertex_count()],
            parent: vec![NONE, 0],
            used: vec![false; edges.len()],
        };
        walk.slot[from as usize] = 0;
        walk.slot[to as usize] = 1;
        walk.used[edge_index(edges, from, to)] = true;
        walk
    }

    fn rightmost_path(&self) -> Vec<u32> {
        let mut path = vec![self.order.len() as u32 - 1];
        while let Some(&last) = path.last() {
            let p = self.parent[last as usize];
            if p == NONE {
                break;
            }
            path.push(p);
        }
        path
    }

    /// Legal next steps: backward edges from the rightmost vertex, otherwise
    /// forward edges from the deepest rightmost-path vertex that still has any.
    fn moves(&self, g: &Graph, edges: &[EdgeRef]) -> Vec<(DfsTuple, VertexId)> {
        let path = self.rightmost_path();
        let r = path[0];
        let gr = self.order[r as usize];
        let mut out = Vec::new();
        for &x in &path[1..] {
            let gx = self.order[x as usize];
            if g.has_edge(gr, gx) && !self.used[edge_index(edges, gr, gx)] {
                let t = DfsTuple::new(r, x, g.vertex_label(gr), g.edge_label(gr, gx), g.vertex_label(gx));
                out.push((t, gx));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let next = self.order.len() as u32;
        for &x in &path {
            let gx = self.order[x as usize];
            for &y in g.neighbors(gx) {
                if self.slot[y as usize] == NONE {
                    let t = DfsTuple::new(x, next, g.vertex_label(gx), g.edge_label(gx, y), g.vertex_label(y));
                    out.push((t, y));
                }
            }
            if !out.is_empty() {
                break;
            }
        }
        out
    }

    fn apply(&self, edges: &[EdgeRef], t: DfsTuple, target: VertexId) -> Walk {
        let mut next = self.clone();
        let source = self.order[t.i as usize];
        next.used[edge_index(edges, source, target)] = true;
        if t.is_forward() {
            next.slot[target as usize] = t.j;
            next.order.push(target);
            next.parent.push(t.i);
        }
        next
    }
}

fn edge_index(edges: &[EdgeRef], a: VertexId, b: VertexId) -> usize {
    edges
        .binary_search(&EdgeRef::new(a, b))
        .expect("edge of the pattern graph")
}

enum Search {
    Minimum(DfsCode),
    /// A code smaller than the reference was found.
    Beaten,
}

/// Greedy search for the minimum code: grow every traversal spelling the best
/// prefix so far by its smallest legal step, keeping only those that tie.
fn search(g: &Graph, reference: Option<&DfsCode>) -> Result<Search, MiningError> {
    if !g.is_connected() {
        return Err(MiningError::Disconnected);
    }
    let edges: Vec<EdgeRef> = g.edges().collect();
    let mut code = DfsCode::new();
    if edges.is_empty() {
        return Ok(Search::Minimum(code));
    }
    let mut first: Option<DfsTuple> = None;
    let mut walks = Vec::new();
    for e in &edges {
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            let t = DfsTuple::new(0, 1, g.vertex_label(a), g.edge_label(a, b), g.vertex_label(b));
            match first.map(|best| t.cmp(&best)) {
                Some(Ordering::Greater) => continue,
                Some(Ordering::Less) | None => {
                    first = Some(t);
                    walks.clear();
                }
                Some(Ordering::Equal) => {}
            }
            walks.push(Walk::start(g, &edges, a, b));
        }
    }
    let mut step = first.expect("at least one edge");
    loop {
        if let Some(reference) = reference {
            match step.cmp(&reference.tuples[code.edge_count()]) {
                Ordering::Less => return Ok(Search::Beaten),
                Ordering::Greater => unreachable!("a valid code is never below the minimum"),
                Ordering::Equal => {}
            }
        }
        code.push(step);
        if code.edge_count() == edges.len() {
            return Ok(Search::Minimum(code));
        }
        let mut best: Option<DfsTuple> = None;
        let mut next = Vec::new();
        for walk in &walks {
            for (t, target) in walk.moves(g, &edges) {
                match best.map(|b| t.cmp(&b)) {
                    Some(Ordering::Greater) => continue,
                    Some(Ordering::Less) | None => {
                        best = Some(t);
                        next.clear();
                    }
                    Some(Ordering::Equal) => {}
                }
                next.push(walk.apply(&edges, t, target));
            }
        }
        step = best.expect("a connected pattern always has a next step");
        walks = next;
    }
}

/// The minimum DFS code of a connected pattern graph.
pub fn min_dfs_code(g: &Graph) -> Result<DfsCode, MiningError> {
    match search(g, None)? {
        Search::Minimum(code) => Ok(code),
        Search::Beaten => unreachable!("no reference given"),
    }
}

/// Whether `code` is the minimum code of the pattern it describes.
pub fn is_minimal(code: &DfsCode) -> bool {
    let Ok(g) = graph_of(code) else {
        return false;
    };
    matches!(search(&g, Some(code)), Ok(Search::Minimum(_)))
}
