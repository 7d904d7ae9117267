//! Brute-force reference answers for small graphs.
//!
//! Nothing here goes through the engine or the computations' expansion rules;
//! everything is plain exhaustive enumeration plus the problem definitions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::engine::Subgraph;
use crate::graph::{EdgeRef, Graph, VertexId};
use crate::mining::{DfsCode, DfsTuple, MiningError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("query graph is empty or disconnected")]
    BadQuery,
    #[error(transparent)]
    Mining(#[from] MiningError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Largest subgraph (or input, for whole-graph searches) in vertices.
    pub max_vertices: usize,
    /// Largest subgraph in edges.
    pub max_edges: usize,
    /// Hard cap on subgraphs (or matches) produced.
    pub max_subgraphs: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_vertices: 12,
            max_edges: 20,
            max_subgraphs: 10_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Connected vertex sets with all edges among them; capped by `max_vertices`.
    Induced,
    /// Connected edge sets (plus single vertices); capped by `max_edges` and `max_vertices`.
    Edges,
}

type Shape = (Vec<VertexId>, Vec<EdgeRef>);

/// Every connected subgraph within budget exactly once, sorted by (vertices, edges).
pub fn enumerate_connected_subgraphs(
    g: &Graph,
    mode: EnumerationMode,
    budget: &EnumerationBudget,
) -> Result<Vec<Subgraph<()>>, OracleError> {
    let mut seen: BTreeSet<Shape> = BTreeSet::new();
    let mut stack: Vec<Shape> = Vec::new();
    let admit = |shape: Shape, seen: &mut BTreeSet<Shape>, stack: &mut Vec<Shape>| {
        if seen.insert(shape.clone()) {
            if seen.len() > budget.max_subgraphs {
                return Err(OracleError::BudgetExceeded(format!(
                    "more than {} subgraphs",
                    budget.max_subgraphs
                )));
            }
            stack.push(shape);
        }
        Ok(())
    };
    if budget.max_vertices == 0 {
        return Ok(Vec::new());
    }
    for v in g.vertices() {
        admit((vec![v], Vec::new()), &mut seen, &mut stack)?;
    }
    while let Some((vertices, edges)) = stack.pop() {
        match mode {
            EnumerationMode::Induced => {
                if vertices.len() >= budget.max_vertices {
                    continue;
                }
                for &x in &vertices {
                    for &y in g.neighbors(x) {
                        if vertices.contains(&y) {
                            continue;
                        }
                        let mut vs = vertices.clone();
                        vs.push(y);
                        vs.sort_unstable();
                        let es = induced_edges(g, &vs);
                        admit((vs, es), &mut seen, &mut stack)?;
                    }
                }
            }
            EnumerationMode::Edges => {
                if edges.len() >= budget.max_edges {
                    continue;
                }
                for &x in &vertices {
                    for &y in g.neighbors(x) {
                        let e = EdgeRef::new(x, y);
                        if edges.contains(&e) {
                            continue;
                        }
                        let mut vs = vertices.clone();
                        if !vs.contains(&y) {
                            if vs.len() >= budget.max_vertices {
                                continue;
                            }
                            vs.push(y);
                            vs.sort_unstable();
                        }
                        let mut es = edges.clone();
                        es.push(e);
                        es.sort_unstable();
                        admit((vs, es), &mut seen, &mut stack)?;
                    }
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|(vs, es)| Subgraph::from_parts(vs, es, ()))
        .collect())
}

fn induced_edges(g: &Graph, vs: &[VertexId]) -> Vec<EdgeRef> {
    let mut out = Vec::new();
    for (n, &a) in vs.iter().enumerate() {
        for &b in &vs[n + 1..] {
            if g.has_edge(a, b) {
                out.push(EdgeRef::new(a, b));
            }
        }
    }
    out
}

pub fn is_clique(g: &Graph, vs: &[VertexId]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(n, &a)| vs[n + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// Size of a maximum clique and one witness (the first found in ascending order).
pub fn brute_max_clique(
    g: &Graph,
    budget: &EnumerationBudget,
) -> Result<(usize, Vec<VertexId>), OracleError> {
    if g.vertex_count() > budget.max_vertices {
        return Err(OracleError::BudgetExceeded(format!(
            "{} vertices exceed the limit of {}",
            g.vertex_count(),
            budget.max_vertices
        )));
    }
    fn go(g: &Graph, next: VertexId, current: &mut Vec<VertexId>, best: &mut Vec<VertexId>) {
        if next as usize == g.vertex_count() {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        if current.iter().all(|&c| g.has_edge(c, next)) {
            current.push(next);
            go(g, next + 1, current, best);
            current.pop();
        }
        go(g, next + 1, current, best);
    }
    let mut best = Vec::new();
    go(g, 0, &mut Vec::new(), &mut best);
    Ok((best.len(), best))
}

/// Sort key realizing the DFS step order: backward steps first (by target),
/// forward steps by deeper source, then labels.
fn step_key(t: &DfsTuple) -> (u8, u32, u32, u32, u32, u32) {
    if t.i > t.j {
        (0, t.j, t.i, t.li, t.le, t.lj)
    } else {
        (1, u32::MAX - t.i, t.j, t.li, t.le, t.lj)
    }
}

fn code_key(code: &[DfsTuple]) -> Vec<(u8, u32, u32, u32, u32, u32)> {
    code.iter().map(step_key).collect()
}

/// Exhaustively walks every DFS traversal of `g` covering all its edges and
/// returns the smallest code with every vertex order that spells it.
pub fn exhaustive_min_code(g: &Graph) -> Result<(Vec<DfsTuple>, Vec<Vec<VertexId>>), OracleError> {
    if !g.is_connected() {
        return Err(MiningError::Disconnected.into());
    }
    let edges: Vec<EdgeRef> = g.edges().collect();
    if edges.is_empty() {
        let orders = g.vertices().map(|v| vec![v]).collect();
        return Ok((Vec::new(), orders));
    }
    struct Best {
        code: Option<Vec<DfsTuple>>,
        orders: Vec<Vec<VertexId>>,
    }
    fn walk(
        g: &Graph,
        total: usize,
        order: &mut Vec<VertexId>,
        parent: &mut Vec<usize>,
        used: &mut BTreeSet<EdgeRef>,
        code: &mut Vec<DfsTuple>,
        best: &mut Best,
    ) {
        if code.len() == total {
            let better = match &best.code {
                None => true,
                Some(b) => code_key(code) < code_key(b),
            };
            if better {
                best.code = Some(code.clone());
                best.orders.clear();
            }
            if best.code.as_deref() == Some(&code[..]) {
                best.orders.push(order.clone());
            }
            return;
        }
        let mut path = vec![order.len() - 1];
        while let Some(&p) = path.last().map(|&x| &parent[x]) {
            if p == usize::MAX {
                break;
            }
            path.push(p);
        }
        let r = path[0];
        let gr = order[r];
        for &x in &path[1..] {
            let gx = order[x];
            let e = EdgeRef::new(gr, gx);
            if g.has_edge(gr, gx) && !used.contains(&e) {
                used.insert(e);
                code.push(DfsTuple::new(r as u32, x as u32, g.vertex_label(gr), g.edge_label(gr, gx), g.vertex_label(gx)));
                walk(g, total, order, parent, used, code, best);
                code.pop();
                used.remove(&e);
            }
        }
        for &x in &path {
            let gx = order[x];
            for &y in g.neighbors(gx) {
                if order.contains(&y) {
                    continue;
                }
                let e = EdgeRef::new(gx, y);
                let j = order.len();
                used.insert(e);
                order.push(y);
                parent.push(x);
                code.push(DfsTuple::new(x as u32, j as u32, g.vertex_label(gx), g.edge_label(gx, y), g.vertex_label(y)));
                walk(g, total, order, parent, used, code, best);
                code.pop();
                parent.pop();
                order.pop();
                used.remove(&e);
            }
        }
    }
    let mut best = Best {
        code: None,
        orders: Vec::new(),
    };
    for start in g.vertices() {
        walk(
            g,
            edges.len(),
            &mut vec![start],
            &mut vec![usize::MAX],
            &mut BTreeSet::new(),
            &mut Vec::new(),
            &mut best,
        );
    }
    Ok((best.code.unwrap_or_default(), best.orders))
}

/// The minimum DFS code of a connected pattern, by exhaustive enumeration.
pub fn brute_min_code(g: &Graph) -> Result<DfsCode, OracleError> {
    let (tuples, _) = exhaustive_min_code(g)?;
    Ok(DfsCode::from_tuples(tuples)?)
}

/// Minimum image-based support of every connected pattern with exactly `m` edges.
pub fn brute_pattern_freqs(
    g: &Graph,
    m: usize,
    budget: &EnumerationBudget,
) -> Result<BTreeMap<DfsCode, usize>, OracleError> {
    let budget = EnumerationBudget {
        max_edges: m,
        max_vertices: budget.max_vertices.max(m + 1),
        ..*budget
    };
    let mut images: BTreeMap<DfsCode, Vec<BTreeSet<VertexId>>> = BTreeMap::new();
    for s in enumerate_connected_subgraphs(g, EnumerationMode::Edges, &budget)? {
        if s.edge_count() != m {
            continue;
        }
        let vs = s.vertices();
        let local = |x: VertexId| vs.binary_search(&x).expect("endpoint in vertex set") as VertexId;
        let pattern = Graph::from_edges(vs.len(), s.edges().iter().map(|e| (local(e.u), local(e.v))))
            .and_then(|p| p.with_vertex_labels(vs.iter().map(|&v| g.vertex_label(v)).collect()))
            .and_then(|p| p.with_edge_labels(s.edges().iter().map(|e| (local(e.u), local(e.v), g.edge_label(e.u, e.v)))))
            .expect("pattern built from a subgraph");
        let (tuples, orders) = exhaustive_min_code(&pattern)?;
        let code = DfsCode::from_tuples(tuples)?;
        let slots = images
            .entry(code)
            .or_insert_with(|| vec![BTreeSet::new(); vs.len()]);
        for order in orders {
            for (t, &p) in order.iter().enumerate() {
                slots[t].insert(vs[p as usize]);
            }
        }
    }
    Ok(images
        .into_iter()
        .map(|(code, slots)| {
            let mni = slots.iter().map(BTreeSet::len).min().unwrap_or(0);
            (code, mni)
        })
        .collect())
}

/// Every subgraph isomorphic to `q`, as (vertex set, edge set, degree-sum score),
/// sorted by score descending then by shape.
pub fn brute_matches(
    g: &Graph,
    q: &Graph,
    budget: &EnumerationBudget,
) -> Result<Vec<(Vec<VertexId>, Vec<EdgeRef>, u64)>, OracleError> {
    if q.is_empty() || !q.is_connected() {
        return Err(OracleError::BadQuery);
    }
    let mut found: BTreeSet<Shape> = BTreeSet::new();
    let mut map: Vec<VertexId> = Vec::new();
    fn assign(
        g: &Graph,
        q: &Graph,
        map: &mut Vec<VertexId>,
        found: &mut BTreeSet<Shape>,
        cap: usize,
    ) -> Result<(), OracleError> {
        let next = map.len() as VertexId;
        if next as usize == q.vertex_count() {
            let mut vs = map.clone();
            vs.sort_unstable();
            let mut es: Vec<EdgeRef> = q.edges().map(|e| EdgeRef::new(map[e.u as usize], map[e.v as usize])).collect();
            es.sort_unstable();
            found.insert((vs, es));
            if found.len() > cap {
                return Err(OracleError::BudgetExceeded(format!("more than {cap} matches")));
            }
            return Ok(());
        }
        for v in g.vertices() {
            if map.contains(&v) || g.vertex_label(v) != q.vertex_label(next) {
                continue;
            }
            let consistent = (0..next).all(|p| {
                !q.has_edge(p, next)
                    || (g.has_edge(map[p as usize], v)
                        && g.edge_label(map[p as usize], v) == q.edge_label(p, next))
            });
            if consistent {
                map.push(v);
                assign(g, q, map, found, cap)?;
                map.pop();
            }
        }
        Ok(())
    }
    assign(g, q, &mut map, &mut found, budget.max_subgraphs)?;
    let mut out: Vec<_> = found
        .into_iter()
        .map(|(vs, es)| {
            let score = vs.iter().map(|&v| g.neighbors(v).len() as u64).sum::<u64>();
            (vs, es, score)
        })
        .collect();
    out.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| (&a.0, &a.1).cmp(&(&b.0, &b.1))));
    Ok(out)
}

/// Top-k match scores, descending, keeping every score tied with the k-th.
pub fn brute_topk_iso(
    g: &Graph,
    q: &Graph,
    k: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<u64>, OracleError> {
    let scores: Vec<u64> = brute_matches(g, q, budget)?.into_iter().map(|m| m.2).collect();
    Ok(top_k_with_ties(scores, k))
}

fn top_k_with_ties(sorted_desc: Vec<u64>, k: usize) -> Vec<u64> {
    let Some(&kth) = sorted_desc.get(k.saturating_sub(1)) else {
        return sorted_desc;
    };
    sorted_desc.into_iter().take_while(|&s| s >= kth).collect()
}
