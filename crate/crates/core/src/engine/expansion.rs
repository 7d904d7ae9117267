//! Neighbor enumeration with duplicate avoidance for the two generic expansion styles.

use crate::graph::{EdgeRef, Graph, VertexId};

use super::Subgraph;

/// Vertices that may be added to `s` by vertex-oriented expansion.
///
/// Only neighbors with an id above `max(V_s)` qualify, so each subgraph is
/// reached through exactly one ascending insertion order. This enumerates every
/// vertex set whose ascending prefixes are all connected (cliques among them).
pub fn vertex_oriented_expansions<S>(graph: &Graph, s: &Subgraph<S>) -> Vec<VertexId> {
    let Some(max) = s.max_vertex() else {
        return Vec::new();
    };
    let mut out: Vec<VertexId> = s
        .vertices()
        .iter()
        .flat_map(|&x| graph.neighbors(x).iter().copied())
        .filter(|&y| y > max)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The edges between `v` and the current vertices of `s`.
pub fn edges_into<S>(graph: &Graph, s: &Subgraph<S>, v: VertexId) -> Vec<EdgeRef> {
    s.vertices()
        .iter()
        .copied()
        .filter(|&x| graph.has_edge(x, v))
        .map(|x| EdgeRef::new(x, v))
        .collect()
}

/// Edges that may be added to `s` by edge-oriented expansion.
///
/// A child `s + e` is produced only when `s` is its canonical parent: the child
/// minus its largest edge whose removal leaves a connected subgraph. For a
/// single-vertex `s`, the canonical parent of a one-edge child is its smaller
/// endpoint. Every connected edge set therefore has exactly one parent.
pub fn edge_oriented_expansions<S>(graph: &Graph, s: &Subgraph<S>) -> Vec<EdgeRef> {
    let mut candidates: Vec<EdgeRef> = s
        .vertices()
        .iter()
        .flat_map(|&x| graph.neighbors(x).iter().map(move |&y| EdgeRef::new(x, y)))
        .filter(|&e| !s.contains_edge(e))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    if s.edge_count() == 0 {
        let Some(&seed) = s.vertices().first() else {
            return Vec::new();
        };
        candidates.retain(|e| e.u == seed);
        return candidates;
    }
    candidates.retain(|&e| is_canonical_extension(s.edges(), e));
    candidates
}

/// Whether `added` is the largest edge of `edges + added` whose removal keeps it connected.
pub fn is_canonical_extension(edges: &[EdgeRef], added: EdgeRef) -> bool {
    let mut child: Vec<EdgeRef> = edges.to_vec();
    child.push(added);
    child.sort_unstable();
    child
        .iter()
        .filter(|&&f| f > added)
        .all(|&f| !is_connected_without(&child, f))
}

/// The canonical parent edge: largest edge whose removal leaves the rest connected.
pub fn canonical_removal(edges: &[EdgeRef]) -> Option<EdgeRef> {
    if edges.len() < 2 {
        return None;
    }
    edges
        .iter()
        .rev()
        .copied()
        .find(|&f| is_connected_without(edges, f))
}

fn is_connected_without(edges: &[EdgeRef], removed: EdgeRef) -> bool {
    let rest: Vec<EdgeRef> = edges.iter().copied().filter(|&e| e != removed).collect();
    is_connected_edge_set(&rest)
}

/// Whether the edges (with their endpoints) form one connected component.
pub fn is_connected_edge_set(edges: &[EdgeRef]) -> bool {
    let Some(first) = edges.first() else {
        return true;
    };
    let mut vertices: Vec<VertexId> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let mut reached = vec![false; vertices.len()];
    let index = |x: VertexId| vertices.binary_search(&x).unwrap_or(0);
    let mut stack = vec![first.u];
    reached[index(first.u)] = true;
    while let Some(x) = stack.pop() {
        for e in edges.iter().filter(|e| e.contains(x)) {
            let y = e.other(x);
            let i = index(y);
            if !reached[i] {
                reached[i] = true;
                stack.push(y);
            }
        }
    }
    reached.iter().all(|&r| r)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::graph::parse_edge_list;

    fn triangle_tail() -> Graph {
        parse_edge_list("1 2\n1 3\n2 3\n3 4").unwrap()
    }

    #[test]
    fn vertex_oriented_on_triangle_tail() {
        let g = triangle_tail();
        let s1 = Subgraph::from_vertex(0, ());
        assert_eq!(vertex_oriented_expansions(&g, &s1), vec![1, 2]);
        // v2's neighbors are v1 and v3; only v3 has a larger id
        let s2 = Subgraph::from_vertex(1, ());
        assert_eq!(vertex_oriented_expansions(&g, &s2), vec![2]);
        let all = Subgraph::from_parts(
            vec![0, 1, 2, 3],
            g.edges().collect(),
            (),
        );
        assert!(vertex_oriented_expansions(&g, &all).is_empty());
    }

    #[test]
    fn edge_oriented_from_first_edge() {
        // v1..v5 -> 0..4
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let s = Subgraph::from_edge(0, 1, ());
        let exp = edge_oriented_expansions(&g, &s);
        assert!(exp.contains(&EdgeRef::new(1, 2)));
        let whole = Subgraph::from_parts(vec![0, 1, 2, 3, 4], g.edges().collect(), ());
        assert!(edge_oriented_expansions(&g, &whole).is_empty());
    }

    #[test]
    fn star_spokes() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = Subgraph::from_edge(0, 1, ());
        assert_eq!(
            edge_oriented_expansions(&g, &s),
            vec![EdgeRef::new(0, 2), EdgeRef::new(0, 3)]
        );
    }

    fn exhaustive_shapes(g: &Graph, vertex_units: bool) -> (usize, usize) {
        let mut stack: Vec<Subgraph<()>> = if vertex_units {
            g.vertices().map(|v| Subgraph::from_vertex(v, ())).collect()
        } else {
            g.edges().map(|e| Subgraph::from_edge(e.u, e.v, ())).collect()
        };
        let mut seen = BTreeSet::new();
        let mut total = 0;
        while let Some(s) = stack.pop() {
            total += 1;
            seen.insert((s.vertex_set(), s.edges().to_vec()));
            for e in edge_oriented_expansions(g, &s) {
                stack.push(s.with_edge(e, ()));
            }
        }
        (total, seen.len())
    }

    #[test]
    fn edge_oriented_never_duplicates() {
        let g = Graph::from_edges(
            6,
            [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (1, 4), (4, 5), (0, 5)],
        )
        .unwrap();
        for vertex_units in [false, true] {
            let (total, distinct) = exhaustive_shapes(&g, vertex_units);
            assert_eq!(total, distinct);
        }
        // star: 3 single spokes, 3 pairs, 1 full star
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(exhaustive_shapes(&star, false), (7, 7));
    }

    #[test]
    fn canonical_removal_prefers_largest_non_bridge() {
        // path 0-1-2 plus pendant 1-3: removing (1,3) keeps it connected
        let edges = vec![EdgeRef::new(0, 1), EdgeRef::new(1, 2), EdgeRef::new(1, 3)];
        assert_eq!(canonical_removal(&edges), Some(EdgeRef::new(1, 3)));
        // path 0-1-2-3: (1,2) is a bridge, (2,3) is pendant
        let path = vec![EdgeRef::new(0, 1), EdgeRef::new(1, 2), EdgeRef::new(2, 3)];
        assert_eq!(canonical_removal(&path), Some(EdgeRef::new(2, 3)));
        assert!(!is_connected_edge_set(&[EdgeRef::new(0, 1), EdgeRef::new(2, 3)]));
    }
}
