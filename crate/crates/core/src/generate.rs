//! Seeded random graphs for tests, examples and benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeRef, Graph, Label, VertexId};

/// Erdős–Rényi G(n, p): every pair is an edge with probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).expect("pairs are in range and distinct")
}

/// G(n, p) with vertex labels drawn uniformly from `0..labels`.
pub fn random_labeled(n: usize, p: f64, labels: u32, seed: u64) -> Graph {
    let g = gnp(n, p, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let labels = (0..n).map(|_| rng.gen_range(0..labels.max(1))).collect();
    g.with_vertex_labels(labels).expect("one label per vertex")
}

/// A random connected subgraph of `g` with up to `size` vertices, relabeled to
/// `0..size`. Sampled queries always have at least one match in `g`.
pub fn sample_query(g: &Graph, size: usize, seed: u64) -> Option<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<VertexId> = g.vertices().filter(|&v| !g.neighbors(v).is_empty()).collect();
    let &start = starts.choose(&mut rng)?;
    let mut picked = vec![start];
    let mut edges: BTreeSet<EdgeRef> = BTreeSet::new();
    while picked.len() < size.max(1) {
        let frontier: Vec<(VertexId, VertexId)> = picked
            .iter()
            .flat_map(|&x| g.neighbors(x).iter().map(move |&y| (x, y)))
            .filter(|(_, y)| !picked.contains(y))
            .collect();
        let Some(&(x, y)) = frontier.choose(&mut rng) else {
            break;
        };
        picked.push(y);
        edges.insert(EdgeRef::new(x, y));
    }
    // keep each remaining edge among the picked vertices with probability 1/2
    for (n, &a) in picked.iter().enumerate() {
        for &b in &picked[n + 1..] {
            if g.has_edge(a, b) && rng.gen_bool(0.5) {
                edges.insert(EdgeRef::new(a, b));
            }
        }
    }
    let local = |x: VertexId| picked.iter().position(|&p| p == x).expect("picked") as VertexId;
    let labels: Vec<Label> = picked.iter().map(|&v| g.vertex_label(v)).collect();
    let pairs: Vec<_> = edges.iter().map(|e| (local(e.u), local(e.v))).collect();
    Some(Graph::labeled(labels, &pairs).expect("valid sampled query"))
}

/// A random connected query with `n` vertices: a random tree plus extra edges.
pub fn random_connected_query(n: usize, labels: u32, extra: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for v in 1..n as VertexId {
        pairs.insert((rng.gen_range(0..v), v));
    }
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            if rng.gen_bool(extra) {
                pairs.insert((a, b));
            }
        }
    }
    let labels = (0..n).map(|_| rng.gen_range(0..labels.max(1))).collect();
    let pairs: Vec<_> = pairs.into_iter().collect();
    Graph::labeled(labels, &pairs).expect("valid random query")
}
