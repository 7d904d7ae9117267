//! Writing a new computation: connected vertex sets of bounded size with the
//! largest total degree.

use subquest::engine::{edges_into, vertex_oriented_expansions, Computation};
use subquest::generate::gnp;
use subquest::queue::MemoryQueue;
use subquest::{run_basic, Graph, Priority, RunConfig, Subgraph, VertexId};

struct HeavySets {
    max_vertices: usize,
    max_degree: u64,
}

impl HeavySets {
    fn new(g: &Graph, max_vertices: usize) -> Self {
        let max_degree = g.vertices().map(|v| g.neighbors(v).len() as u64).max().unwrap_or(0);
        HeavySets { max_vertices, max_degree }
    }
}

impl Computation for HeavySets {
    /// Total degree so far.
    type State = u64;
    type Delta = VertexId;

    fn units(&self, g: &Graph) -> Vec<Subgraph<u64>> {
        g.vertices()
            .map(|v| Subgraph::from_vertex(v, g.neighbors(v).len() as u64))
            .collect()
    }

    fn expansions(&self, g: &Graph, s: &Subgraph<u64>) -> Vec<VertexId> {
        if s.vertex_count() >= self.max_vertices {
            return Vec::new();
        }
        vertex_oriented_expansions(g, s)
    }

    fn expand(&self, g: &Graph, s: &Subgraph<u64>, &v: &VertexId) -> Subgraph<u64> {
        s.with_vertex(v, edges_into(g, s, v), s.state + g.neighbors(v).len() as u64)
    }

    fn relevant(&self, _g: &Graph, s: &Subgraph<u64>) -> bool {
        s.vertex_count() == self.max_vertices
    }

    fn priority(&self, _g: &Graph, s: &Subgraph<u64>) -> Priority {
        Priority::from([s.state as f64])
    }

    fn dominated(&self, s: &Subgraph<u64>, best: &Subgraph<u64>) -> bool {
        // every missing vertex adds at most the maximum degree
        let room = (self.max_vertices - s.vertex_count()) as u64;
        s.state + room * self.max_degree < best.state
    }
}

fn main() -> anyhow::Result<()> {
    let g = gnp(40, 0.15, 2);
    let comp = HeavySets::new(&g, 4);
    let (top, stats) = run_basic(&g, &comp, &RunConfig::top(3), &mut MemoryQueue::new())?;
    for (s, p) in top.entries() {
        println!("{p}: {:?}", s.vertex_set());
    }
    println!("{} candidates, {} pruned", stats.candidate_subgraphs, stats.pruned_at_parent + stats.pruned_at_child);
    Ok(())
}
