//! Top-k matches of a small query, ranked by the total degree of the matched vertices.
//!
//! cargo run --example subgraph_isomorphism

use subquest::generate::{random_labeled, sample_query};
use subquest::iso::{build_index, required_hops, IsoSearch};
use subquest::queue::MemoryQueue;
use subquest::{run_basic, RunConfig};

fn main() -> anyhow::Result<()> {
    let g = random_labeled(300, 0.02, 3, 5);
    let query = sample_query(&g, 4, 9).expect("graph has edges");
    println!("query: {} vertices, {} edges", query.vertex_count(), query.edge_count());

    let index = build_index(&g, required_hops(&query)?)?;
    let search = IsoSearch::new(&g, query, index)?;
    let (top, stats) = run_basic(&g, &search, &RunConfig::top(5), &mut MemoryQueue::new())?;
    for (s, _) in top.entries() {
        println!("score {:>3}: vertices {:?}", s.state.score, s.vertex_set());
    }
    println!(
        "{} candidates, {} pruned before expansion, {} children pruned",
        stats.candidate_subgraphs, stats.pruned_at_parent, stats.pruned_at_child
    );
    Ok(())
}
