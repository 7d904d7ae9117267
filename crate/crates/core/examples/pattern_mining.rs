//! Most frequent connected patterns of a labeled graph, by minimum image support.
//!
//! cargo run --example pattern_mining -- [edges] [k]

use subquest::generate::random_labeled;
use subquest::mining::{graph_of, mni_support, PatternMining};
use subquest::queue::MemoryQueue;
use subquest::{run_aggregate, RunConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let edges: usize = args.next().map_or(Ok(3), |a| a.parse())?;
    let k: usize = args.next().map_or(Ok(5), |a| a.parse())?;
    let g = random_labeled(200, 0.02, 3, 11);

    let miner = PatternMining::new(edges)?;
    let (top, stats) = run_aggregate(&g, &miner, &RunConfig::top(k), &mut MemoryQueue::new())?;
    for (group, _) in top.entries() {
        let shape = graph_of(group.key())?;
        println!(
            "{:>4} embeddings, support {:>3}, {} vertices: {}",
            group.len(),
            mni_support(group),
            shape.vertex_count(),
            group.key()
        );
    }
    println!("{} candidate subgraphs, {} seeds", stats.candidate_subgraphs, stats.unit_subgraphs);
    Ok(())
}
