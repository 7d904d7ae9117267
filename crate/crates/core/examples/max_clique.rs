//! Largest cliques of a random graph, with and without pruning.
//!
//! cargo run --example max_clique -- [n] [p] [seed]

use subquest::clique::MaxClique;
use subquest::generate::gnp;
use subquest::queue::MemoryQueue;
use subquest::{run_basic, RunConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(60), |a| a.parse())?;
    let p: f64 = args.next().map_or(Ok(0.3), |a| a.parse())?;
    let seed: u64 = args.next().map_or(Ok(7), |a| a.parse())?;
    let g = gnp(n, p, seed);

    let (top, stats) = run_basic(&g, &MaxClique, &RunConfig::top(3), &mut MemoryQueue::new())?;
    let (_, full) = run_basic(&g, &MaxClique, &RunConfig::top(3).without_pruning(), &mut MemoryQueue::new())?;
    // ties with the third-best priority are all kept
    println!("{} cliques at or above the third-best size", top.len());
    for (s, p) in top.entries().iter().take(5) {
        println!("size {} priority {p}: {:?}", s.vertex_count(), s.vertex_set());
    }
    println!(
        "candidates: {} with pruning, {} without",
        stats.candidate_subgraphs, full.candidate_subgraphs
    );
    Ok(())
}
