//! Cross-checks the search engine against exhaustive enumeration on small graphs.

use subquest::clique::MaxClique;
use subquest::generate::{random_labeled, sample_query};
use subquest::iso::{build_index, required_hops, IsoSearch};
use subquest::mining::{mni_support, PatternMining};
use subquest::oracle::{brute_max_clique, brute_pattern_freqs, brute_topk_iso, EnumerationBudget};
use subquest::queue::MemoryQueue;
use subquest::{run_aggregate, run_basic, RunConfig};

fn main() -> anyhow::Result<()> {
    let budget = EnumerationBudget::default();
    for seed in 0..10 {
        let g = random_labeled(10, 0.4, 2, seed);

        let (size, _) = brute_max_clique(&g, &budget)?;
        let (r, _) = run_basic(&g, &MaxClique, &RunConfig::top(1), &mut MemoryQueue::new())?;
        assert_eq!(r.entries()[0].0.vertex_count(), size);

        let freqs = brute_pattern_freqs(&g, 2, &budget)?;
        let miner = PatternMining::new(2)?;
        let (r, _) = run_aggregate(&g, &miner, &RunConfig::top(1), &mut MemoryQueue::new())?;
        let best = freqs.values().max().copied().unwrap_or(0);
        assert!(r.entries().iter().all(|(grp, _)| mni_support(grp) == best));

        if let Some(q) = sample_query(&g, 3, seed) {
            let search = IsoSearch::new(&g, q.clone(), build_index(&g, required_hops(&q)?)?)?;
            let (r, _) = run_basic(&g, &search, &RunConfig::top(2), &mut MemoryQueue::new())?;
            let scores: Vec<u64> = r.entries().iter().map(|(s, _)| s.state.score).collect();
            assert_eq!(scores, brute_topk_iso(&g, &q, 2, &budget)?);
        }
        println!("seed {seed}: clique {size}, top pattern support {best}, matches agree");
    }
    Ok(())
}
