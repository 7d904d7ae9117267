//! A priority queue that keeps a bounded number of records in memory and
//! spills the rest to sorted run files.

use subquest::queue::{SubgraphQueue, VirtualPriorityQueue, VpqConfig};
use subquest::Priority;

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let mut q = VirtualPriorityQueue::<u64>::new(VpqConfig::new(64, dir.path()))?;
    for i in 0..10_000u64 {
        let p = Priority::from([(i * 7919 % 1000) as f64]);
        q.enqueue(i, p)?;
    }
    println!("{} queued, {} in memory, {} runs on disk", q.len(), q.in_memory_len(), q.runs().len());

    let mut last = f64::INFINITY;
    let mut drained = 0;
    while let Some((_, p)) = q.dequeue_max()? {
        assert!(p.values()[0] <= last);
        last = p.values()[0];
        drained += 1;
    }
    let s = q.stats();
    println!(
        "drained {drained} in order; {} spills, {} records spilled, peak {} in memory, {} block reads",
        s.spills, s.records_spilled, s.peak_in_memory, s.read_ops
    );
    Ok(())
}
