//! Acceptance run: one PASS/FAIL line per criterion; exits non-zero on any failure.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subquest::clique::MaxClique;
use subquest::engine::{run_aggregate, run_basic, Computation, RunConfig};
use subquest::generate::{gnp, random_connected_query, random_labeled, sample_query};
use subquest::graph::{load_edge_list, load_lg, Graph};
use subquest::iso::{build_index, iso_dominated, required_hops, IsoSearch};
use subquest::mining::{is_minimal, min_dfs_code, mni_support, DfsCode, PatternMining};
use subquest::oracle::{
    brute_matches, brute_max_clique, brute_min_code, brute_pattern_freqs, brute_topk_iso,
    enumerate_connected_subgraphs, is_clique, EnumerationBudget, EnumerationMode,
};
use subquest::queue::{FifoQueue, MemoryQueue, SubgraphQueue, VirtualPriorityQueue, VpqConfig};
use subquest::Priority;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    if spent > limit {
        return Err(format!("took {spent:.2?}, limit {limit:?}"));
    }
    Ok(())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn triangle_tail_cliques() -> Check {
    let start = Instant::now();
    let g = load_edge_list(fixture("triangle_tail.txt")).map_err(err)?;
    let budget = EnumerationBudget {
        max_vertices: 4,
        ..Default::default()
    };
    let all = enumerate_connected_subgraphs(&g, EnumerationMode::Induced, &budget).map_err(err)?;
    let cliques: Vec<_> = all.iter().filter(|s| is_clique(&g, s.vertices())).collect();
    let sizes: BTreeSet<usize> = cliques.iter().map(|s| s.vertex_count()).collect();
    ensure!(cliques.len() == 9, "oracle found {} cliques, expected 9", cliques.len());
    ensure!(sizes == BTreeSet::from([1, 2, 3]), "clique sizes {sizes:?}");

    let (r, pruned) = run_basic(&g, &MaxClique, &RunConfig::top(1), &mut MemoryQueue::new()).map_err(err)?;
    let (r_full, full) = run_basic(
        &g,
        &MaxClique,
        &RunConfig::top(1).without_pruning(),
        &mut MemoryQueue::new(),
    )
    .map_err(err)?;
    ensure!(r.len() == 1, "expected one result, got {}", r.len());
    let ids: Vec<u64> = r.entries()[0].0.vertex_set().iter().map(|&v| g.external_id(v)).collect();
    ensure!(ids == [1, 2, 3], "top clique {ids:?}");
    ensure!(r.priorities() == r_full.priorities(), "pruning changed the answer");
    ensure!(
        pruned.candidate_subgraphs < full.candidate_subgraphs,
        "candidates with pruning {} not below {}",
        pruned.candidate_subgraphs,
        full.candidate_subgraphs
    );
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "9 cliques; top clique {{1,2,3}}; candidates {} pruned vs {} unpruned",
        pruned.candidate_subgraphs, full.candidate_subgraphs
    ))
}

fn pattern_table(g: &Graph, m: usize) -> Result<BTreeMap<String, usize>, String> {
    let miner = PatternMining::new(m).map_err(err)?;
    let config = RunConfig::top(1 << 20).without_pruning();
    let (r, _) = run_aggregate(g, &miner, &config, &mut MemoryQueue::new()).map_err(err)?;
    Ok(r.entries()
        .iter()
        .map(|(grp, _)| (grp.key().to_string(), mni_support(grp)))
        .collect())
}

fn labeled_five_mining() -> Check {
    let start = Instant::now();
    let g = load_lg(fixture("labeled_five.lg")).map_err(err)?;
    let miner = PatternMining::new(2).map_err(err)?;
    let (r, stats) = run_aggregate(&g, &miner, &RunConfig::top(1), &mut MemoryQueue::new()).map_err(err)?;
    ensure!(r.len() == 1, "expected one pattern, got {}", r.len());
    let (top, _) = &r.entries()[0];
    let bbb = "(0,1,1,0,1);(1,2,1,0,1)";
    ensure!(top.key().to_string() == bbb, "top pattern {}", top.key());
    ensure!(mni_support(top) == 3, "top frequency {}", mni_support(top));
    ensure!(stats.unit_subgraphs == 8, "{} seed subgraphs, expected 8", stats.unit_subgraphs);

    let mut table = pattern_table(&g, 1)?;
    table.extend(pattern_table(&g, 2)?);
    let expected = [
        ("(0,1,0,0,1)", 2),
        ("(0,1,1,0,1)", 3),
        ("(0,1,0,0,1);(1,2,1,0,1)", 2),
        (bbb, 3),
    ];
    for (code, f) in expected {
        ensure!(table.get(code) == Some(&f), "pattern {code}: {:?}, expected {f}", table.get(code));
    }
    within(start, Duration::from_secs(1))?;
    Ok("b-b-b path with frequency 3; p1:2 p2:3 p3:2 p4:3; 8 seeds".into())
}

fn iso_search(g: &Graph, q: Graph) -> Result<IsoSearch, String> {
    let hops = required_hops(&q).map_err(err)?;
    let index = build_index(g, hops).map_err(err)?;
    IsoSearch::new(g, q, index).map_err(err)
}

fn labeled_five_iso() -> Check {
    let start = Instant::now();
    let g = load_lg(fixture("labeled_five.lg")).map_err(err)?;
    let q = load_lg(fixture("query_abb.lg")).map_err(err)?;
    let search = iso_search(&g, q.clone())?;
    let (all, _) = run_basic(
        &g,
        &search,
        &RunConfig::top(1000).without_pruning(),
        &mut MemoryQueue::new(),
    )
    .map_err(err)?;
    ensure!(all.len() == 4, "{} relevant subgraphs, expected 4", all.len());
    let (r, _) = run_basic(&g, &search, &RunConfig::top(4), &mut MemoryQueue::new()).map_err(err)?;
    let scores: Vec<u64> = r.entries().iter().map(|(s, _)| s.state.score).collect();
    ensure!(scores == [7, 7, 6, 6], "scores {scores:?}");
    let oracle = brute_topk_iso(&g, &q, 4, &EnumerationBudget::default()).map_err(err)?;
    ensure!(oracle == scores, "oracle scores {oracle:?}");
    within(start, Duration::from_secs(1))?;
    Ok("4 matches with scores {7,7,6,6}, oracle agrees".into())
}

fn path_aaaa_bounds() -> Check {
    let g = load_lg(fixture("path_aaaa.lg")).map_err(err)?;
    let q = load_lg(fixture("edge_aa.lg")).map_err(err)?;
    let index = build_index(&g, 2).map_err(err)?;
    ensure!(index.get(1, 1, 0) == Some(2), "index (v2,1,a) = {:?}", index.get(1, 1, 0));
    let search = iso_search(&g, q)?;
    let units = search.units(&g);
    let bounds: Vec<u64> = units.iter().map(|s| s.state.score + s.state.bound).collect();
    ensure!(bounds == [3, 4, 4, 3], "unit bounds {bounds:?}");
    let (r, stats) = run_basic(&g, &search, &RunConfig::top(1), &mut MemoryQueue::new()).map_err(err)?;
    ensure!(r.len() == 1, "{} results", r.len());
    let best = &r.entries()[0].0;
    ensure!(best.state.score == 4, "top score {}", best.state.score);
    for unit in units.iter().filter(|s| s.state.score + s.state.bound == 3) {
        ensure!(iso_dominated(unit, best), "unit {:?} not dominated", unit.vertices());
    }
    ensure!(stats.pruned_at_parent == 2, "{} units pruned, expected 2", stats.pruned_at_parent);
    Ok("index (v2,1,a)=2; bounds (3,4,4,3); top score 4; both bound-3 units pruned".into())
}

fn clique_oracle() -> Check {
    let start = Instant::now();
    let budget = EnumerationBudget {
        max_vertices: 20,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..100u64 {
        let n = rng.gen_range(1..=20);
        let p = if case % 2 == 0 { 0.3 } else { 0.5 };
        let g = gnp(n, p, case);
        let (size, _) = brute_max_clique(&g, &budget).map_err(err)?;
        let (r, _) = run_basic(&g, &MaxClique, &RunConfig::top(1), &mut MemoryQueue::new()).map_err(err)?;
        let (r_full, _) = run_basic(
            &g,
            &MaxClique,
            &RunConfig::top(1).without_pruning(),
            &mut MemoryQueue::new(),
        )
        .map_err(err)?;
        let found = r.entries()[0].0.vertex_count();
        ensure!(found == size, "case {case} (n={n}, p={p}): engine {found}, oracle {size}");
        ensure!(r.priorities() == r_full.priorities(), "case {case}: pruning changed the answer");
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("100 graphs agree ({:.2?})", start.elapsed()))
}

fn top_k_patterns(map: &BTreeMap<DfsCode, usize>, k: usize) -> BTreeSet<(DfsCode, usize)> {
    let mut freqs: Vec<usize> = map.values().copied().collect();
    freqs.sort_unstable_by(|a, b| b.cmp(a));
    let Some(&kth) = freqs.get(k - 1).or(freqs.last()) else {
        return BTreeSet::new();
    };
    map.iter()
        .filter(|(_, &f)| f >= kth)
        .map(|(c, &f)| (c.clone(), f))
        .collect()
}

fn mining_oracle() -> Check {
    let start = Instant::now();
    let budget = EnumerationBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut compared = 0;
    for case in 0..50u64 {
        let n = rng.gen_range(3..=12);
        let labels = rng.gen_range(1..=3);
        let g = random_labeled(n, 0.3, labels, 100 + case);
        let m = 1 + (case % 3) as usize;
        let oracle = brute_pattern_freqs(&g, m, &budget).map_err(err)?;
        let miner = PatternMining::new(m).map_err(err)?;

        let config = RunConfig::top(1 << 20).without_pruning();
        let (all, _) = run_aggregate(&g, &miner, &config, &mut MemoryQueue::new()).map_err(err)?;
        let full: BTreeMap<DfsCode, usize> = all
            .entries()
            .iter()
            .map(|(grp, _)| (grp.key().clone(), mni_support(grp)))
            .collect();
        ensure!(full == oracle, "case {case}: unpruned map differs from oracle");

        for k in [1, 3] {
            let (r, _) = run_aggregate(&g, &miner, &RunConfig::top(k), &mut MemoryQueue::new()).map_err(err)?;
            let got: BTreeSet<(DfsCode, usize)> = r
                .entries()
                .iter()
                .map(|(grp, _)| (grp.key().clone(), mni_support(grp)))
                .collect();
            ensure!(got.len() == r.len(), "case {case}: duplicate patterns in the result");
            let want = top_k_patterns(&oracle, k);
            ensure!(got == want, "case {case}, k={k}: engine {got:?} vs oracle {want:?}");
            compared += 1;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 graphs, {compared} top-k comparisons agree ({:.2?})", start.elapsed()))
}

/// Connected edge sets over `n` vertices that touch every vertex.
fn connected_shapes(n: u32, max_edges: usize) -> Vec<Vec<(u32, u32)>> {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << pairs.len()) {
        if mask.count_ones() as usize > max_edges {
            continue;
        }
        let chosen: Vec<(u32, u32)> = (0..pairs.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| pairs[i])
            .collect();
        let g = Graph::from_edges(n as usize, chosen.iter().copied()).expect("valid pairs");
        if g.is_connected() && g.vertices().all(|v| !g.neighbors(v).is_empty()) {
            out.push(chosen);
        }
    }
    out
}

fn prefix_property() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for n in 2..=5u32 {
        for shape in connected_shapes(n, 4) {
            for labeling in 0u32..(1 << n) {
                let labels = (0..n).map(|v| (labeling >> v) & 1).collect();
                let g = Graph::labeled(labels, &shape).map_err(err)?;
                let min = min_dfs_code(&g).map_err(err)?;
                let brute = brute_min_code(&g).map_err(err)?;
                ensure!(min == brute, "pattern {shape:?}/{labeling}: {min} vs exhaustive {brute}");
                let prefix = min.prefix(min.edge_count() - 1);
                ensure!(is_minimal(&prefix), "prefix {prefix} of {min} is not minimal");
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} labeled patterns, every prefix minimal ({:.2?})", start.elapsed()))
}

fn iso_oracle() -> Check {
    let start = Instant::now();
    let budget = EnumerationBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut nonempty = 0;
    for case in 0..50u64 {
        let n = rng.gen_range(4..=12);
        let labels = rng.gen_range(1..=3);
        let g = random_labeled(n, 0.35, labels, 200 + case);
        let size = rng.gen_range(1..=4);
        let q = if case % 5 == 4 {
            random_connected_query(size, labels, 0.3, 300 + case)
        } else {
            match sample_query(&g, size, 300 + case) {
                Some(q) => q,
                None => random_connected_query(size, labels, 0.3, 300 + case),
            }
        };
        let matches = brute_matches(&g, &q, &budget).map_err(err)?;
        let shapes: BTreeSet<(Vec<u32>, Vec<_>)> = matches.iter().map(|m| (m.0.clone(), m.1.clone())).collect();
        let search = iso_search(&g, q.clone())?;
        for k in [1, 3] {
            let (r, _) = run_basic(&g, &search, &RunConfig::top(k), &mut MemoryQueue::new()).map_err(err)?;
            let scores: Vec<u64> = r.entries().iter().map(|(s, _)| s.state.score).collect();
            let want = brute_topk_iso(&g, &q, k, &budget).map_err(err)?;
            ensure!(scores == want, "case {case}, k={k}: engine {scores:?} vs oracle {want:?}");
            for (s, _) in r.entries() {
                ensure!(
                    shapes.contains(&(s.vertex_set(), s.edges().to_vec())),
                    "case {case}: result {:?} is not a match",
                    s.vertex_set()
                );
            }
            nonempty += usize::from(!scores.is_empty());
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 graphs, 100 top-k comparisons agree, {nonempty} non-empty ({:.2?})", start.elapsed()))
}

fn vpq_equivalence() -> Check {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(err)?;
    let mut q = VirtualPriorityQueue::<u64>::new(VpqConfig::new(1000, dir.path())).map_err(err)?;
    let mut reference: BinaryHeap<(Priority, Reverse<u64>)> = BinaryHeap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut max_in_memory = 0;
    let mut produced = Vec::new();
    let mut expected = Vec::new();
    let total = 100_000u64;
    // growing phase with occasional dequeues, then a full drain
    for id in 0..total {
        let p = Priority::from([rng.gen_range(0..50) as f64, rng.gen_range(0..4) as f64]);
        q.enqueue(id, p.clone()).map_err(err)?;
        reference.push((p, Reverse(id)));
        max_in_memory = max_in_memory.max(q.in_memory_len());
        if rng.gen_bool(0.2) {
            produced.push(q.dequeue_max().map_err(err)?.map(|(x, _)| x));
            expected.push(reference.pop().map(|(_, Reverse(x))| x));
        }
    }
    while let Some((x, _)) = q.dequeue_max().map_err(err)? {
        produced.push(Some(x));
        max_in_memory = max_in_memory.max(q.in_memory_len());
    }
    while let Some((_, Reverse(x))) = reference.pop() {
        expected.push(Some(x));
    }
    ensure!(produced == expected, "dequeue order differs from the reference heap");
    let stats = q.stats().clone();
    ensure!(stats.spills > 0, "no spill happened");
    ensure!(max_in_memory <= 1000, "in-memory count reached {max_in_memory}");
    // the record that triggers a spill is counted before the spill runs
    ensure!(stats.peak_in_memory <= 1001, "peak in-memory count {}", stats.peak_in_memory);
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{total} records, {} spills, at most {max_in_memory} in memory between calls ({:.2?})",
        stats.spills,
        start.elapsed()
    ))
}

fn monotone_work() -> Check {
    let mut strict = 0;
    for seed in 0..100u64 {
        let g = gnp(50, 0.3, 1000 + seed);
        let (r, fast) = run_basic(&g, &MaxClique, &RunConfig::top(1), &mut MemoryQueue::new()).map_err(err)?;
        let (r_base, base) = run_basic(
            &g,
            &MaxClique,
            &RunConfig::top(1).without_pruning(),
            &mut FifoQueue::new(),
        )
        .map_err(err)?;
        ensure!(
            r.entries()[0].1 == r_base.entries()[0].1,
            "seed {seed}: answers differ"
        );
        ensure!(
            fast.candidate_subgraphs <= base.candidate_subgraphs,
            "seed {seed}: {} > {}",
            fast.candidate_subgraphs,
            base.candidate_subgraphs
        );
        strict += usize::from(fast.candidate_subgraphs < base.candidate_subgraphs);
    }
    ensure!(strict >= 90, "strictly fewer candidates on only {strict} of 100 seeds");
    Ok(format!("fewer candidates on {strict} of 100 seeds, never more"))
}

fn run_twice(dir: &Path, name: &str, args: &[&str], outputs: &[&str]) -> Result<(), String> {
    let mut runs = Vec::new();
    for round in 0..2 {
        let round_dir = dir.join(format!("{name}-{round}"));
        std::fs::create_dir_all(&round_dir).map_err(err)?;
        let mut full: Vec<String> = args.iter().map(|a| a.to_string()).collect();
        for out in outputs {
            full.push(format!("--{out}"));
            full.push(round_dir.join(out).display().to_string());
        }
        let status = Command::new(env!("CARGO_BIN_EXE_subquest"))
            .args(&full)
            .env("SUBQUEST_SPILL_DIR", &round_dir)
            .output()
            .map_err(err)?;
        ensure!(
            status.status.success(),
            "{name}: exit {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        );
        let mut files = Vec::new();
        for out in outputs {
            files.push(std::fs::read(round_dir.join(out)).map_err(err)?);
        }
        runs.push(files);
    }
    ensure!(runs[0] == runs[1], "{name}: outputs differ between runs");
    ensure!(runs[0].iter().all(|f| !f.is_empty()), "{name}: empty output");
    Ok(())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(err)?;
    let triangle_tail = fixture("triangle_tail.txt").display().to_string();
    let labeled_five = fixture("labeled_five.lg").display().to_string();
    let path_aaaa = fixture("path_aaaa.lg").display().to_string();
    let query = fixture("query_abb.lg").display().to_string();
    let edge = fixture("edge_aa.lg").display().to_string();
    let random = dir.path().join("random.lg");
    std::fs::write(&random, random_labeled(40, 0.2, 2, 77).to_lg()).map_err(err)?;
    let random = random.display().to_string();

    let cases: Vec<(&str, Vec<&str>, Vec<&str>)> = vec![
        ("clique", vec!["clique", "--graph", &triangle_tail, "--k", "2"], vec!["output", "stats-json"]),
        ("clique-spill", vec!["clique", "--graph", &random, "--k", "3", "--max-mem-entries", "4"], vec!["output", "stats-json"]),
        ("clique-fifo", vec!["clique", "--graph", &random, "--no-priority", "--no-prune"], vec!["output", "stats-json"]),
        ("mine", vec!["mine", "--graph", &labeled_five, "--edges", "2", "--k", "2"], vec!["output", "stats-json"]),
        ("mine-spill", vec!["mine", "--graph", &random, "--edges", "3", "--k", "3", "--max-mem-entries", "2"], vec!["output", "stats-json"]),
        ("iso", vec!["iso", "--graph", &labeled_five, "--query", &query, "--k", "4"], vec!["output", "stats-json"]),
        ("iso-path_aaaa", vec!["iso", "--graph", &path_aaaa, "--query", &edge], vec!["output", "stats-json"]),
        ("index", vec!["index", "--graph", &random, "--hops", "2", "--threads", "3"], vec!["out"]),
        ("oracle-clique", vec!["oracle", "--graph", &triangle_tail, "--problem", "clique"], vec!["output"]),
        ("oracle-mine", vec!["oracle", "--graph", &labeled_five, "--problem", "mine", "--edges", "2"], vec!["output"]),
        ("oracle-iso", vec!["oracle", "--graph", &labeled_five, "--problem", "iso", "--query", &query, "--k", "2"], vec!["output"]),
    ];
    for (name, args, outputs) in &cases {
        run_twice(dir.path(), name, args, outputs)?;
    }
    Ok(format!("{} commands byte-identical across two runs", cases.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("triangle_tail clique fixture", triangle_tail_cliques),
        ("labeled_five mining fixture", labeled_five_mining),
        ("labeled_five isomorphism fixture", labeled_five_iso),
        ("path_aaaa index and bounds", path_aaaa_bounds),
        ("clique oracle equivalence", clique_oracle),
        ("mining oracle equivalence", mining_oracle),
        ("dfs code prefix property", prefix_property),
        ("isomorphism oracle equivalence", iso_oracle),
        ("virtual priority queue", vpq_equivalence),
        ("monotone work", monotone_work),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
