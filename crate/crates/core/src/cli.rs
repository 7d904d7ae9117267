//! The `subquest` command line: load a graph, run one computation, write JSON Lines.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::clique::MaxClique;
use crate::codec::Codec;
use crate::engine::{
    run_aggregate, run_basic, AggregateComputation, Computation, ExplorationStats, Group, Priority,
    ResultSet, RunConfig, Subgraph,
};
use crate::graph::{load_edge_list, load_lg, EdgeRef, Graph, VertexId};
use crate::iso::{build_index, required_hops, IsoSearch, VertexIndex};
use crate::mining::{mni_support, PatternMining};
use crate::oracle::{brute_matches, brute_max_clique, brute_pattern_freqs, EnumerationBudget};
use crate::queue::{FifoQueue, SubgraphQueue, VirtualPriorityQueue, VpqConfig, VpqStats};

#[derive(Parser, Debug)]
#[command(name = "subquest", version, about = "Top-k subgraph queries with prioritized expansion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Largest cliques.
    Clique {
        #[command(flatten)]
        input: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Most frequent patterns with a fixed number of edges.
    Mine {
        #[command(flatten)]
        input: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Pattern size in edges.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        edges: u32,
    },
    /// Subgraphs isomorphic to a query graph with the largest degree sums.
    Iso {
        #[command(flatten)]
        input: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Query graph (LG if the extension is .lg, otherwise an edge list).
        #[arg(long)]
        query: PathBuf,
        /// Prebuilt vertex index; built in-process when absent.
        #[arg(long)]
        index: Option<PathBuf>,
        /// Index depth when building in-process (default: the query's eccentricity).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        hops: Option<u32>,
    },
    /// Build the per-vertex degree index used by `iso`.
    Index {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        hops: u32,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
    },
    /// Exhaustive reference answers for small graphs.
    Oracle {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Pattern size in edges, for `mine`.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        edges: Option<u32>,
        /// Query graph, for `iso`.
        #[arg(long)]
        query: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Input format; inferred from the extension when omitted (.lg is LG).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Never discard dominated subgraphs.
    #[arg(long)]
    no_prune: bool,
    /// Explore in insertion order instead of by priority.
    #[arg(long)]
    no_priority: bool,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..))]
    max_mem_entries: u64,
    #[arg(long, env = "SUBQUEST_SPILL_DIR")]
    spill_dir: Option<PathBuf>,
    /// Result file (JSON Lines); standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write exploration statistics and the configuration as JSON.
    #[arg(long)]
    stats_json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Edgelist,
    Lg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Problem {
    Clique,
    Mine,
    Iso,
}

/// Parses `args` (program name first), runs the command and returns the exit code:
/// 0 on success, 1 on usage errors, 2 on runtime errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Clique { input, run } => cmd_clique(&input, &run),
        Command::Mine { input, run, edges } => cmd_mine(&input, &run, edges as usize),
        Command::Iso {
            input,
            run,
            query,
            index,
            hops,
        } => cmd_iso(&input, &run, &query, index.as_deref(), hops),
        Command::Index {
            input,
            hops,
            out,
            threads,
        } => cmd_index(&input, hops, &out, threads),
        Command::Oracle {
            input,
            problem,
            k,
            edges,
            query,
            max_vertices,
            output,
        } => cmd_oracle(&input, problem, k as usize, edges, query.as_deref(), max_vertices, output.as_deref()),
    }
}

fn infer_format(path: &Path, format: Option<Format>) -> Format {
    format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("lg") => Format::Lg,
        _ => Format::Edgelist,
    })
}

fn load_graph(path: &Path, format: Option<Format>) -> Result<Graph> {
    let graph = match infer_format(path, format) {
        Format::Edgelist => load_edge_list(path)?,
        Format::Lg => load_lg(path)?,
    };
    Ok(graph)
}

#[derive(Serialize)]
struct ResultRecord {
    rank: usize,
    priority: Vec<f64>,
    vertices: Vec<u64>,
    edges: Vec<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pattern: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frequency: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    score: Option<u64>,
}

impl ResultRecord {
    fn new<'a>(
        graph: &Graph,
        rank: usize,
        priority: &Priority,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = &'a EdgeRef>,
    ) -> Self {
        let mut vs: Vec<u64> = vertices.into_iter().map(|v| graph.external_id(v)).collect();
        vs.sort_unstable();
        vs.dedup();
        let mut es: Vec<[u64; 2]> = edges
            .into_iter()
            .map(|e| {
                let (a, b) = (graph.external_id(e.u), graph.external_id(e.v));
                [a.min(b), a.max(b)]
            })
            .collect();
        es.sort_unstable();
        es.dedup();
        ResultRecord {
            rank,
            priority: priority.values().to_vec(),
            vertices: vs,
            edges: es,
            pattern: None,
            frequency: None,
            score: None,
        }
    }
}

#[derive(Serialize)]
struct QueueReport {
    mode: &'static str,
    max_mem_entries: u64,
    spills: u64,
    records_spilled: u64,
    peak_in_memory: usize,
    read_ops: u64,
}

#[derive(Serialize)]
struct StatsReport<'a> {
    command: &'static str,
    graph: String,
    format: Format,
    k: u64,
    prune: bool,
    priority: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    query: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hops: Option<u32>,
    results: usize,
    stats: &'a ExplorationStats,
    queue: QueueReport,
}

struct RunOutcome<T> {
    results: ResultSet<T>,
    stats: ExplorationStats,
    queue: Option<VpqStats>,
    elapsed_ms: f64,
}

fn run_config(run: &RunArgs) -> RunConfig {
    RunConfig {
        k: run.k as usize,
        prune: !run.no_prune,
    }
}

fn vpq_config(run: &RunArgs) -> VpqConfig {
    let dir = run.spill_dir.clone().unwrap_or_else(std::env::temp_dir);
    VpqConfig::new(run.max_mem_entries as usize, dir)
}

/// Runs `body` on the queue the flags ask for.
fn with_queue<T, R>(
    run: &RunArgs,
    body: impl FnOnce(&mut dyn SubgraphQueue<T>) -> Result<(ResultSet<R>, ExplorationStats)>,
) -> Result<RunOutcome<R>>
where
    T: Codec,
{
    let start = Instant::now();
    let (results, stats, queue) = if run.no_priority {
        let mut q = FifoQueue::new();
        let (r, s) = body(&mut q)?;
        (r, s, None)
    } else {
        let mut q = VirtualPriorityQueue::new(vpq_config(run))?;
        let (r, s) = body(&mut q)?;
        (r, s, Some(q.stats().clone()))
    };
    Ok(RunOutcome {
        results,
        stats,
        queue,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn basic<C>(graph: &Graph, comp: &C, run: &RunArgs) -> Result<RunOutcome<Subgraph<C::State>>>
where
    C: Computation,
    C::State: Codec,
{
    let config = run_config(run);
    with_queue(run, |q| Ok(run_basic(graph, comp, &config, q)?))
}

fn aggregate<C>(graph: &Graph, comp: &C, run: &RunArgs) -> Result<RunOutcome<Group<C>>>
where
    C: AggregateComputation,
    Group<C>: Codec,
{
    let config = run_config(run);
    with_queue(run, |q| Ok(run_aggregate(graph, comp, &config, q)?))
}

fn write_lines<T: Serialize>(records: &[T], output: Option<&Path>) -> Result<()> {
    let mut text = String::new();
    for record in records {
        text.push_str(&serde_json::to_string(record)?);
        text.push('\n');
    }
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

struct Extra {
    edges: Option<usize>,
    query: Option<String>,
    hops: Option<u32>,
}

fn report<T>(
    command: &'static str,
    input: &GraphArgs,
    run: &RunArgs,
    outcome: &RunOutcome<T>,
    extra: Extra,
) -> Result<()> {
    let s = &outcome.stats;
    let q = outcome.queue.clone().unwrap_or_default();
    eprintln!(
        "{command}: results={} candidates={} units={} dequeues={} pruned_parent={} pruned_child={} spills={} wall_ms={:.3}",
        outcome.results.len(),
        s.candidate_subgraphs,
        s.unit_subgraphs,
        s.dequeues,
        s.pruned_at_parent,
        s.pruned_at_child,
        q.spills,
        outcome.elapsed_ms
    );
    let Some(path) = &run.stats_json else {
        return Ok(());
    };
    let report = StatsReport {
        command,
        graph: input.graph.display().to_string(),
        format: infer_format(&input.graph, input.format),
        k: run.k,
        prune: !run.no_prune,
        priority: !run.no_priority,
        edges: extra.edges,
        query: extra.query,
        hops: extra.hops,
        results: outcome.results.len(),
        stats: s,
        queue: QueueReport {
            mode: if run.no_priority { "fifo" } else { "priority" },
            max_mem_entries: run.max_mem_entries,
            spills: q.spills,
            records_spilled: q.records_spilled,
            peak_in_memory: q.peak_in_memory,
            read_ops: q.read_ops,
        },
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn cmd_clique(input: &GraphArgs, run: &RunArgs) -> Result<()> {
    let graph = load_graph(&input.graph, input.format)?;
    let outcome = basic(&graph, &MaxClique, run)?;
    let records: Vec<ResultRecord> = outcome
        .results
        .entries()
        .iter()
        .enumerate()
        .map(|(n, (s, p))| ResultRecord::new(&graph, n + 1, p, s.vertices().iter().copied(), s.edges()))
        .collect();
    write_lines(&records, run.output.as_deref())?;
    report("clique", input, run, &outcome, Extra { edges: None, query: None, hops: None })
}

fn cmd_mine(input: &GraphArgs, run: &RunArgs, edges: usize) -> Result<()> {
    let graph = load_graph(&input.graph, input.format)?;
    if !graph.has_vertex_labels() {
        bail!(
            "pattern mining needs a vertex-labeled graph; {} has no labels (use LG format)",
            input.graph.display()
        );
    }
    let miner = PatternMining::new(edges)?;
    let outcome = aggregate(&graph, &miner, run)?;
    let records: Vec<ResultRecord> = outcome
        .results
        .entries()
        .iter()
        .enumerate()
        .map(|(n, (group, p))| {
            let members = group.members();
            let mut record = ResultRecord::new(
                &graph,
                n + 1,
                p,
                members.iter().flat_map(|s| s.vertices().iter().copied()),
                members.iter().flat_map(|s| s.edges()),
            );
            record.pattern = Some(group.key().to_string());
            record.frequency = Some(mni_support(group));
            record
        })
        .collect();
    write_lines(&records, run.output.as_deref())?;
    report("mine", input, run, &outcome, Extra { edges: Some(edges), query: None, hops: None })
}

fn load_query(path: &Path) -> Result<Graph> {
    load_graph(path, None).with_context(|| format!("cannot load query {}", path.display()))
}

fn cmd_iso(
    input: &GraphArgs,
    run: &RunArgs,
    query_path: &Path,
    index_path: Option<&Path>,
    hops: Option<u32>,
) -> Result<()> {
    let graph = load_graph(&input.graph, input.format)?;
    let query = load_query(query_path)?;
    let index = match index_path {
        Some(path) => VertexIndex::load(path)?,
        None => {
            let hops = match hops {
                Some(h) => h,
                None => required_hops(&query)?,
            };
            build_index(&graph, hops)?
        }
    };
    let used_hops = index.hops();
    let search = IsoSearch::new(&graph, query, index)?;
    let outcome = basic(&graph, &search, run)?;
    let records: Vec<ResultRecord> = outcome
        .results
        .entries()
        .iter()
        .enumerate()
        .map(|(n, (s, p))| {
            let mut record = ResultRecord::new(&graph, n + 1, p, s.vertices().iter().copied(), s.edges());
            record.score = Some(s.state.score);
            record
        })
        .collect();
    write_lines(&records, run.output.as_deref())?;
    let extra = Extra {
        edges: None,
        query: Some(query_path.display().to_string()),
        hops: Some(used_hops),
    };
    report("iso", input, run, &outcome, extra)
}

fn cmd_index(input: &GraphArgs, hops: u32, out: &Path, threads: Option<u32>) -> Result<()> {
    let graph = load_graph(&input.graph, input.format)?;
    let start = Instant::now();
    let index = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .context("cannot start worker threads")?
            .install(|| build_index(&graph, hops))?,
        None => build_index(&graph, hops)?,
    };
    index.save(out)?;
    eprintln!(
        "index: vertices={} entries={} hops={} wall_ms={:.3}",
        graph.vertex_count(),
        index.entry_count(),
        hops,
        start.elapsed().as_secs_f64() * 1e3
    );
    Ok(())
}

#[derive(Serialize)]
struct CliqueAnswer {
    size: usize,
    vertices: Vec<u64>,
}

#[derive(Serialize)]
struct PatternAnswer {
    pattern: String,
    frequency: usize,
}

#[derive(Serialize)]
struct MatchAnswer {
    rank: usize,
    score: u64,
    vertices: Vec<u64>,
    edges: Vec<[u64; 2]>,
}

fn cmd_oracle(
    input: &GraphArgs,
    problem: Problem,
    k: usize,
    edges: Option<u32>,
    query: Option<&Path>,
    max_vertices: usize,
    output: Option<&Path>,
) -> Result<()> {
    let graph = load_graph(&input.graph, input.format)?;
    let budget = EnumerationBudget {
        max_vertices,
        ..Default::default()
    };
    match problem {
        Problem::Clique => {
            let (size, witness) = brute_max_clique(&graph, &budget)?;
            let mut vertices: Vec<u64> = witness.iter().map(|&v| graph.external_id(v)).collect();
            vertices.sort_unstable();
            write_lines(&[CliqueAnswer { size, vertices }], output)
        }
        Problem::Mine => {
            let Some(m) = edges else {
                bail!("--edges is required for the mine oracle");
            };
            let mut table: Vec<PatternAnswer> = brute_pattern_freqs(&graph, m as usize, &budget)?
                .into_iter()
                .map(|(code, frequency)| PatternAnswer {
                    pattern: code.to_string(),
                    frequency,
                })
                .collect();
            table.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.pattern.cmp(&b.pattern)));
            write_lines(&table, output)
        }
        Problem::Iso => {
            let Some(path) = query else {
                bail!("--query is required for the iso oracle");
            };
            let q = load_query(path)?;
            let matches = brute_matches(&graph, &q, &budget)?;
            let kth = matches.get(k - 1).map(|m| m.2);
            let answers: Vec<MatchAnswer> = matches
                .into_iter()
                .take_while(|m| kth.is_none_or(|kth| m.2 >= kth))
                .enumerate()
                .map(|(n, (vs, es, score))| {
                    let record = ResultRecord::new(&graph, n + 1, &Priority::none(), vs, &es);
                    MatchAnswer {
                        rank: n + 1,
                        score,
                        vertices: record.vertices,
                        edges: record.edges,
                    }
                })
                .collect();
            write_lines(&answers, output)
        }
    }
}
