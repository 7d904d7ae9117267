//! The exploration engine: prioritized expansion of subgraphs with top-k results
//! and domination pruning, in a basic (per-subgraph) and an aggregate (per-group) form.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::queue::{QueueError, SubgraphQueue};

mod expansion;
mod priority;
mod result;
mod subgraph;

pub use expansion::{
    canonical_removal, edge_oriented_expansions, edges_into, is_canonical_extension,
    is_connected_edge_set, vertex_oriented_expansions,
};
pub use priority::{ArityMismatch, Priority};
pub use result::ResultSet;
pub use subgraph::{Subgraph, SubgraphGroup};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("priority arity changed within one run: expected {expected}, got {found}")]
    PriorityArity { expected: usize, found: usize },
    #[error("priority {0} has a non-finite component")]
    NonFinitePriority(Priority),
    #[error(transparent)]
    Queue(#[from] QueueError),
}

/// A computation explored one subgraph at a time.
///
/// Only `units`, `expansions` and `expand` are required; the remaining hooks
/// default to the exhaustive baseline (everything expandable and relevant, a
/// constant priority, nothing dominated).
pub trait Computation {
    type State: Clone;
    type Delta;

    fn units(&self, graph: &Graph) -> Vec<Subgraph<Self::State>>;

    fn expansions(&self, graph: &Graph, s: &Subgraph<Self::State>) -> Vec<Self::Delta>;

    fn expand(
        &self,
        graph: &Graph,
        s: &Subgraph<Self::State>,
        delta: &Self::Delta,
    ) -> Subgraph<Self::State>;

    fn expandable(&self, _graph: &Graph, _s: &Subgraph<Self::State>, _delta: &Self::Delta) -> bool {
        true
    }

    fn relevant(&self, _graph: &Graph, _s: &Subgraph<Self::State>) -> bool {
        true
    }

    fn priority(&self, _graph: &Graph, _s: &Subgraph<Self::State>) -> Priority {
        Priority::none()
    }

    /// True only if nothing reachable from `s` can reach the priority of `other`.
    fn dominated(&self, _s: &Subgraph<Self::State>, _other: &Subgraph<Self::State>) -> bool {
        false
    }
}

pub type Group<C> = SubgraphGroup<
    <C as AggregateComputation>::Key,
    <C as AggregateComputation>::State,
    <C as AggregateComputation>::Aggregate,
>;

/// A computation whose results are groups of subgraphs sharing a key.
pub trait AggregateComputation {
    type State: Clone;
    type Delta;
    type Key: Ord + Clone;
    type Aggregate: Clone;

    fn units(&self, graph: &Graph) -> Vec<Subgraph<Self::State>>;

    fn expansions(&self, graph: &Graph, s: &Subgraph<Self::State>) -> Vec<Self::Delta>;

    fn expand(
        &self,
        graph: &Graph,
        s: &Subgraph<Self::State>,
        delta: &Self::Delta,
    ) -> Subgraph<Self::State>;

    fn key(&self, graph: &Graph, s: &Subgraph<Self::State>) -> Self::Key;

    fn empty_aggregate(&self, key: &Self::Key) -> Self::Aggregate;

    fn absorb(&self, aggregate: &mut Self::Aggregate, s: &Subgraph<Self::State>);

    fn expandable(&self, _graph: &Graph, _s: &Subgraph<Self::State>, _delta: &Self::Delta) -> bool {
        true
    }

    fn relevant(&self, _group: &Group<Self>) -> bool {
        true
    }

    fn priority(&self, _group: &Group<Self>) -> Priority {
        Priority::none()
    }

    fn dominated(&self, _group: &Group<Self>, _other: &Group<Self>) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub k: usize,
    /// Consult `dominated`; disabling it gives the unpruned baseline.
    pub prune: bool,
}

impl RunConfig {
    pub fn top(k: usize) -> Self {
        RunConfig { k, prune: true }
    }

    pub fn without_pruning(mut self) -> Self {
        self.prune = false;
        self
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::top(1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExplorationStats {
    /// Every subgraph built, units included.
    pub candidate_subgraphs: u64,
    pub unit_subgraphs: u64,
    pub pruned_at_parent: u64,
    pub pruned_at_child: u64,
    pub dequeues: u64,
}

/// Hooks for watching a run, mostly useful in tests.
pub trait RunObserver<S> {
    fn on_candidate(&mut self, _s: &Subgraph<S>) {}
    fn on_dequeue(&mut self, _priority: &Priority) {}
}

impl<S> RunObserver<S> for () {}

struct PriorityCheck {
    arity: Option<usize>,
}

impl PriorityCheck {
    fn check(&mut self, p: Priority) -> Result<Priority, EngineError> {
        if !p.is_finite() {
            return Err(EngineError::NonFinitePriority(p));
        }
        match self.arity {
            Some(expected) if expected != p.arity() => Err(EngineError::PriorityArity {
                expected,
                found: p.arity(),
            }),
            _ => {
                self.arity = Some(p.arity());
                Ok(p)
            }
        }
    }
}

pub fn run_basic<C, Q>(
    graph: &Graph,
    comp: &C,
    config: &RunConfig,
    queue: &mut Q,
) -> Result<(ResultSet<Subgraph<C::State>>, ExplorationStats), EngineError>
where
    C: Computation + ?Sized,
    Q: SubgraphQueue<Subgraph<C::State>> + ?Sized,
{
    run_basic_observed(graph, comp, config, queue, &mut ())
}

pub fn run_basic_observed<C, Q, O>(
    graph: &Graph,
    comp: &C,
    config: &RunConfig,
    queue: &mut Q,
    observer: &mut O,
) -> Result<(ResultSet<Subgraph<C::State>>, ExplorationStats), EngineError>
where
    C: Computation + ?Sized,
    Q: SubgraphQueue<Subgraph<C::State>> + ?Sized,
    O: RunObserver<C::State> + ?Sized,
{
    if config.k == 0 {
        return Err(EngineError::InvalidK);
    }
    let mut results = ResultSet::new(config.k);
    let mut stats = ExplorationStats::default();
    let mut check = PriorityCheck { arity: None };

    for unit in comp.units(graph) {
        stats.candidate_subgraphs += 1;
        stats.unit_subgraphs += 1;
        observer.on_candidate(&unit);
        let p = check.check(comp.priority(graph, &unit))?;
        queue.enqueue(unit, p)?;
    }

    while let Some((s, p)) = queue.dequeue_max()? {
        stats.dequeues += 1;
        observer.on_dequeue(&p);
        if comp.relevant(graph, &s) && results.accepts(&p) {
            results.offer(s.clone(), p);
        }
        let kth = match results.kth() {
            Some((best, _)) if config.prune => Some(best),
            _ => None,
        };
        if kth.is_some_and(|best| comp.dominated(&s, best)) {
            stats.pruned_at_parent += 1;
            continue;
        }
        let mut children = Vec::new();
        for delta in comp.expansions(graph, &s) {
            if !comp.expandable(graph, &s, &delta) {
                continue;
            }
            let child = comp.expand(graph, &s, &delta);
            stats.candidate_subgraphs += 1;
            observer.on_candidate(&child);
            let cp = check.check(comp.priority(graph, &child))?;
            if kth.is_some_and(|best| comp.dominated(&child, best)) {
                stats.pruned_at_child += 1;
                continue;
            }
            children.push((child, cp));
        }
        for (child, cp) in children {
            queue.enqueue(child, cp)?;
        }
    }
    Ok((results, stats))
}

pub fn run_aggregate<C, Q>(
    graph: &Graph,
    comp: &C,
    config: &RunConfig,
    queue: &mut Q,
) -> Result<(ResultSet<Group<C>>, ExplorationStats), EngineError>
where
    C: AggregateComputation + ?Sized,
    Q: SubgraphQueue<Group<C>> + ?Sized,
{
    run_aggregate_observed(graph, comp, config, queue, &mut ())
}

pub fn run_aggregate_observed<C, Q, O>(
    graph: &Graph,
    comp: &C,
    config: &RunConfig,
    queue: &mut Q,
    observer: &mut O,
) -> Result<(ResultSet<Group<C>>, ExplorationStats), EngineError>
where
    C: AggregateComputation + ?Sized,
    Q: SubgraphQueue<Group<C>> + ?Sized,
    O: RunObserver<C::State> + ?Sized,
{
    if config.k == 0 {
        return Err(EngineError::InvalidK);
    }
    let mut results: ResultSet<Group<C>> = ResultSet::new(config.k);
    let mut stats = ExplorationStats::default();
    let mut check = PriorityCheck { arity: None };

    let mut groups: BTreeMap<C::Key, Group<C>> = BTreeMap::new();
    for unit in comp.units(graph) {
        stats.candidate_subgraphs += 1;
        stats.unit_subgraphs += 1;
        observer.on_candidate(&unit);
        add_to_group(graph, comp, &mut groups, unit);
    }
    for group in groups.into_values() {
        let p = check.check(comp.priority(&group))?;
        queue.enqueue(group, p)?;
    }

    while let Some((group, p)) = queue.dequeue_max()? {
        stats.dequeues += 1;
        observer.on_dequeue(&p);
        if comp.relevant(&group) && results.accepts(&p) {
            results.offer(group.clone(), p);
        }
        let kth = match results.kth() {
            Some((best, _)) if config.prune => Some(best),
            _ => None,
        };
        if kth.is_some_and(|best| comp.dominated(&group, best)) {
            stats.pruned_at_parent += 1;
            continue;
        }
        let mut fresh: BTreeMap<C::Key, Group<C>> = BTreeMap::new();
        for s in group.members() {
            for delta in comp.expansions(graph, s) {
                if !comp.expandable(graph, s, &delta) {
                    continue;
                }
                let child = comp.expand(graph, s, &delta);
                stats.candidate_subgraphs += 1;
                observer.on_candidate(&child);
                add_to_group(graph, comp, &mut fresh, child);
            }
        }
        let mut children = Vec::new();
        for child in fresh.into_values() {
            let cp = check.check(comp.priority(&child))?;
            if kth.is_some_and(|best| comp.dominated(&child, best)) {
                stats.pruned_at_child += 1;
                continue;
            }
            children.push((child, cp));
        }
        for (child, cp) in children {
            queue.enqueue(child, cp)?;
        }
    }
    Ok((results, stats))
}

fn add_to_group<C: AggregateComputation + ?Sized>(
    graph: &Graph,
    comp: &C,
    groups: &mut BTreeMap<C::Key, Group<C>>,
    s: Subgraph<C::State>,
) {
    let key = comp.key(graph, &s);
    groups
        .entry(key)
        .or_insert_with_key(|key| SubgraphGroup::new(key.clone(), comp.empty_aggregate(key)))
        .add(s, |aggregate, member| comp.absorb(aggregate, member));
}
