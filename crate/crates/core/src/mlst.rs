//! Exact enumeration of every labeled maximum leaf spanning tree.
//!
//! The interior (non-leaf part) of a maximum leaf spanning tree is a minimum
//! connected dominating set together with a spanning tree on it. The search
//! grows subtrees of a fixed size `n_S` from a set of roots, keeps the ones
//! whose vertices dominate the graph, and attaches every remaining vertex as
//! a leaf in all possible ways. `n_S` starts at 1 and grows until something
//! is found, so the first non-empty level is optimal.
//!
//! Roots are a minimum-degree vertex and its neighbors: every dominating set
//! contains one of them. Each root search forbids the roots already used at
//! the same level, so every tree is produced by exactly one root.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::{EdgeSet, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{Cut, ShellGraph};

/// Default recursion-node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000_000;

/// Partial subtree being grown by the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    /// `V_T`
    pub tree_vertices: VertexSet,
    /// `E_T`
    pub tree_edges: EdgeSet,
    /// `E_A`, consumed first-in-first-out.
    pub frontier: Vec<usize>,
    /// `V_excl`: vertices that may not join the subtree.
    pub excluded: VertexSet,
    /// `n_S`
    pub target_size: usize,
}

impl SearchState {
    /// A single-vertex subtree at `root`, with the root's edges to
    /// non-excluded neighbors as frontier.
    pub fn rooted(
        graph: &ShellGraph,
        root: usize,
        excluded: VertexSet,
        target_size: usize,
    ) -> Self {
        let frontier = graph
            .incident(root)
            .iter()
            .filter(|(w, _)| !excluded.contains(*w))
            .map(|&(_, e)| e)
            .collect();
        SearchState {
            tree_vertices: VertexSet::singleton(root),
            tree_edges: EdgeSet::new(),
            frontier,
            excluded,
            target_size,
        }
    }

    /// Verifies the tree shape of `(V_T, E_T)` and the exclusion rules.
    ///
    /// A subtree seeded with a cycle (hole boundaries) has one edge more than
    /// a tree; `seed_cycles` says how many independent cycles to allow.
    pub fn check_invariants(&self, graph: &ShellGraph, seed_cycles: usize) -> Result<()> {
        let vt = self.tree_vertices;
        if self.tree_edges.len() + 1 != vt.len() + seed_cycles {
            return Err(Error::InvalidCut(format!(
                "{} edges on {} vertices",
                self.tree_edges.len(),
                vt.len()
            )));
        }
        if !graph.endpoints(&self.tree_edges).is_subset(&vt) {
            return Err(Error::InvalidCut("tree edge leaves V_T".into()));
        }
        if let Some(v) = vt.first() {
            if !graph
                .component_of(v, &self.tree_edges)
                .intersection(&vt)
                .eq(&vt)
            {
                return Err(Error::InvalidCut("V_T is not connected by E_T".into()));
            }
        }
        if vt.intersects(&self.excluded) {
            return Err(Error::InvalidCut("V_T meets V_excl".into()));
        }
        for &e in &self.frontier {
            let (a, b) = graph.edge(e);
            if self.excluded.contains(a) || self.excluded.contains(b) {
                return Err(Error::InvalidCut(format!(
                    "frontier edge {e} reaches V_excl"
                )));
            }
        }
        Ok(())
    }
}

/// Search limits and scheduling.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum number of recursion nodes over the whole run.
    pub node_budget: u64,
    pub time_limit: Option<Duration>,
    /// Run independent branches on the rayon pool.
    pub parallel: bool,
    /// Depth below each root at which branches are split into parallel tasks.
    pub split_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            time_limit: None,
            parallel: true,
            split_depth: 3,
        }
    }
}

impl SearchConfig {
    pub fn serial() -> Self {
        SearchConfig {
            parallel: false,
            ..Self::default()
        }
    }
}

/// Work done at one interior size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub interior_size: usize,
    pub nodes_visited: u64,
    pub dominating_subtrees: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub levels: Vec<LevelStats>,
    /// Wall time; not part of any reproducible output.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// All labeled maximum leaf spanning trees of a graph.
#[derive(Clone, Debug)]
pub struct MlstResult {
    /// `L`
    pub leaf_count: usize,
    /// `n_S = V - L`
    pub interior_size: usize,
    /// Canonically sorted cuts, each with exactly `leaf_count` leaves.
    pub cuts: Vec<Cut>,
    /// Number of minimum dominating subtrees (interiors) found.
    pub interior_count: u64,
    pub stats: SearchStats,
}

/// True iff every vertex is in `set` or adjacent to a vertex of `set`.
pub fn is_dominating(graph: &ShellGraph, set: &VertexSet) -> bool {
    dominated_by(graph, set) == graph.all_vertices()
}

/// Closed neighborhood of a vertex set.
pub fn dominated_by(graph: &ShellGraph, set: &VertexSet) -> VertexSet {
    set.iter()
        .fold(*set, |acc, v| acc.union(&graph.neighbor_set(v)))
}

/// Attaches every vertex outside `interior` to the interior by one edge, in
/// all possible ways. The count is the product over outside vertices of
/// their number of edges into the interior.
pub fn expand_interior(
    graph: &ShellGraph,
    interior: &VertexSet,
    interior_edges: &EdgeSet,
) -> Vec<Cut> {
    let mut out = Vec::new();
    expand_into(graph, interior, interior_edges, &mut out);
    out.into_iter().map(Cut).collect()
}

/// Number of trees [`expand_interior`] would produce.
pub fn expansion_count(graph: &ShellGraph, interior: &VertexSet) -> u128 {
    graph
        .all_vertices()
        .difference(interior)
        .iter()
        .map(|i| graph.neighbor_set(i).intersection(interior).len() as u128)
        .product()
}

fn expand_into(
    graph: &ShellGraph,
    interior: &VertexSet,
    interior_edges: &EdgeSet,
    out: &mut Vec<EdgeSet>,
) {
    let start = out.len();
    out.push(*interior_edges);
    for i in graph.all_vertices().difference(interior).iter() {
        let options: Vec<usize> = graph
            .incident(i)
            .iter()
            .filter(|(j, _)| interior.contains(*j))
            .map(|&(_, e)| e)
            .collect();
        match options.as_slice() {
            [] => {
                out.truncate(start);
                return;
            }
            [e] => {
                for t in &mut out[start..] {
                    t.insert(*e);
                }
            }
            _ => {
                let partial: Vec<EdgeSet> = out.drain(start..).collect();
                for &e in &options {
                    for t in &partial {
                        let mut t = *t;
                        t.insert(e);
                        out.push(t);
                    }
                }
            }
        }
    }
}

/// Shared node and time accounting for one enumeration run.
pub(crate) struct Budget {
    limit: u64,
    deadline: Option<(Instant, Duration)>,
    used: AtomicU64,
    aborted: AtomicBool,
}

const FLUSH_EVERY: u64 = 4096;

impl Budget {
    pub(crate) fn new(config: &SearchConfig) -> Self {
        Budget {
            limit: config.node_budget,
            deadline: config.time_limit.map(|t| (Instant::now(), t)),
            used: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        }
    }

    fn unlimited() -> Self {
        Budget {
            limit: u64::MAX,
            deadline: None,
            used: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        }
    }

    /// Adds `n` nodes; false once the run must stop.
    fn charge(&self, n: u64) -> bool {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        let expired = self
            .deadline
            .is_some_and(|(start, limit)| start.elapsed() > limit);
        if total > self.limit || expired {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    pub(crate) fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    fn timed_out(&self) -> bool {
        self.deadline
            .is_some_and(|(start, limit)| start.elapsed() > limit)
    }

    pub(crate) fn error(&self, interior_size: usize, found: u64) -> Error {
        match self.deadline {
            Some((_, limit)) if self.timed_out() => Error::TimeLimitExceeded {
                limit,
                interior_size,
            },
            _ => Error::BudgetExceeded {
                budget: self.limit,
                nodes_visited: self.used(),
                interior_size,
                found,
            },
        }
    }
}

pub(crate) struct Aborted;

/// Output of one rooted search.
#[derive(Default)]
pub(crate) struct Harvest {
    pub(crate) trees: Vec<EdgeSet>,
    pub(crate) interiors: u64,
    pub(crate) nodes: u64,
}

impl Harvest {
    fn merge(mut self, other: Harvest) -> Harvest {
        self.trees.extend(other.trees);
        self.interiors += other.interiors;
        self.nodes += other.nodes;
        self
    }
}

/// A subtree snapshot handed to a worker.
struct Task {
    vt: VertexSet,
    et: EdgeSet,
    dominated: VertexSet,
    frontier: Vec<u16>,
}

/// The recursive subtree grower for one `(n_S, V_excl)` pair.
pub(crate) struct Grower<'a> {
    graph: &'a ShellGraph,
    target: usize,
    excluded: VertexSet,
    all: VertexSet,
    /// Upper bound on the number of newly dominated vertices one added
    /// vertex can contribute.
    gain: usize,
    expand: bool,
    budget: &'a Budget,
}

struct Local<'b> {
    buf: Vec<u16>,
    harvest: Harvest,
    pending: u64,
    budget: &'b Budget,
}

impl Local<'_> {
    #[inline]
    fn tick(&mut self) -> Result<(), Aborted> {
        self.harvest.nodes += 1;
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            let n = std::mem::take(&mut self.pending);
            if !self.budget.charge(n) {
                return Err(Aborted);
            }
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), Aborted> {
        let n = std::mem::take(&mut self.pending);
        if self.budget.charge(n) {
            Ok(())
        } else {
            Err(Aborted)
        }
    }
}

impl<'a> Grower<'a> {
    pub(crate) fn new(
        graph: &'a ShellGraph,
        target: usize,
        excluded: VertexSet,
        expand: bool,
        budget: &'a Budget,
    ) -> Self {
        let all = graph.all_vertices();
        let gain = all
            .difference(&excluded)
            .iter()
            .map(|v| graph.degree(v).saturating_sub(1))
            .max()
            .unwrap_or(0);
        Grower {
            graph,
            target,
            excluded,
            all,
            gain,
            expand,
            budget,
        }
    }

    /// Whether a subtree can still grow into a dominating one.
    #[inline]
    fn hopeless(&self, size: usize, dominated: &VertexSet) -> bool {
        let missing = self.all.len() - dominated.len();
        missing > (self.target - size) * self.gain
    }

    /// Runs the search below `state`, serially or split into parallel tasks.
    pub(crate) fn run(
        &self,
        state: &SearchState,
        config: &SearchConfig,
    ) -> Result<Harvest, Aborted> {
        let dominated = dominated_by(self.graph, &state.tree_vertices);
        let frontier: Vec<u16> = state.frontier.iter().map(|&e| e as u16).collect();
        if !config.parallel {
            let mut local = self.local(frontier);
            let end = local.buf.len();
            self.grow(
                state.tree_vertices,
                state.tree_edges,
                dominated,
                0,
                end,
                &mut local,
            )?;
            local.flush()?;
            return Ok(local.harvest);
        }
        let mut tasks = Vec::new();
        let mut head = self.local(Vec::new());
        self.split(
            Task {
                vt: state.tree_vertices,
                et: state.tree_edges,
                dominated,
                frontier,
            },
            config.split_depth,
            &mut tasks,
            &mut head,
        )?;
        head.flush()?;
        let results: Vec<Result<Harvest, Aborted>> = tasks
            .into_par_iter()
            .map(|task| {
                let mut local = self.local(task.frontier);
                let end = local.buf.len();
                self.grow(task.vt, task.et, task.dominated, 0, end, &mut local)?;
                local.flush()?;
                Ok(local.harvest)
            })
            .collect();
        let mut total = head.harvest;
        for r in results {
            total = total.merge(r?);
        }
        Ok(total)
    }

    fn local(&self, buf: Vec<u16>) -> Local<'a> {
        Local {
            buf,
            harvest: Harvest::default(),
            pending: 0,
            budget: self.budget,
        }
    }

    /// Expands the top `depth` levels into independent tasks. Node counts
    /// match the serial recursion exactly.
    fn split(
        &self,
        task: Task,
        depth: usize,
        tasks: &mut Vec<Task>,
        head: &mut Local,
    ) -> Result<(), Aborted> {
        let size = task.vt.len();
        if depth == 0 || size >= self.target {
            tasks.push(task);
            return Ok(());
        }
        head.tick()?;
        if self.hopeless(size, &task.dominated) {
            return Ok(());
        }
        for p in 0..task.frontier.len() {
            let e = task.frontier[p] as usize;
            let Some(i) = self.newcomer(&task.vt, e) else {
                continue;
            };
            let mut frontier = task.frontier[p + 1..].to_vec();
            self.push_new_edges(i, &task.vt, e, &mut frontier);
            let mut vt = task.vt;
            vt.insert(i);
            let mut et = task.et;
            et.insert(e);
            let dominated = task.dominated.union(&self.graph.neighbor_set(i));
            self.split(
                Task {
                    vt,
                    et,
                    dominated,
                    frontier,
                },
                depth - 1,
                tasks,
                head,
            )?;
        }
        Ok(())
    }

    /// The endpoint of frontier edge `e` outside the subtree, if any.
    #[inline]
    fn newcomer(&self, vt: &VertexSet, e: usize) -> Option<usize> {
        let (j, k) = self.graph.edge(e);
        if !vt.contains(k) {
            Some(k)
        } else if !vt.contains(j) {
            Some(j)
        } else {
            None
        }
    }

    /// Appends the edges of the newly added vertex `i` to the frontier.
    /// Edges back into the subtree are skipped: they could only close a loop.
    #[inline]
    fn push_new_edges(&self, i: usize, vt: &VertexSet, via: usize, frontier: &mut Vec<u16>) {
        for &(l, e) in self.graph.incident(i) {
            if e != via && !vt.contains(l) && !self.excluded.contains(l) {
                frontier.push(e as u16);
            }
        }
    }

    /// The recursive step. The frontier is `local.buf[start..end]`.
    fn grow(
        &self,
        vt: VertexSet,
        et: EdgeSet,
        dominated: VertexSet,
        start: usize,
        end: usize,
        local: &mut Local,
    ) -> Result<(), Aborted> {
        local.tick()?;
        let size = vt.len();
        if size < self.target {
            if self.hopeless(size, &dominated) {
                return Ok(());
            }
            for p in start..end {
                let e = local.buf[p] as usize;
                let Some(i) = self.newcomer(&vt, e) else {
                    continue;
                };
                let mark = local.buf.len();
                local.buf.extend_from_within(p + 1..end);
                for &(l, f) in self.graph.incident(i) {
                    if f != e && !vt.contains(l) && !self.excluded.contains(l) {
                        local.buf.push(f as u16);
                    }
                }
                let child_end = local.buf.len();
                let mut vt2 = vt;
                vt2.insert(i);
                let mut et2 = et;
                et2.insert(e);
                let dom2 = dominated.union(&self.graph.neighbor_set(i));
                let flow = self.grow(vt2, et2, dom2, mark, child_end, local);
                local.buf.truncate(mark);
                flow?;
            }
            Ok(())
        } else {
            if dominated == self.all {
                local.harvest.interiors += 1;
                if self.expand {
                    expand_into(self.graph, &vt, &et, &mut local.harvest.trees);
                }
            }
            Ok(())
        }
    }
}

/// Runs the recursive search from `state` and returns every spanning tree
/// obtained by expanding each dominating subtree of size `n_S` it reaches.
pub fn grow_recursive(state: &SearchState, graph: &ShellGraph) -> Vec<Cut> {
    let budget = Budget::unlimited();
    let grower = Grower::new(graph, state.target_size, state.excluded, true, &budget);
    let harvest = grower
        .run(state, &SearchConfig::serial())
        .unwrap_or_else(|_| unreachable!("unlimited budget"));
    harvest.trees.into_iter().map(Cut).collect()
}

/// A minimum-degree vertex (lowest index on ties) followed by its neighbors.
pub fn root_set(graph: &ShellGraph) -> Vec<usize> {
    let v = (0..graph.vertex_count())
        .min_by_key(|&v| (graph.degree(v), v))
        .expect("non-empty graph");
    std::iter::once(v)
        .chain(graph.neighbors(v).iter().copied())
        .collect()
}

/// Searches one level `n_S` over every root, accumulating `V_excl`.
fn search_level(
    graph: &ShellGraph,
    roots: &[usize],
    target: usize,
    expand: bool,
    config: &SearchConfig,
    budget: &Budget,
) -> Result<Harvest, Aborted> {
    let mut excluded = VertexSet::new();
    let mut total = Harvest::default();
    for &r in roots {
        let grower = Grower::new(graph, target, excluded, expand, budget);
        let state = SearchState::rooted(graph, r, excluded, target);
        total = total.merge(grower.run(&state, config)?);
        excluded.insert(r);
    }
    Ok(total)
}

/// Enumerates all labeled maximum leaf spanning trees with default limits.
pub fn enumerate_mlsts(graph: &ShellGraph) -> Result<MlstResult> {
    enumerate_mlsts_with(graph, &SearchConfig::default())
}

pub fn enumerate_mlsts_with(graph: &ShellGraph, config: &SearchConfig) -> Result<MlstResult> {
    let started = Instant::now();
    let v = graph.vertex_count();
    if v < 2 {
        return Err(Error::EmptyInput("graph needs at least two vertices"));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    if v == 2 {
        let stats = SearchStats {
            elapsed: started.elapsed(),
            ..Default::default()
        };
        return Ok(MlstResult {
            leaf_count: 2,
            interior_size: 0,
            cuts: vec![Cut(EdgeSet::full(1))],
            interior_count: 1,
            stats,
        });
    }
    let roots = root_set(graph);
    let budget = Budget::new(config);
    let mut stats = SearchStats::default();
    for target in 1..=v {
        let before = budget.used();
        let harvest = search_level(graph, &roots, target, true, config, &budget)
            .map_err(|_| budget.error(target, 0))?;
        stats.levels.push(LevelStats {
            interior_size: target,
            nodes_visited: budget.used() - before,
            dominating_subtrees: harvest.interiors,
        });
        if harvest.trees.is_empty() {
            continue;
        }
        stats.nodes_visited = budget.used();
        stats.elapsed = started.elapsed();
        let mut cuts: Vec<Cut> = harvest.trees.into_iter().map(Cut).collect();
        cuts.sort_unstable();
        let leaf_count = v - target;
        debug_assert!(cuts.windows(2).all(|w| w[0] != w[1]), "duplicate cut");
        debug_assert!(cuts.iter().all(|c| c.is_spanning_tree(graph)
            && c.leaf_count(graph) == leaf_count
            && roots.iter().any(|&r| graph.degrees_in(c.edges())[r] > 1)));
        return Ok(MlstResult {
            leaf_count,
            interior_size: target,
            cuts,
            interior_count: harvest.interiors,
            stats,
        });
    }
    unreachable!("a connected graph always has a dominating subtree")
}

/// Number of dominating subtrees with `n_S` vertices, counted once each
/// through the root set. Zero at `n_S = V - L - 1` certifies optimality.
pub fn count_dominating_subtrees(
    graph: &ShellGraph,
    target: usize,
    config: &SearchConfig,
) -> Result<u64> {
    if target == 0 {
        return Ok(0);
    }
    let budget = Budget::new(config);
    let roots = root_set(graph);
    search_level(graph, &roots, target, false, config, &budget)
        .map(|h| h.interiors)
        .map_err(|_| budget.error(target, 0))
}

/// Local heuristic: seed at a highest-degree vertex with all its neighbors,
/// then repeatedly take the tree vertex with the most neighbors outside the
/// tree and attach them all. Ties go to the lowest vertex index.
pub fn greedy_mlst(graph: &ShellGraph) -> Cut {
    let v = graph.vertex_count();
    let mut cut = EdgeSet::new();
    if v == 0 {
        return Cut(cut);
    }
    let seed = (0..v)
        .max_by_key(|&u| (graph.degree(u), std::cmp::Reverse(u)))
        .unwrap();
    let mut in_tree = VertexSet::singleton(seed);
    let attach = |u: usize, in_tree: &mut VertexSet, cut: &mut EdgeSet| {
        for &(w, e) in graph.incident(u) {
            if in_tree.insert(w) {
                cut.insert(e);
            }
        }
    };
    attach(seed, &mut in_tree, &mut cut);
    while in_tree.len() < v {
        let outside = |u: usize| graph.neighbor_set(u).difference(&in_tree).len();
        let best = in_tree
            .iter()
            .max_by_key(|&u| (outside(u), std::cmp::Reverse(u)))
            .unwrap();
        if outside(best) == 0 {
            break; // disconnected input
        }
        attach(best, &mut in_tree, &mut cut);
    }
    Cut(cut)
}
