//! Exhaustive cycle-length search.
//!
//! Every simple cycle through the identity is reachable by a depth-first walk
//! from the identity; vertex-transitivity makes that anchor sufficient. The
//! walk is split into tasks, one per simple path of `spawn_depth` edges, and
//! the tasks run on a worker pool sharing a [`FoundLengths`] table.
//!
//! A partial path is abandoned when no still-missing length can be closed
//! from it: the shortest return to the identity through unvisited vertices
//! gives a lower limit, and the number of unvisited vertices that lie on some
//! such return gives an upper limit. Since only lengths that are already
//! found are ever excluded, the final length set does not depend on
//! scheduling.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DenseGraph, GraphParams};
use crate::group::{EdgeLabel, GenPerm};
use crate::witness::{write_witness, CycleWitness, MIN_CYCLE_LENGTH};

/// Largest graph the single-threaded reference search accepts by default.
pub const ORACLE_VERTEX_CAP: u64 = 200;
/// Upper limit on worker threads.
pub const MAX_THREADS: usize = 256;
pub const DEFAULT_SPAWN_DEPTH: usize = 4;

/// Lengths found so far plus the top-down search bound.
///
/// Marks are permanent. The bound starts at the largest length of interest
/// and drops to `k − 1` once every length in `[k, max]` is marked.
#[derive(Debug)]
pub struct FoundLengths {
    bits: Vec<AtomicU64>,
    min: usize,
    max: usize,
    bound: AtomicUsize,
}

impl FoundLengths {
    pub fn new(min: usize, max: usize) -> Self {
        FoundLengths {
            bits: (0..max / 64 + 1).map(|_| AtomicU64::new(0)).collect(),
            min,
            max,
            bound: AtomicUsize::new(max),
        }
    }

    pub fn contains(&self, len: usize) -> bool {
        len <= self.max && self.bits[len / 64].load(Ordering::Acquire) & (1 << (len % 64)) != 0
    }

    /// Marks `len`; true if it was not marked before.
    pub fn mark(&self, len: usize) -> bool {
        if len < self.min || len > self.max {
            return false;
        }
        let bit = 1u64 << (len % 64);
        let prev = self.bits[len / 64].fetch_or(bit, Ordering::AcqRel);
        if prev & bit != 0 {
            return false;
        }
        let mut b = self.bound.load(Ordering::Acquire);
        while b >= self.min.max(1) && self.contains(b) {
            b -= 1;
        }
        self.bound.fetch_min(b, Ordering::AcqRel);
        true
    }

    /// Largest length that may still be missing.
    pub fn bound(&self) -> usize {
        self.bound.load(Ordering::Acquire)
    }

    pub fn lengths(&self) -> BTreeSet<usize> {
        (self.min..=self.max)
            .filter(|&l| self.contains(l))
            .collect()
    }
}

/// Parameters of a [`parallel_cycle_search`] run.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub params: GraphParams,
    pub threads: usize,
    pub spawn_depth: usize,
    pub min_length: usize,
    /// Defaults to the vertex count.
    pub max_length: Option<usize>,
    /// Wall-clock budget; `None` runs to exhaustion.
    pub budget: Option<Duration>,
}

impl SearchConfig {
    pub fn new(params: GraphParams) -> Self {
        SearchConfig {
            params,
            threads: 1,
            spawn_depth: DEFAULT_SPAWN_DEPTH,
            min_length: MIN_CYCLE_LENGTH,
            max_length: None,
            budget: None,
        }
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn spawn_depth(mut self, depth: usize) -> Self {
        self.spawn_depth = depth;
        self
    }

    pub fn budget(mut self, budget: Option<Duration>) -> Self {
        self.budget = budget;
        self
    }

    pub fn length_range(mut self, min: usize, max: usize) -> Self {
        self.min_length = min;
        self.max_length = Some(max);
        self
    }

    fn max_len(&self) -> usize {
        self.max_length
            .unwrap_or(self.params.vertex_count() as usize)
    }

    fn validate(&self) -> Result<()> {
        if self.threads == 0 || self.threads > MAX_THREADS {
            return Err(Error::Config(format!(
                "thread count {} outside [1, {MAX_THREADS}]",
                self.threads
            )));
        }
        let max = self.max_len();
        if max > self.params.vertex_count() as usize {
            return Err(Error::Config(format!(
                "max length {max} exceeds vertex count {}",
                self.params.vertex_count()
            )));
        }
        if self.min_length < MIN_CYCLE_LENGTH || self.min_length > max {
            return Err(Error::Config(format!(
                "length range [{}, {max}] is empty or below {MIN_CYCLE_LENGTH}",
                self.min_length
            )));
        }
        if self.spawn_depth > max {
            return Err(Error::Config(format!(
                "spawn depth {} exceeds max length {max}",
                self.spawn_depth
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub tasks: usize,
    pub nodes: u64,
    /// Longest partial path (in edges) ever extended.
    pub max_depth: usize,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub params: GraphParams,
    pub lengths: BTreeSet<usize>,
    /// First witness found for each length.
    pub witnesses: BTreeMap<usize, CycleWitness>,
    /// True when the search space was fully explored (no budget cut-off).
    pub exhausted: bool,
    pub wall_seconds: f64,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn summary(&self) -> SearchSummary {
        SearchSummary {
            params: self.params,
            lengths_found: self.lengths.iter().copied().collect(),
            exhausted: self.exhausted,
            wall_seconds: self.wall_seconds,
        }
    }
}

/// Result summary object written next to witness files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub params: GraphParams,
    pub lengths_found: Vec<usize>,
    pub exhausted: bool,
    pub wall_seconds: f64,
}

struct Shared<'a> {
    graph: &'a DenseGraph,
    found: FoundLengths,
    even_only: bool,
    min_len: usize,
    root: u32,
    stop: AtomicBool,
    timed_out: AtomicBool,
    started: Instant,
    budget: Option<Duration>,
    nodes: AtomicU64,
    max_depth: AtomicUsize,
    witnesses: mpsc::Sender<CycleWitness>,
}

impl Shared<'_> {
    fn wanted(&self, len: usize) -> bool {
        len >= self.min_len && !(self.even_only && len % 2 == 1) && !self.found.contains(len)
    }

    /// Is any still-missing length in `[lo, hi]`?
    fn any_wanted(&self, lo: usize, hi: usize) -> bool {
        let hi = hi.min(self.found.bound());
        (lo.max(self.min_len)..=hi).any(|l| self.wanted(l))
    }

    fn witness(&self, path: &[u32], labels: &[u8], closing: u8) -> CycleWitness {
        debug_assert_eq!(path.len(), labels.len() + 1);
        let all = self.graph.labels();
        let mut word: Vec<EdgeLabel> = labels.iter().map(|&k| all[k as usize]).collect();
        word.push(all[closing as usize]);
        let params = *self.graph.params();
        CycleWitness::new(params, params.identity(), word)
    }

    fn close(&self, path: &[u32], labels: &[u8], v: u32) {
        let depth = path.len() - 1;
        let len = depth + 1;
        if len < self.min_len || !self.wanted(len) {
            return;
        }
        if let Some(k) = self.graph.out(v).iter().position(|&w| w == self.root) {
            if self.found.mark(len) {
                let _ = self.witnesses.send(self.witness(path, labels, k as u8));
            }
        }
    }
}

struct Task {
    path: Vec<u32>,
    labels: Vec<u8>,
}

struct Worker<'s, 'g> {
    shared: &'s Shared<'g>,
    visited: Vec<bool>,
    path: Vec<u32>,
    labels: Vec<u8>,
    stamp: Vec<u32>,
    epoch: u32,
    dist: Vec<u32>,
    parent_tally: Vec<u32>,
    child_tally: Vec<u32>,
    queue: Vec<u32>,
    unvisited: usize,
    nodes: u64,
    max_depth: usize,
}

impl<'s, 'g> Worker<'s, 'g> {
    fn new(shared: &'s Shared<'g>) -> Self {
        let v = shared.graph.vertex_count();
        Worker {
            shared,
            visited: vec![false; v],
            path: Vec::new(),
            labels: Vec::new(),
            stamp: vec![0; v],
            epoch: 0,
            dist: vec![0; v],
            parent_tally: vec![0; v],
            child_tally: vec![0; v],
            queue: Vec::with_capacity(v),
            unvisited: v,
            nodes: 0,
            max_depth: 0,
        }
    }

    fn push(&mut self, v: u32, label: Option<u8>) {
        self.visited[v as usize] = true;
        self.unvisited -= 1;
        self.path.push(v);
        if let Some(l) = label {
            self.labels.push(l);
        }
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("non-empty path");
        self.visited[v as usize] = false;
        self.unvisited += 1;
        self.labels.pop();
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Can a still-missing length be closed by extending the current path,
    /// whose last vertex is `v` at depth `d`?
    fn feasible(&mut self, v: u32, d: usize) -> bool {
        let shared = self.shared;
        if !shared.any_wanted(d + 1, d + 1 + self.unvisited) {
            return false;
        }
        let g = shared.graph;
        let root = shared.root;

        // Backward BFS from the root through unvisited vertices; `v` is the
        // only visited vertex allowed as an endpoint.
        let back = self.next_epoch();
        self.queue.clear();
        self.queue.push(root);
        self.stamp[root as usize] = back;
        self.dist[root as usize] = 0;
        let mut head = 0;
        let mut v_dist = None;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for &y in g.inn(x) {
                if y == v && v_dist.is_none() {
                    v_dist = Some(self.dist[x as usize] + 1);
                }
                if self.visited[y as usize] || self.stamp[y as usize] == back {
                    continue;
                }
                self.stamp[y as usize] = back;
                self.dist[y as usize] = self.dist[x as usize] + 1;
                self.queue.push(y);
            }
        }
        let Some(v_dist) = v_dist else {
            return false;
        };
        let lo = d + v_dist as usize;

        // Forward BFS from `v` restricted to vertices that can still reach
        // the root.
        let fwd = self.next_epoch();
        self.queue.clear();
        self.queue.push(v);
        let mut head = 0;
        let mut reach = 0usize;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for &y in g.out(x) {
                let s = self.stamp[y as usize];
                if s == back {
                    self.stamp[y as usize] = fwd;
                    if y != root {
                        reach += 1;
                        self.queue.push(y);
                    }
                }
            }
        }
        // Descending only helps for lengths of at least d + 2.
        let lo = lo.max(d + 2);
        if reach == 0 || !shared.any_wanted(lo, d + 1 + reach) {
            return false;
        }
        let hi = d + 1 + reach - self.forced_exclusions(v, fwd);
        shared.any_wanted(lo, hi)
    }

    /// Lower bound on the number of vertices stamped `fwd` that cannot all
    /// lie on one path from `v` to the root.
    ///
    /// A vertex whose only usable predecessor is `p` needs the edge from `p`,
    /// and `p` can serve at most one such vertex. The same holds for vertices
    /// with a single usable successor.
    fn forced_exclusions(&mut self, v: u32, fwd: u32) -> usize {
        let g = self.shared.graph;
        let root = self.shared.root;
        let reachable = &self.queue[1..];
        for &x in reachable.iter().chain([&v, &root]) {
            self.parent_tally[x as usize] = 0;
            self.child_tally[x as usize] = 0;
        }
        let live = |x: u32| x != root && (x == v || self.stamp[x as usize] == fwd);
        let mut parent_excess = 0;
        let mut child_excess = 0;
        for &y in reachable {
            if let Some(p) = sole(g.inn(y), y, live) {
                if self.parent_tally[p as usize] > 0 {
                    parent_excess += 1;
                }
                self.parent_tally[p as usize] += 1;
            }
            if let Some(c) = sole(g.out(y), y, |x| x == root || live(x)) {
                if self.child_tally[c as usize] > 0 {
                    child_excess += 1;
                }
                self.child_tally[c as usize] += 1;
            }
        }
        parent_excess.max(child_excess)
    }

    fn run(&mut self, task: &Task) {
        self.path.clear();
        self.labels.clear();
        for (k, &v) in task.path.iter().enumerate() {
            let label = if k == 0 {
                None
            } else {
                Some(task.labels[k - 1])
            };
            self.push(v, label);
        }
        self.dfs();
        while !self.path.is_empty() {
            self.pop();
        }
        self.shared.nodes.fetch_add(self.nodes, Ordering::Relaxed);
        self.shared
            .max_depth
            .fetch_max(self.max_depth, Ordering::Relaxed);
        self.nodes = 0;
    }

    fn check_budget(&self) {
        let shared = self.shared;
        if let Some(b) = shared.budget {
            if shared.started.elapsed() > b {
                shared.timed_out.store(true, Ordering::Relaxed);
                shared.stop.store(true, Ordering::Relaxed);
            }
        }
        if !shared.any_wanted(shared.min_len, shared.found.bound()) {
            shared.stop.store(true, Ordering::Relaxed);
        }
    }

    /// Iterative DFS from the last vertex of the current path.
    fn dfs(&mut self) {
        let shared = self.shared;
        let g = shared.graph;
        let base = self.path.len();
        // Per-level cursor into the label list.
        let mut cursors: Vec<u8> = Vec::with_capacity(g.vertex_count());
        if !self.enter() {
            return;
        }
        cursors.push(0);
        while let Some(cursor) = cursors.last_mut() {
            if shared.stop.load(Ordering::Relaxed) {
                return;
            }
            let v = *self.path.last().expect("path tracks cursors");
            let k = *cursor as usize;
            if k >= g.degree() {
                cursors.pop();
                if self.path.len() > base {
                    self.pop();
                }
                continue;
            }
            *cursor += 1;
            let w = g.out(v)[k];
            if self.visited[w as usize] {
                continue;
            }
            self.push(w, Some(k as u8));
            if self.enter() {
                cursors.push(0);
            } else {
                self.pop();
            }
        }
    }

    /// Handles arrival at the current last vertex; returns whether to descend.
    fn enter(&mut self) -> bool {
        let shared = self.shared;
        let v = *self.path.last().expect("non-empty path");
        let d = self.path.len() - 1;
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            self.check_budget();
        }
        self.max_depth = self.max_depth.max(d);
        if d >= 2 {
            shared.close(&self.path, &self.labels, v);
        }
        // Extending to depth d + 1 only helps for lengths >= d + 2.
        d + 2 <= shared.found.bound() && self.feasible(v, d)
    }
}

/// The single distinct neighbor of `y` accepted by `live`, if exactly one.
fn sole(neighbors: &[u32], y: u32, live: impl Fn(u32) -> bool) -> Option<u32> {
    let mut found = None;
    for &x in neighbors {
        if x == y || !live(x) || found == Some(x) {
            continue;
        }
        if found.is_some() {
            return None;
        }
        found = Some(x);
    }
    found
}

fn spawn_tasks(graph: &DenseGraph, shared: &Shared<'_>, depth: usize) -> Vec<Task> {
    let mut tasks = Vec::new();
    let mut path = vec![shared.root];
    let mut labels = Vec::new();
    fn rec(
        graph: &DenseGraph,
        shared: &Shared<'_>,
        depth: usize,
        path: &mut Vec<u32>,
        labels: &mut Vec<u8>,
        tasks: &mut Vec<Task>,
    ) {
        if path.len() - 1 == depth {
            tasks.push(Task {
                path: path.clone(),
                labels: labels.clone(),
            });
            return;
        }
        let v = *path.last().expect("non-empty");
        if path.len() > 2 {
            shared.close(path, labels, v);
        }
        for (k, &w) in graph.out(v).iter().enumerate() {
            if path.contains(&w) {
                continue;
            }
            path.push(w);
            labels.push(k as u8);
            rec(graph, shared, depth, path, labels, tasks);
            path.pop();
            labels.pop();
        }
    }
    rec(graph, shared, depth, &mut path, &mut labels, &mut tasks);
    tasks
}

fn run_tasks(shared: &Shared<'_>, tasks: &[Task], threads: usize) -> Result<()> {
    #[cfg(feature = "parallel")]
    if threads > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| {
            tasks
                .par_iter()
                .for_each_init(|| Worker::new(shared), |worker, task| worker.run(task))
        });
        return Ok(());
    }
    let _ = threads;
    let mut worker = Worker::new(shared);
    for task in tasks {
        worker.run(task);
    }
    Ok(())
}

/// Multi-threaded exhaustive search for the cycle lengths of a graph.
///
/// One witness per newly discovered length is written to `sink` (one JSON
/// line each) by a single writer thread, and collected in the outcome.
pub fn parallel_cycle_search(
    config: &SearchConfig,
    sink: Option<&mut (dyn Write + Send)>,
) -> Result<SearchOutcome> {
    config.validate()?;
    let started = Instant::now();
    let graph = DenseGraph::build(&config.params)?;
    let max_len = config.max_len();
    let (tx, rx) = mpsc::channel::<CycleWitness>();

    std::thread::scope(|scope| {
        let writer = scope.spawn(move || {
            let mut sink = sink;
            let mut map = BTreeMap::new();
            let mut io_result = Ok(());
            for w in rx {
                if let (Some(out), Ok(())) = (sink.as_mut(), &io_result) {
                    io_result = write_witness(out, &w).and_then(|_| Ok(out.flush()?));
                }
                map.entry(w.len()).or_insert(w);
            }
            (map, io_result)
        });

        // `shared` owns the only sender; dropping it lets the writer finish.
        let (run_result, lengths, timed_out, stats) = {
            let shared = Shared {
                graph: &graph,
                found: FoundLengths::new(config.min_length, max_len),
                even_only: graph.is_bipartite(),
                min_len: config.min_length,
                root: config.params.identity().rank() as u32,
                stop: AtomicBool::new(false),
                timed_out: AtomicBool::new(false),
                started,
                budget: config.budget,
                nodes: AtomicU64::new(0),
                max_depth: AtomicUsize::new(0),
                witnesses: tx,
            };
            let tasks = spawn_tasks(&graph, &shared, config.spawn_depth);
            let run_result = run_tasks(&shared, &tasks, config.threads);
            let stats = SearchStats {
                tasks: tasks.len(),
                nodes: shared.nodes.load(Ordering::Relaxed),
                max_depth: shared.max_depth.load(Ordering::Relaxed),
            };
            (
                run_result,
                shared.found.lengths(),
                shared.timed_out.load(Ordering::Relaxed),
                stats,
            )
        };
        let (witnesses, io_result) = writer.join().expect("witness writer panicked");
        run_result?;
        io_result?;
        Ok(SearchOutcome {
            params: config.params,
            lengths,
            witnesses,
            exhausted: !timed_out,
            wall_seconds: started.elapsed().as_secs_f64(),
            stats,
        })
    })
}

/// Reference search: for each candidate length, a separate single-threaded
/// depth-first search for a simple cycle of exactly that length through the
/// identity. Slow, but shares no code with [`parallel_cycle_search`].
pub fn exhaustive_cycle_lengths_oracle(params: &GraphParams) -> Result<BTreeSet<usize>> {
    exhaustive_cycle_lengths_oracle_capped(params, ORACLE_VERTEX_CAP)
}

pub fn exhaustive_cycle_lengths_oracle_capped(
    params: &GraphParams,
    cap: u64,
) -> Result<BTreeSet<usize>> {
    if params.vertex_count() > cap {
        return Err(Error::TooManyVertices {
            count: params.vertex_count() as u128,
            cap,
        });
    }
    let mut oracle = Oracle::new(params)?;
    let v = oracle.out.len();
    let mut lengths = BTreeSet::new();
    for len in MIN_CYCLE_LENGTH..=v {
        if oracle.bipartite && len % 2 == 1 {
            continue;
        }
        if oracle.has_cycle_of_length(len) {
            lengths.insert(len);
        }
    }
    Ok(lengths)
}

struct Oracle {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    bipartite: bool,
    visited: Vec<bool>,
}

impl Oracle {
    /// Vertices are numbered in breadth-first order from the identity, which
    /// gets index 0.
    fn new(params: &GraphParams) -> Result<Self> {
        let labels = params.labels();
        let mut index: std::collections::HashMap<GenPerm, usize> = Default::default();
        let mut order = vec![params.identity()];
        index.insert(params.identity(), 0);
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let x = order[head].clone();
            head += 1;
            let mut row = Vec::new();
            for &label in &labels {
                let y = x.apply(label)?;
                let next = index.len();
                let k = *index.entry(y.clone()).or_insert_with(|| {
                    order.push(y);
                    next
                });
                if !row.contains(&k) {
                    row.push(k);
                }
            }
            out.push(row);
        }
        let v = out.len();
        let mut inn = vec![Vec::new(); v];
        for (x, row) in out.iter().enumerate() {
            for &y in row {
                inn[y].push(x);
            }
        }
        let mut color = vec![None; v];
        color[0] = Some(false);
        let mut queue = VecDeque::from([0usize]);
        let mut bipartite = true;
        while let Some(x) = queue.pop_front() {
            let c = color[x].expect("colored on push");
            for &y in out[x].iter().chain(&inn[x]) {
                match color[y] {
                    None => {
                        color[y] = Some(!c);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == c => bipartite = false,
                    _ => {}
                }
            }
        }
        Ok(Oracle {
            out,
            inn,
            bipartite,
            visited: vec![false; v],
        })
    }

    fn has_cycle_of_length(&mut self, len: usize) -> bool {
        self.visited.iter_mut().for_each(|x| *x = false);
        self.visited[0] = true;
        for w in self.out[0].clone() {
            if w == 0 {
                continue;
            }
            self.visited[w] = true;
            if self.path_home(w, len - 1) {
                return true;
            }
            self.visited[w] = false;
        }
        false
    }

    /// Is there a path of exactly `steps` edges from `v` to the identity
    /// whose interior avoids visited vertices?
    fn path_home(&mut self, v: usize, steps: usize) -> bool {
        if steps == 1 {
            return self.out[v].contains(&0);
        }
        let Some((v_dist, room)) = self.room(v) else {
            return false;
        };
        if v_dist > steps || room < steps - 1 {
            return false;
        }
        if self.bipartite && (steps - v_dist) % 2 == 1 {
            return false;
        }
        for w in self.out[v].clone() {
            if self.visited[w] {
                continue;
            }
            self.visited[w] = true;
            if self.path_home(w, steps - 1) {
                return true;
            }
            self.visited[w] = false;
        }
        false
    }

    /// Distance from `v` to the identity through unvisited vertices, and an
    /// upper bound on how many unvisited vertices one such path can use.
    fn room(&self, v: usize) -> Option<(usize, usize)> {
        let n = self.out.len();
        // Backward distances to the identity.
        let mut dist = vec![usize::MAX; n];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        let mut v_dist = None;
        while let Some(x) = queue.pop_front() {
            for &y in &self.inn[x] {
                if y == v && v_dist.is_none() {
                    v_dist = Some(dist[x] + 1);
                }
                if self.visited[y] || dist[y] != usize::MAX {
                    continue;
                }
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
        let v_dist = v_dist?;
        // Vertices reachable from v that can still reach the identity.
        let mut live = vec![false; n];
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if !self.visited[y] && dist[y] != usize::MAX && !live[y] {
                    live[y] = true;
                    stack.push(y);
                }
            }
        }
        let total = live.iter().filter(|&&b| b).count();
        // A live vertex with a single possible predecessor p competes with
        // every other such vertex for p's one successor on the path; the
        // same holds for single successors.
        let mut by_pred = vec![0usize; n];
        let mut by_succ = vec![0usize; n];
        for u in (0..n).filter(|&u| live[u]) {
            let preds: Vec<usize> = self.inn[u]
                .iter()
                .copied()
                .filter(|&p| p == v || live[p])
                .collect();
            if let [p] = preds[..] {
                by_pred[p] += 1;
            }
            let succs: Vec<usize> = self.out[u]
                .iter()
                .copied()
                .filter(|&s| s == 0 || live[s])
                .collect();
            if let [s] = succs[..] {
                by_succ[s] += 1;
            }
        }
        let excess = |counts: &[usize]| counts.iter().map(|&c| c.saturating_sub(1)).sum::<usize>();
        let lost = excess(&by_pred).max(excess(&by_succ));
        Some((v_dist, total - lost))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(m: u32, n: usize) -> GraphParams {
        GraphParams::undirected(m, n).unwrap()
    }

    #[test]
    fn found_lengths_bound_drops_only_past_contiguous_marks() {
        let f = FoundLengths::new(3, 10);
        assert_eq!(f.bound(), 10);
        assert!(f.mark(9));
        assert_eq!(f.bound(), 10);
        assert!(f.mark(10));
        assert_eq!(f.bound(), 8);
        assert!(!f.mark(10));
        assert!(!f.mark(2));
        assert!(!f.mark(11));
        for l in 3..=8 {
            f.mark(l);
        }
        assert_eq!(f.bound(), 2);
        assert_eq!(f.lengths(), (3..=10).collect());
    }

    #[test]
    fn config_validation() {
        let g = up(3, 2);
        let ok = |c: SearchConfig| parallel_cycle_search(&c, None).is_ok();
        assert!(!ok(SearchConfig::new(g).threads(0)));
        assert!(!ok(SearchConfig::new(g).threads(MAX_THREADS + 1)));
        assert!(!ok(SearchConfig::new(g).length_range(2, 10)));
        assert!(!ok(SearchConfig::new(g).length_range(3, 19)));
        assert!(!ok(SearchConfig::new(g).length_range(10, 9)));
        assert!(!ok(SearchConfig::new(g).length_range(3, 5).spawn_depth(6)));
        assert!(ok(SearchConfig::new(g).length_range(5, 5)));
    }

    #[test]
    fn small_spectra_and_witnesses() {
        let out = parallel_cycle_search(&SearchConfig::new(up(3, 2)), None).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.lengths, (3..=18).collect());
        assert_eq!(out.witnesses.len(), 16);
        for (len, w) in &out.witnesses {
            assert_eq!(w.len(), *len);
            w.verify().unwrap();
        }
        let d = GraphParams::directed(3, 2).unwrap();
        let out = parallel_cycle_search(&SearchConfig::new(d), None).unwrap();
        let missing: BTreeSet<usize> = [5, 7, 11, 16, 17].into();
        assert_eq!(
            out.lengths,
            (3..=18).filter(|l| !missing.contains(l)).collect()
        );
    }

    #[test]
    fn length_window_restricts_results() {
        let c = SearchConfig::new(up(4, 2)).length_range(10, 20);
        let out = parallel_cycle_search(&c, None).unwrap();
        assert_eq!(out.lengths, (10..=20).step_by(2).collect());
    }

    #[test]
    fn sink_receives_one_line_per_length() {
        let mut buf: Vec<u8> = Vec::new();
        let out = parallel_cycle_search(&SearchConfig::new(up(3, 2)), Some(&mut buf)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let read = crate::witness::read_witnesses(text.as_bytes());
        assert_eq!(read.len(), out.lengths.len());
        for (_, w) in read {
            w.unwrap().verify().unwrap();
        }
    }

    #[test]
    fn zero_budget_reports_partial() {
        let d = GraphParams::directed(6, 2).unwrap();
        let c = SearchConfig::new(d).budget(Some(Duration::ZERO));
        let out = parallel_cycle_search(&c, None).unwrap();
        assert!(!out.exhausted);
        for w in out.witnesses.values() {
            w.verify().unwrap();
        }
    }

    #[test]
    fn thread_counts_agree() {
        let d = GraphParams::directed(4, 2).unwrap();
        let one = parallel_cycle_search(&SearchConfig::new(d), None).unwrap();
        let four = parallel_cycle_search(&SearchConfig::new(d).threads(4), None).unwrap();
        assert_eq!(one.lengths, four.lengths);
        let expect: BTreeSet<usize> = (4..=32).step_by(2).filter(|&l| l != 30).collect();
        assert_eq!(one.lengths, expect);
    }

    #[test]
    fn oracle_matches_small_cases() {
        assert_eq!(
            exhaustive_cycle_lengths_oracle(&up(3, 2)).unwrap(),
            (3..=18).collect()
        );
        let d = GraphParams::directed(4, 2).unwrap();
        let expect: BTreeSet<usize> = (4..=32).step_by(2).filter(|&l| l != 30).collect();
        assert_eq!(exhaustive_cycle_lengths_oracle(&d).unwrap(), expect);
        assert!(exhaustive_cycle_lengths_oracle(&up(4, 3)).is_err());
    }
}
