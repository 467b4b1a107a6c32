//! Maximum stable set machinery: a deterministic greedy, clique edge covers
//! of distance powers, and a budgeted branch-and-bound solver.
//!
//! The solver replaces an external ILP solver with a combinatorial search.
//! Its bounding function is a greedy clique partition of the remaining
//! candidates: a set of vertices coverable by `c` cliques contains at most
//! `c` pairwise nonadjacent vertices. Node budgets are the deterministic
//! limit; wall-clock limits are advisory and checked coarsely.

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::bitset::Bitset;
use crate::graph::{power_graph, DistanceMatrix, Graph};
use crate::{Error, Result};

/// A set of pairwise nonadjacent vertices (once certified).
#[derive(Clone, Debug)]
pub struct StableSet {
    members: Bitset,
    certified: bool,
}

impl StableSet {
    pub fn empty(n: usize) -> Self {
        StableSet {
            members: Bitset::new(n),
            certified: true,
        }
    }

    /// Wraps a member set without checking stability.
    pub fn from_bitset(members: Bitset) -> Self {
        StableSet {
            members,
            certified: false,
        }
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> Self {
        StableSet {
            members: Bitset::from_indices(n, vertices.iter().copied()),
            certified: false,
        }
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    /// Checks stability against `g` and records the outcome.
    pub fn certify(&mut self, g: &Graph) -> bool {
        self.certified = find_conflict(g, &self.members).is_none();
        self.certified
    }

    /// Marks the set as certified on the caller's own argument, without a
    /// graph in hand. Reserve for sets that are stable by construction.
    pub fn certify_unchecked(&mut self) {
        self.certified = true;
    }
}

/// First adjacent pair inside `members`, if any.
pub fn find_conflict(g: &Graph, members: &Bitset) -> Option<(usize, usize)> {
    for u in members.iter() {
        let mut hit = g.neighbors(u).clone();
        hit.intersect_with(members);
        if let Some(v) = hit.first() {
            return Some((u.min(v), u.max(v)));
        }
    }
    None
}

/// Greedy maximal stable set: repeatedly take the candidate of minimum
/// residual degree (ties by smallest id) and discard its closed neighborhood.
/// Frozen vertices are excluded up front; the result is maximal with respect
/// to the remaining induced subgraph.
pub fn greedy_maximal_stable_set(g: &Graph, frozen: &Bitset) -> StableSet {
    let n = g.n();
    let mut cand = Bitset::full(n);
    cand.subtract(frozen);
    let mut chosen = Bitset::new(n);
    loop {
        let mut pick: Option<(usize, usize)> = None; // (degree, vertex)
        for v in cand.iter() {
            let d = g.neighbors(v).intersection_count(&cand);
            if pick.is_none_or(|(pd, _)| d < pd) {
                pick = Some((d, v));
            }
        }
        let Some((_, v)) = pick else { break };
        chosen.insert(v);
        cand.remove(v);
        cand.subtract(g.neighbors(v));
    }
    StableSet {
        members: chosen,
        certified: true,
    }
}

/// A collection of cliques of some power graph `G^k` covering all its edges.
pub struct CliqueCover {
    k: usize,
    n: usize,
    cliques: Vec<Bitset>,
}

impl CliqueCover {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cliques(&self) -> &[Bitset] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// True iff every listed set is a clique of `g_k` and every edge of
    /// `g_k` lies inside at least one listed clique.
    pub fn validate(&self, g_k: &Graph) -> bool {
        if self.n != g_k.n() {
            return false;
        }
        for c in &self.cliques {
            for u in c.iter() {
                let mut rest = c.clone();
                rest.remove(u);
                if !rest.is_subset_of(g_k.neighbors(u)) {
                    return false;
                }
            }
        }
        let mut covered = vec![Bitset::new(self.n); self.n];
        for c in &self.cliques {
            mark_covered(&mut covered, c);
        }
        (0..self.n).all(|u| g_k.neighbors(u).is_subset_of(&covered[u]))
    }
}

fn mark_covered(covered: &mut [Bitset], clique: &Bitset) {
    for u in clique.iter() {
        covered[u].union_with(clique);
        covered[u].remove(u);
    }
}

/// Clique cover of `G^k` for even `k`: the `n` balls of radius `k/2`.
///
/// Any two vertices within distance `k/2` of a common center are within
/// distance `k` of each other, and every edge of `G^k` has a midpoint, so
/// the balls are cliques of `G^k` and cover all its edges.
pub fn clique_cover_even(g: &Graph, dm: &DistanceMatrix, k: usize) -> CliqueCover {
    assert!(k >= 2 && k.is_multiple_of(2), "even cover needs even k >= 2");
    let n = g.n();
    let r = (k / 2) as u32;
    let cliques: Vec<Bitset> = (0..n).map(|v| dm.ball(v, r)).collect();
    CliqueCover { k, n, cliques }
}

/// Clique cover of `G^k` for odd `k`: the `n` balls of radius `(k-1)/2`
/// followed by greedily grown maximal cliques over the edges the balls
/// leave uncovered. Uncovered edges are scanned in lexicographic order and
/// each clique grows by repeatedly adding the smallest-id compatible vertex.
///
/// For `k = 1` the balls degenerate to singletons and the grown cliques do
/// all the covering.
pub fn clique_cover_odd(g: &Graph, dm: &DistanceMatrix, k: usize) -> CliqueCover {
    assert!(k % 2 == 1, "odd cover needs odd k");
    let n = g.n();
    let r = ((k - 1) / 2) as u32;
    let gk = power_graph(g, dm, k);
    let mut cliques: Vec<Bitset> = (0..n).map(|v| dm.ball(v, r)).collect();
    let mut covered = vec![Bitset::new(n); n];
    for c in &cliques {
        mark_covered(&mut covered, c);
    }
    for u in 0..n {
        loop {
            let mut rest = gk.neighbors(u).clone();
            rest.subtract(&covered[u]);
            let Some(v) = rest.iter().find(|&v| v > u) else {
                break;
            };
            let c = grow_clique(&gk, u, v);
            mark_covered(&mut covered, &c);
            cliques.push(c);
        }
    }
    CliqueCover { k, n, cliques }
}

/// Cover dispatch on parity; the form the LP export and the CLI use.
pub fn clique_cover_for_layer(g: &Graph, dm: &DistanceMatrix, k: usize) -> CliqueCover {
    if k.is_multiple_of(2) {
        clique_cover_even(g, dm, k)
    } else {
        clique_cover_odd(g, dm, k)
    }
}

fn grow_clique(gk: &Graph, u: usize, v: usize) -> Bitset {
    let n = gk.n();
    let mut c = Bitset::new(n);
    c.insert(u);
    c.insert(v);
    let mut cand = gk.neighbors(u).clone();
    cand.intersect_with(gk.neighbors(v));
    while let Some(w) = cand.first() {
        c.insert(w);
        cand.intersect_with(gk.neighbors(w));
    }
    c
}

/// Search budget. Node limits are deterministic and take precedence; time
/// limits are advisory (checked every 1024 nodes).
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveBudget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SolveBudget {
    pub fn unlimited() -> Self {
        SolveBudget::default()
    }

    pub fn nodes(limit: u64) -> Self {
        SolveBudget {
            node_limit: Some(limit),
            time_limit: None,
        }
    }

    /// Splits the budget into `parts` equal shares (for per-layer subsolves).
    pub fn split(self, parts: u64) -> Self {
        let parts = parts.max(1);
        SolveBudget {
            node_limit: self.node_limit.map(|n| (n / parts).max(1)),
            time_limit: self.time_limit.map(|t| t / parts as u32),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    /// `lower == upper`; the set is a maximum stable set.
    Optimal,
    /// The budget ran out first; `best` is still a valid stable set and
    /// `upper` is still a certified upper bound.
    BudgetExhausted,
}

pub struct SolveResult {
    pub best: StableSet,
    pub lower: u32,
    pub upper: u32,
    pub status: SolveStatus,
    pub nodes: u64,
}

/// Branch-and-bound maximum-stable-set solver.
///
/// With `workers == 1` (the default) the search is sequential and fully
/// deterministic for a fixed node budget. With more workers the root is
/// split into subtrees evaluated in parallel; optimal answers stay
/// deterministic in value, but which optimal set is returned, and all
/// results under an exhausted budget, may vary between runs.
pub struct MssSolver {
    pub budget: SolveBudget,
    pub workers: usize,
}

impl Default for MssSolver {
    fn default() -> Self {
        MssSolver {
            budget: SolveBudget::unlimited(),
            workers: 1,
        }
    }
}

struct Shared {
    best_size: AtomicU32,
    best: Mutex<Bitset>,
    nodes: AtomicU64,
    node_limit: u64,
    deadline: Option<Instant>,
    out_of_budget: AtomicBool,
    reached_cap: AtomicBool,
    cap: u32,
    // max bound over subtrees abandoned when the budget ran out
    open_bound: AtomicU32,
}

struct Scratch {
    commons: Vec<Bitset>,
}

impl Scratch {
    fn new() -> Self {
        Scratch {
            commons: Vec::new(),
        }
    }
}

impl MssSolver {
    pub fn solve(
        &self,
        g: &Graph,
        initial: Option<&StableSet>,
        alpha_cap: Option<u32>,
    ) -> Result<SolveResult> {
        let n = g.n();
        let seed = match initial {
            Some(s) => {
                if s.members().capacity() != n {
                    return Err(Error::VertexOutOfRange {
                        vertex: s.members().capacity(),
                        n,
                    });
                }
                if let Some((u, v)) = find_conflict(g, s.members()) {
                    return Err(Error::InvalidInitialSet { u, v });
                }
                s.members().clone()
            }
            None => greedy_maximal_stable_set(g, &Bitset::new(n)).members().clone(),
        };
        let cap = alpha_cap.unwrap_or(n as u32).min(n as u32);
        let seed_size = seed.len() as u32;
        let shared = Shared {
            best_size: AtomicU32::new(seed_size),
            best: Mutex::new(seed),
            nodes: AtomicU64::new(0),
            node_limit: self.budget.node_limit.unwrap_or(u64::MAX),
            deadline: self.budget.time_limit.map(|t| Instant::now() + t),
            out_of_budget: AtomicBool::new(false),
            reached_cap: AtomicBool::new(seed_size >= cap),
            cap,
            open_bound: AtomicU32::new(0),
        };

        if !shared.reached_cap.load(Ordering::Relaxed) {
            let root_cand = Bitset::full(n);
            let mut current = Bitset::new(n);
            if self.workers <= 1 {
                dfs(g, &shared, &mut Scratch::new(), &mut current, 0, root_cand);
            } else {
                self.solve_parallel(g, &shared, root_cand);
            }
        }

        let exhausted = shared.out_of_budget.load(Ordering::Relaxed)
            && !shared.reached_cap.load(Ordering::Relaxed);
        let best_size = shared.best_size.load(Ordering::Relaxed);
        let members = shared.best.into_inner().unwrap();
        let mut best = StableSet::from_bitset(members);
        debug_assert!(best.len() as u32 == best_size);
        if !best.certify(g) {
            // can only happen on a broken warm start, which we rejected above
            unreachable!("solver produced an unstable set");
        }
        let upper = if exhausted {
            best_size
                .max(shared.open_bound.load(Ordering::Relaxed))
                .min(cap)
        } else {
            best_size
        };
        let status = if upper == best_size {
            SolveStatus::Optimal
        } else {
            SolveStatus::BudgetExhausted
        };
        Ok(SolveResult {
            best,
            lower: best_size,
            upper,
            status,
            nodes: shared.nodes.load(Ordering::Relaxed),
        })
    }

    #[cfg(feature = "parallel")]
    fn solve_parallel(&self, g: &Graph, shared: &Shared, root_cand: Bitset) {
        use rayon::prelude::*;

        let jobs = build_frontier(g, shared, root_cand, self.workers * 8);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .stack_size(16 * 1024 * 1024)
            .build();
        match pool {
            Ok(pool) => pool.install(|| {
                jobs.into_par_iter().for_each_init(Scratch::new, |scratch, mut job| {
                    dfs(g, shared, scratch, &mut job.current, job.size, job.cand);
                });
            }),
            Err(_) => {
                let mut scratch = Scratch::new();
                for mut job in jobs {
                    dfs(g, shared, &mut scratch, &mut job.current, job.size, job.cand);
                }
            }
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn solve_parallel(&self, g: &Graph, shared: &Shared, root_cand: Bitset) {
        let mut current = Bitset::new(g.n());
        dfs(g, shared, &mut Scratch::new(), &mut current, 0, root_cand);
    }
}

/// One-shot convenience wrapper, single worker.
pub fn solve_mss(
    g: &Graph,
    budget: SolveBudget,
    initial: Option<&StableSet>,
    alpha_cap: Option<u32>,
) -> Result<SolveResult> {
    MssSolver { budget, workers: 1 }.solve(g, initial, alpha_cap)
}

#[cfg(feature = "parallel")]
struct Job {
    current: Bitset,
    size: u32,
    cand: Bitset,
}

/// Expands the root node breadth-first into independent subtree jobs,
/// following the same branching rule as the sequential search.
#[cfg(feature = "parallel")]
fn build_frontier(g: &Graph, sh: &Shared, root_cand: Bitset, target: usize) -> Vec<Job> {
    use std::collections::VecDeque;

    let n = g.n();
    let mut queue = VecDeque::new();
    queue.push_back(Job {
        current: Bitset::new(n),
        size: 0,
        cand: root_cand,
    });
    let mut scratch = Scratch::new();
    while queue.len() < target {
        let Some(job) = queue.pop_front() else { break };
        sh.nodes.fetch_add(1, Ordering::Relaxed);
        // incumbent bookkeeping mirrors dfs
        if job.size > sh.best_size.load(Ordering::Relaxed) {
            let mut guard = sh.best.lock().unwrap();
            if job.size > sh.best_size.load(Ordering::Relaxed) {
                sh.best_size.store(job.size, Ordering::Relaxed);
                guard.copy_from(&job.current);
            }
            drop(guard);
            if job.size >= sh.cap {
                sh.reached_cap.store(true, Ordering::Relaxed);
                return Vec::new();
            }
        }
        if job.cand.is_empty() {
            continue;
        }
        let best_now = sh.best_size.load(Ordering::Relaxed);
        if job.size + job.cand.len() as u32 <= best_now {
            continue;
        }
        let bound = clique_partition_bound(g, &job.cand, &mut scratch);
        if job.size + bound <= best_now {
            continue;
        }
        let v = branch_vertex(g, &job.cand);
        let mut excl = job.cand.clone();
        excl.remove(v);
        queue.push_back(Job {
            current: job.current.clone(),
            size: job.size,
            cand: excl,
        });
        let mut incl_cand = job.cand;
        incl_cand.remove(v);
        incl_cand.subtract(g.neighbors(v));
        let mut incl_current = job.current;
        incl_current.insert(v);
        queue.push_back(Job {
            current: incl_current,
            size: job.size + 1,
            cand: incl_cand,
        });
    }
    queue.into_iter().collect()
}

fn branch_vertex(g: &Graph, cand: &Bitset) -> usize {
    let mut pick = usize::MAX;
    let mut pick_deg = usize::MAX;
    for v in cand.iter() {
        let d = g.neighbors(v).intersection_count(cand);
        if pick == usize::MAX || d > pick_deg {
            pick = v;
            pick_deg = d;
        }
    }
    pick
}

/// Greedy clique partition of `cand`; the number of cliques bounds the
/// stability number of the induced subgraph from above.
fn clique_partition_bound(g: &Graph, cand: &Bitset, scratch: &mut Scratch) -> u32 {
    let mut used = 0usize;
    for v in cand.iter() {
        let mut placed = false;
        for i in 0..used {
            if scratch.commons[i].contains(v) {
                scratch.commons[i].intersect_with(g.neighbors(v));
                placed = true;
                break;
            }
        }
        if !placed {
            if scratch.commons.len() == used {
                scratch.commons.push(g.neighbors(v).clone());
            } else {
                scratch.commons[used].copy_from(g.neighbors(v));
            }
            used += 1;
        }
    }
    used as u32
}

fn dfs(g: &Graph, sh: &Shared, scratch: &mut Scratch, current: &mut Bitset, size: u32, mut cand: Bitset) {
    let visited = sh.nodes.fetch_add(1, Ordering::Relaxed);
    if visited >= sh.node_limit {
        sh.out_of_budget.store(true, Ordering::Relaxed);
    } else if let Some(deadline) = sh.deadline {
        if visited.is_multiple_of(1024) && Instant::now() >= deadline {
            sh.out_of_budget.store(true, Ordering::Relaxed);
        }
    }
    if sh.reached_cap.load(Ordering::Relaxed) {
        return;
    }
    if sh.out_of_budget.load(Ordering::Relaxed) {
        // unexplored subtree: anything below is at most size + |cand|
        sh.open_bound
            .fetch_max(size + cand.len() as u32, Ordering::Relaxed);
        return;
    }

    if size > sh.best_size.load(Ordering::Relaxed) {
        let mut guard = sh.best.lock().unwrap();
        if size > sh.best_size.load(Ordering::Relaxed) {
            sh.best_size.store(size, Ordering::Relaxed);
            guard.copy_from(current);
        }
        drop(guard);
        if size >= sh.cap {
            sh.reached_cap.store(true, Ordering::Relaxed);
            return;
        }
    }
    if cand.is_empty() {
        return;
    }
    let best_now = sh.best_size.load(Ordering::Relaxed);
    if size + cand.len() as u32 <= best_now {
        return;
    }
    let bound = clique_partition_bound(g, &cand, scratch);
    if size + bound <= best_now {
        return;
    }

    let v = branch_vertex(g, &cand);

    // exclude branch first
    let mut excl = cand.clone();
    excl.remove(v);
    dfs(g, sh, scratch, current, size, excl);
    if sh.reached_cap.load(Ordering::Relaxed) {
        return;
    }
    if sh.out_of_budget.load(Ordering::Relaxed) {
        sh.open_bound.fetch_max(size + bound, Ordering::Relaxed);
        return;
    }

    // include branch
    cand.remove(v);
    cand.subtract(g.neighbors(v));
    current.insert(v);
    dfs(g, sh, scratch, current, size + 1, cand);
    current.remove(v);
    if sh.out_of_budget.load(Ordering::Relaxed) {
        sh.open_bound.fetch_max(size + bound, Ordering::Relaxed);
    }
}
