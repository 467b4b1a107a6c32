//! Packing chromatic number pipelines.
//!
//! A packing coloring assigns each vertex a positive color so that any two
//! vertices sharing color `k` are at distance greater than `k`; the packing
//! chromatic number is the least number of colors that admits one. Every
//! pipeline here works through the same reduction: packing colorings with
//! colors drawn from a layer set `F` correspond to stable sets of the layered
//! graph over `F` with one member per column, so the packing chromatic number
//! falls out of a maximum-stable-set solve on layered graphs built from the
//! distance powers of the input.
//!
//! Three exact strategies are provided. The iterative one solves the layered
//! graph over layers `1..diameter-1` and, when that admits a full cover,
//! descends one layer at a time. The starred one adds per-layer star vertices
//! so a single solve settles the value regardless of where it falls relative
//! to the diameter. The capped one exploits a known upper-bound witness to
//! keep the layer range small. All of them return certified bounds when the
//! search budget runs out instead of an exact value.

use std::collections::HashMap;
use std::fmt;

use crate::bitset::Bitset;
use crate::graph::{
    all_pairs_distances_sequential, layered_graph, power_graph, DistanceMatrix, Graph,
    LayeredGraph, LayeredVertex,
};
use crate::hamming::{self, HammingParams};
use crate::mss::{MssSolver, SolveBudget, SolveStatus, StableSet};
use crate::{Error, Result};

/// A full packing coloring, colors numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingColoring {
    colors: Vec<u32>,
    k: u32,
}

impl PackingColoring {
    pub fn new(colors: Vec<u32>) -> Self {
        let k = colors.iter().copied().max().unwrap_or(0);
        PackingColoring { colors, k }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    /// Largest color used.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }
}

/// Why a coloring failed verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringViolation {
    LengthMismatch { expected: usize, got: usize },
    Uncolored(usize),
    TooClose { u: usize, v: usize, color: u32, distance: u32 },
}

impl fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringViolation::LengthMismatch { expected, got } => {
                write!(f, "coloring has {got} entries, graph has {expected} vertices")
            }
            ColoringViolation::Uncolored(v) => write!(f, "vertex {v} has no color"),
            ColoringViolation::TooClose { u, v, color, distance } => write!(
                f,
                "vertices {u} and {v} share color {color} at distance {distance} (need > {color})"
            ),
        }
    }
}

/// Checks the packing condition: vertices sharing color `k` must be at
/// distance at least `k + 1`. Reports the first violation in color order.
pub fn verify_packing_coloring(
    g: &Graph,
    dm: &DistanceMatrix,
    c: &PackingColoring,
) -> std::result::Result<(), ColoringViolation> {
    let n = g.n();
    if c.n() != n {
        return Err(ColoringViolation::LengthMismatch { expected: n, got: c.n() });
    }
    for v in 0..n {
        if c.color(v) == 0 {
            return Err(ColoringViolation::Uncolored(v));
        }
    }
    let mut by_color: Vec<(u32, usize)> = (0..n).map(|v| (c.color(v), v)).collect();
    by_color.sort_unstable();
    let mut i = 0;
    while i < n {
        let color = by_color[i].0;
        let mut j = i;
        while j < n && by_color[j].0 == color {
            j += 1;
        }
        for a in i..j {
            for b in a + 1..j {
                let (u, v) = (by_color[a].1, by_color[b].1);
                let distance = dm.get(u, v);
                if distance <= color {
                    return Err(ColoringViolation::TooClose { u, v, color, distance });
                }
            }
        }
        i = j;
    }
    Ok(())
}

/// A stable set of a layered graph, kept in base-graph terms: members are
/// `(vertex, layer)` pairs plus the layers occupied by star vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredStableSet {
    base_n: usize,
    layers: Vec<usize>,
    base_members: Vec<(usize, usize)>,
    star_layers: Vec<usize>,
}

impl LayeredStableSet {
    /// Builds a set after range-checking every member against `layers` and
    /// `base_n`. Stability is not checked here; see [`Self::validate`].
    pub fn new(
        base_n: usize,
        layers: Vec<usize>,
        base_members: Vec<(usize, usize)>,
        star_layers: Vec<usize>,
    ) -> Result<Self> {
        let mut layers = layers;
        layers.sort_unstable();
        layers.dedup();
        let max = layers.last().copied().unwrap_or(0);
        if layers.first() == Some(&0) {
            return Err(Error::LayerOutOfRange { layer: 0, max });
        }
        let mut base_members = base_members;
        base_members.sort_unstable_by_key(|&(v, k)| (k, v));
        base_members.dedup();
        for &(v, k) in &base_members {
            if v >= base_n {
                return Err(Error::VertexOutOfRange { vertex: v, n: base_n });
            }
            if layers.binary_search(&k).is_err() {
                return Err(Error::LayerOutOfRange { layer: k, max });
            }
        }
        let mut star_layers = star_layers;
        star_layers.sort_unstable();
        star_layers.dedup();
        for &k in &star_layers {
            if layers.binary_search(&k).is_err() {
                return Err(Error::LayerOutOfRange { layer: k, max });
            }
        }
        Ok(LayeredStableSet { base_n, layers, base_members, star_layers })
    }

    /// Decodes a solver solution on `lg` back into base-graph terms.
    pub fn from_solution(lg: &LayeredGraph, members: &Bitset) -> Self {
        let mut base_members = Vec::new();
        let mut star_layers = Vec::new();
        for id in members.iter() {
            match lg.vertex_at(id) {
                LayeredVertex::Base { vertex, layer } => base_members.push((vertex, layer)),
                LayeredVertex::Star { layer } => star_layers.push(layer),
            }
        }
        base_members.sort_unstable_by_key(|&(v, k)| (k, v));
        star_layers.sort_unstable();
        LayeredStableSet {
            base_n: lg.base_n(),
            layers: lg.layers().to_vec(),
            base_members,
            star_layers,
        }
    }

    /// Encodes the set as a member bitset of `lg`, for warm-starting solves.
    pub fn to_solver_bitset(&self, lg: &LayeredGraph) -> Result<Bitset> {
        let max = lg.layers().last().copied().unwrap_or(0);
        let mut bits = Bitset::new(lg.vertex_count());
        for &(v, k) in &self.base_members {
            if v >= lg.base_n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: lg.base_n() });
            }
            if !lg.layers().contains(&k) {
                return Err(Error::LayerOutOfRange { layer: k, max });
            }
            bits.insert(lg.id_of(v, k));
        }
        for &k in &self.star_layers {
            match lg.star_id(k) {
                Some(id) => bits.insert(id),
                None if !lg.starred() => return Err(Error::StarMembersPresent),
                None => return Err(Error::LayerOutOfRange { layer: k, max }),
            }
        }
        Ok(bits)
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn base_members(&self) -> &[(usize, usize)] {
        &self.base_members
    }

    pub fn star_layers(&self) -> &[usize] {
        &self.star_layers
    }

    /// Total size counted the way the solver does: base members plus stars.
    pub fn len(&self) -> usize {
        self.base_members.len() + self.star_layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base_members.is_empty() && self.star_layers.is_empty()
    }

    /// Base vertices assigned to `layer`, ascending.
    pub fn members_of_layer(&self, layer: usize) -> Vec<usize> {
        self.base_members
            .iter()
            .filter(|&&(_, k)| k == layer)
            .map(|&(v, _)| v)
            .collect()
    }

    /// Semantic check against true distances: columns must be used at most
    /// once, members of layer `k` must be pairwise farther than `k` apart,
    /// and any starred layer must carry no base members.
    pub fn validate(&self, dm: &DistanceMatrix) -> bool {
        if dm.n() != self.base_n {
            return false;
        }
        let mut seen = vec![false; self.base_n];
        for &(v, _) in &self.base_members {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        for &s in &self.star_layers {
            if self.base_members.iter().any(|&(_, k)| k == s) {
                return false;
            }
        }
        for (i, &(u, k)) in self.base_members.iter().enumerate() {
            for &(v, k2) in &self.base_members[i + 1..] {
                if k2 == k && dm.get(u, v) <= k as u32 {
                    return false;
                }
            }
        }
        true
    }
}

fn assign_colors(
    base_n: usize,
    members: &[(usize, usize)],
    free_layers: &[usize],
    extra_base: usize,
) -> PackingColoring {
    let mut colors = vec![0u32; base_n];
    let mut max_layer = 0;
    for &(v, k) in members {
        assert!(colors[v] == 0, "vertex {v} covered by two layers");
        colors[v] = k as u32;
        max_layer = max_layer.max(k);
    }
    assert!(extra_base >= max_layer, "extra colors must start above every layer");
    let mut free = free_layers.iter().copied();
    let mut next = extra_base as u32;
    for slot in colors.iter_mut() {
        if *slot == 0 {
            *slot = match free.next() {
                Some(k) => k as u32,
                None => {
                    next += 1;
                    next
                }
            };
        }
    }
    PackingColoring::new(colors)
}

/// Turns a star-free layered stable set into a packing coloring: covered
/// vertices take their layer as color, uncovered vertices get fresh singleton
/// colors `extra_base + 1, extra_base + 2, ..` in vertex order. `extra_base`
/// must be at least the largest layer used.
pub fn coloring_from_layered_set(
    ls: &LayeredStableSet,
    extra_base: usize,
) -> Result<PackingColoring> {
    if !ls.star_layers.is_empty() {
        return Err(Error::StarMembersPresent);
    }
    Ok(assign_colors(ls.base_n, &ls.base_members, &[], extra_base))
}

/// Like [`coloring_from_layered_set`] but for starred solutions. Occupied
/// layers slide down into the lowest slots of (occupied + starred) layers,
/// which is sound because a class at pairwise distance above `k` stays valid
/// at any layer below `k`; the starred layers freed by the slide then serve
/// as singleton colors for uncovered vertices before fresh colors start at
/// `extra_base + 1`.
fn coloring_from_starred_set(ls: &LayeredStableSet, extra_base: usize) -> PackingColoring {
    if ls.star_layers.is_empty() {
        return assign_colors(ls.base_n, &ls.base_members, &[], extra_base);
    }
    let mut base_layers: Vec<usize> = ls.base_members.iter().map(|&(_, k)| k).collect();
    base_layers.dedup();
    let mut pool: Vec<usize> = base_layers
        .iter()
        .chain(ls.star_layers.iter())
        .copied()
        .collect();
    pool.sort_unstable();
    let remap: HashMap<usize, usize> = base_layers
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, pool[i]))
        .collect();
    debug_assert!(base_layers.iter().all(|&k| remap[&k] <= k));
    let moved: Vec<(usize, usize)> = ls
        .base_members
        .iter()
        .map(|&(v, k)| (v, remap[&k]))
        .collect();
    let free = &pool[base_layers.len()..];
    assign_colors(ls.base_n, &moved, free, extra_base)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcnStatus {
    /// `lower == upper`, the exact packing chromatic number.
    Exact,
    /// The budget ran out; `lower..=upper` is still certified.
    Bounds,
}

/// Where the reported lower bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundSource {
    /// A closed-form family bound.
    ClosedForm,
    /// A certified bound from the stable-set solver.
    SolverBound,
    /// Nothing better than "the graph has an edge".
    Trivial,
}

#[derive(Clone, Debug)]
pub struct PcnResult {
    pub lower: u64,
    pub upper: u64,
    pub status: PcnStatus,
    /// A verified packing coloring with `upper` colors.
    pub witness: Option<PackingColoring>,
    pub lower_source: LowerBoundSource,
}

/// Knobs shared by the exact pipelines.
#[derive(Clone, Debug)]
pub struct PcnOptions {
    /// Stable set used to seed the first solve.
    pub warm_start: Option<LayeredStableSet>,
    /// Trusted upper bound on the stability number of the first layered
    /// graph solved. Must be sound: an undersized cap makes the solver stop
    /// early and report a wrong exact value.
    pub alpha_cap: Option<u64>,
    pub workers: usize,
}

impl Default for PcnOptions {
    fn default() -> Self {
        PcnOptions { warm_start: None, alpha_cap: None, workers: 1 }
    }
}

fn complete_graph_result(n: usize) -> PcnResult {
    // every pair is adjacent, so all color classes are singletons
    let witness = PackingColoring::new((1..=n as u32).collect());
    PcnResult {
        lower: n as u64,
        upper: n as u64,
        status: PcnStatus::Exact,
        witness: Some(witness),
        lower_source: LowerBoundSource::Trivial,
    }
}

pub fn pcn_exact_iterative(g: &Graph, dm: &DistanceMatrix, budget: SolveBudget) -> Result<PcnResult> {
    pcn_exact_iterative_with(g, dm, budget, &PcnOptions::default())
}

/// Exact value through the layered graph over layers `1..=diameter-1`.
///
/// When its stability number is below `n` the value follows directly:
/// `diameter - 1 + n - alpha`. When a full cover exists instead, the true
/// value is smaller and the pipeline re-solves with the top layer peeled off
/// until the cover breaks. The budget applies to each solve separately.
pub fn pcn_exact_iterative_with(
    g: &Graph,
    dm: &DistanceMatrix,
    budget: SolveBudget,
    opts: &PcnOptions,
) -> Result<PcnResult> {
    assert_eq!(g.n(), dm.n(), "distance matrix does not match the graph");
    let n = g.n();
    if g.is_complete() {
        return Ok(complete_graph_result(n));
    }
    let top = dm.diameter() as usize - 1;
    let solver = MssSolver { budget, workers: opts.workers.max(1) };
    let f: Vec<usize> = (1..=top).collect();
    let lg = layered_graph(g, dm, &f, false)?;
    let warm = match &opts.warm_start {
        Some(ls) => Some(StableSet::from_bitset(ls.to_solver_bitset(&lg)?)),
        None => None,
    };
    let cap = opts.alpha_cap.unwrap_or(n as u64).min(n as u64) as u32;
    let res = solver.solve(lg.graph(), warm.as_ref(), Some(cap))?;
    let found = LayeredStableSet::from_solution(&lg, res.best.members());
    let alpha_found = res.lower as u64;
    let alpha_cert = res.upper as u64;

    if res.status == SolveStatus::Optimal {
        if alpha_found < n as u64 {
            let chi = top as u64 + n as u64 - alpha_found;
            let witness = coloring_from_layered_set(&found, top)?;
            debug_assert_eq!(witness.k() as u64, chi);
            debug_assert!(verify_packing_coloring(g, dm, &witness).is_ok());
            return Ok(PcnResult {
                lower: chi,
                upper: chi,
                status: PcnStatus::Exact,
                witness: Some(witness),
                lower_source: LowerBoundSource::SolverBound,
            });
        }
        return descend(g, dm, &solver, found, top);
    }
    let witness = coloring_from_layered_set(&found, top)?;
    let upper = top as u64 + n as u64 - alpha_found;
    if alpha_cert < n as u64 {
        let lower = top as u64 + n as u64 - alpha_cert;
        let status = if lower == upper { PcnStatus::Exact } else { PcnStatus::Bounds };
        return Ok(PcnResult {
            lower,
            upper,
            status,
            witness: Some(witness),
            lower_source: LowerBoundSource::SolverBound,
        });
    }
    Ok(PcnResult {
        lower: 2,
        upper,
        status: PcnStatus::Bounds,
        witness: Some(witness),
        lower_source: LowerBoundSource::Trivial,
    })
}

/// A full cover with layers `1..=ub` exists, so the value is at most `ub`.
/// Re-solve with one layer fewer until the cover breaks; the first level `k`
/// with a partial cover proves the value is exactly `k + 1`.
fn descend(
    g: &Graph,
    dm: &DistanceMatrix,
    solver: &MssSolver,
    mut cover: LayeredStableSet,
    mut ub: usize,
) -> Result<PcnResult> {
    let n = g.n();
    loop {
        let k = ub - 1;
        let f: Vec<usize> = (1..=k).collect();
        let lg = layered_graph(g, dm, &f, false)?;
        let trimmed: Vec<(usize, usize)> = cover
            .base_members()
            .iter()
            .copied()
            .filter(|&(_, layer)| layer <= k)
            .collect();
        let warm = if trimmed.is_empty() {
            None
        } else {
            let ls = LayeredStableSet::new(n, f, trimmed, vec![])?;
            Some(StableSet::from_bitset(ls.to_solver_bitset(&lg)?))
        };
        let res = solver.solve(lg.graph(), warm.as_ref(), Some(n as u32))?;
        if res.status == SolveStatus::Optimal && res.lower as usize == n {
            cover = LayeredStableSet::from_solution(&lg, res.best.members());
            ub = k;
            continue;
        }
        let witness = coloring_from_layered_set(&cover, ub)?;
        debug_assert!(verify_packing_coloring(g, dm, &witness).is_ok());
        if res.status == SolveStatus::Optimal || (res.upper as usize) < n {
            // alpha over layers 1..=k is certified below n, so chi > k
            debug_assert_eq!(witness.k() as usize, ub);
            return Ok(PcnResult {
                lower: ub as u64,
                upper: ub as u64,
                status: PcnStatus::Exact,
                witness: Some(witness),
                lower_source: LowerBoundSource::SolverBound,
            });
        }
        return Ok(PcnResult {
            lower: 2,
            upper: ub as u64,
            status: PcnStatus::Bounds,
            witness: Some(witness),
            lower_source: LowerBoundSource::Trivial,
        });
    }
}

pub fn pcn_exact_starred(g: &Graph, dm: &DistanceMatrix, budget: SolveBudget) -> Result<PcnResult> {
    pcn_exact_starred_with(g, dm, budget, &PcnOptions::default())
}

/// Exact value from a single solve on the starred layered graph over layers
/// `1..=diameter-1`: the value is always `diameter - 1 + n - alpha`, with no
/// case split, because star vertices stand in for unused layers.
pub fn pcn_exact_starred_with(
    g: &Graph,
    dm: &DistanceMatrix,
    budget: SolveBudget,
    opts: &PcnOptions,
) -> Result<PcnResult> {
    assert_eq!(g.n(), dm.n(), "distance matrix does not match the graph");
    let n = g.n();
    if g.is_complete() {
        return Ok(complete_graph_result(n));
    }
    let top = dm.diameter() as usize - 1;
    let f: Vec<usize> = (1..=top).collect();
    let lg = layered_graph(g, dm, &f, true)?;
    let warm = match &opts.warm_start {
        Some(ls) => Some(StableSet::from_bitset(ls.to_solver_bitset(&lg)?)),
        None => None,
    };
    // chi >= 2 on a non-complete graph, so alpha cannot exceed top + n - 2
    let nat_cap = (top + n) as u64 - 2;
    let cap = opts.alpha_cap.unwrap_or(nat_cap).min(nat_cap) as u32;
    let solver = MssSolver { budget, workers: opts.workers.max(1) };
    let res = solver.solve(lg.graph(), warm.as_ref(), Some(cap))?;
    let found = LayeredStableSet::from_solution(&lg, res.best.members());
    let total = (top + n) as u64;
    let upper = total - res.lower as u64;
    let witness = coloring_from_starred_set(&found, top);
    debug_assert!(verify_packing_coloring(g, dm, &witness).is_ok());
    if res.status == SolveStatus::Optimal {
        debug_assert_eq!(witness.k() as u64, upper);
        return Ok(PcnResult {
            lower: upper,
            upper,
            status: PcnStatus::Exact,
            witness: Some(witness),
            lower_source: LowerBoundSource::SolverBound,
        });
    }
    let lower = total - res.upper as u64;
    let status = if lower == upper { PcnStatus::Exact } else { PcnStatus::Bounds };
    Ok(PcnResult {
        lower,
        upper,
        status,
        witness: Some(witness),
        lower_source: LowerBoundSource::SolverBound,
    })
}

/// Exact value from a starred solve over layers `1..=t`, valid because the
/// supplied witness proves the value is at most `t`: the answer is
/// `n + t - alpha`. Useful when the diameter is large but the value is known
/// to be small. `t` is clamped to `n` (a value above `n` is never needed).
pub fn pcn_exact_starred_capped(
    g: &Graph,
    dm: &DistanceMatrix,
    t: usize,
    witness: &PackingColoring,
    budget: SolveBudget,
    workers: usize,
) -> Result<PcnResult> {
    assert_eq!(g.n(), dm.n(), "distance matrix does not match the graph");
    let n = g.n();
    if let Err(violation) = verify_packing_coloring(g, dm, witness) {
        return Err(Error::InvalidUpperBound { reason: violation.to_string() });
    }
    if t == 0 || witness.k() as usize > t {
        return Err(Error::InvalidUpperBound {
            reason: format!("witness uses color {}, above the cap t={t}", witness.k()),
        });
    }
    let t_eff = t.min(n);
    let f: Vec<usize> = (1..=t_eff).collect();
    let lg = layered_graph(g, dm, &f, true)?;
    // seed straight from the witness: colored classes become layer members,
    // unused layers take their star
    let mut seed = Bitset::new(lg.vertex_count());
    let mut used = vec![false; t_eff + 1];
    for v in 0..n {
        let c = witness.color(v) as usize;
        if c <= t_eff {
            seed.insert(lg.id_of(v, c));
            used[c] = true;
        }
    }
    for (k, &u) in used.iter().enumerate().skip(1) {
        if !u {
            seed.insert(lg.star_id(k).expect("starred graph"));
        }
    }
    let cap = ((n + t_eff) as u64 - 1).min(lg.vertex_count() as u64) as u32;
    let solver = MssSolver { budget, workers: workers.max(1) };
    let res = solver.solve(lg.graph(), Some(&StableSet::from_bitset(seed)), Some(cap))?;
    let found = LayeredStableSet::from_solution(&lg, res.best.members());
    let total = (n + t_eff) as u64;
    let upper = total - res.lower as u64;
    let out = coloring_from_starred_set(&found, t_eff);
    debug_assert!(verify_packing_coloring(g, dm, &out).is_ok());
    if res.status == SolveStatus::Optimal {
        return Ok(PcnResult {
            lower: upper,
            upper,
            status: PcnStatus::Exact,
            witness: Some(out),
            lower_source: LowerBoundSource::SolverBound,
        });
    }
    let lower = total - res.upper as u64;
    let status = if lower == upper { PcnStatus::Exact } else { PcnStatus::Bounds };
    Ok(PcnResult { lower, upper, status, witness: Some(out), lower_source: LowerBoundSource::SolverBound })
}

/// Reference computation of the starred stability number over layers
/// `1..=p` from plain (star-free) solves: the best of `alpha(1..=t) + p - t`
/// over `t <= p`. Each truncation must solve to optimality within its share
/// of the budget. Slower than solving the starred graph directly; used to
/// cross-check it.
pub fn starred_alpha_from_truncations(
    g: &Graph,
    dm: &DistanceMatrix,
    p: usize,
    budget: SolveBudget,
) -> Result<u64> {
    assert!(p >= 1, "need at least one layer");
    let per = budget.split(p as u64);
    let mut best = 0u64;
    for t in 1..=p {
        let f: Vec<usize> = (1..=t).collect();
        let lg = layered_graph(g, dm, &f, false)?;
        let solver = MssSolver { budget: per, workers: 1 };
        let res = solver.solve(lg.graph(), None, Some(g.n() as u32))?;
        if res.status != SolveStatus::Optimal {
            return Err(Error::BudgetExhausted);
        }
        best = best.max(res.lower as u64 + (p - t) as u64);
    }
    Ok(best)
}

/// Warm start and stability cap for the layered solves behind Hamming
/// graphs, from the explicit constructions and propagation bound.
#[derive(Clone, Debug)]
pub struct SolverHints {
    pub warm_start: Option<LayeredStableSet>,
    /// Sound upper bound on the stability number of the layered graph over
    /// layers `1..m-1` (starred or not, the two agree on Hamming graphs).
    pub alpha_cap: Option<u64>,
}

pub fn hamming_solver_hints(p: &HammingParams, vertex_budget: u64) -> Result<SolverHints> {
    if p.m() < 2 {
        return Ok(SolverHints { warm_start: None, alpha_cap: None });
    }
    let prev = HammingParams::new(p.q(), p.m() - 1)?;
    let cap = hamming::propagated_alpha_upper_bound(p, hamming::product_lower_bound(&prev));
    let warm = if p.m() == 3 && p.q() >= 3 {
        hamming::two_layer_stable_set(p.q())?
    } else {
        let diag = hamming::diagonal_stable_set(p, vertex_budget)?;
        let members = diag.vertices().into_iter().map(|v| (v, 1)).collect();
        LayeredStableSet::new(p.vertex_count() as usize, vec![1], members, vec![])?
    };
    Ok(SolverHints { warm_start: Some(warm), alpha_cap: Some(cap) })
}

/// Layer-by-layer construction of a large stable set of the layered Hamming
/// graph over `1..m-1`: the diagonal fills layer 1, and each further layer is
/// solved on the vertices no earlier layer used, within its share of the
/// budget. Returns certified bounds (exact whenever they close) plus the
/// constructed set for warm-starting an exact solve.
pub fn hamming_heuristic(
    p: &HammingParams,
    vertex_budget: u64,
    budget: SolveBudget,
    workers: usize,
) -> Result<(PcnResult, LayeredStableSet)> {
    let n = p.check_budget(vertex_budget)? as usize;
    let q = p.q() as u64;
    let m = p.m() as usize;
    if m == 1 {
        let ls = LayeredStableSet::new(n, vec![], vec![], vec![])?;
        return Ok((complete_graph_result(n), ls));
    }
    let g = hamming::generate(p, vertex_budget)?;
    let dm = hamming::hamming_distance_matrix(p, vertex_budget)?;
    let mut members: Vec<(usize, usize)> = hamming::diagonal_stable_set(p, vertex_budget)?
        .vertices()
        .into_iter()
        .map(|v| (v, 1))
        .collect();
    let mut frozen = Bitset::from_indices(n, members.iter().map(|&(v, _)| v));
    if m >= 3 {
        let solver = MssSolver { budget: budget.split(m as u64 - 2), workers: workers.max(1) };
        let layer2_seed: Option<Vec<usize>> = if m == 3 && p.q() >= 3 {
            Some(hamming::two_layer_stable_set(p.q())?.members_of_layer(2))
        } else {
            None
        };
        for k in 2..m {
            let gk = power_graph(&g, &dm, k);
            let mut keep = Bitset::full(n);
            keep.subtract(&frozen);
            let (sub, map) = gk.induced(&keep);
            if sub.n() == 0 {
                continue;
            }
            let warm = if k == 2 {
                layer2_seed.as_ref().map(|seed| {
                    let mut inverse = vec![usize::MAX; n];
                    for (i, &v) in map.iter().enumerate() {
                        inverse[v] = i;
                    }
                    StableSet::from_bitset(Bitset::from_indices(
                        sub.n(),
                        seed.iter().map(|&v| inverse[v]),
                    ))
                })
            } else {
                None
            };
            // a code of minimum distance k+1 has at most q^(m-k) words
            let mut cap = 1u64;
            for _ in 0..(m - k) {
                cap = cap.saturating_mul(q);
            }
            let res = solver.solve(&sub, warm.as_ref(), Some(cap.min(sub.n() as u64) as u32))?;
            for i in res.best.vertices() {
                members.push((map[i], k));
                frozen.insert(map[i]);
            }
        }
    }
    let ls = LayeredStableSet::new(n, (1..m).collect(), members, vec![])?;
    debug_assert!(ls.validate(&dm));
    let upper = (m as u64 - 1) + n as u64 - ls.len() as u64;
    let lower = hamming::product_lower_bound(p);
    let witness = coloring_from_layered_set(&ls, m - 1)?;
    verify_packing_coloring(&g, &dm, &witness).expect("constructed coloring must be valid");
    let status = if lower == upper { PcnStatus::Exact } else { PcnStatus::Bounds };
    let result = PcnResult {
        lower,
        upper,
        status,
        witness: Some(witness),
        lower_source: LowerBoundSource::ClosedForm,
    };
    Ok((result, ls))
}

/// Best available bracket for a Hamming graph: the layered heuristic first,
/// then, if its bounds do not already close, an exact solve of the layered
/// graph warm-started with the heuristic set and capped by the propagation
/// bound. The reported lower bound is the better of the product bound and
/// the solver's certificate.
pub fn hamming_bounds(
    p: &HammingParams,
    vertex_budget: u64,
    heuristic_budget: SolveBudget,
    exact_budget: SolveBudget,
    workers: usize,
) -> Result<(PcnResult, LayeredStableSet)> {
    let (heuristic, hset) = hamming_heuristic(p, vertex_budget, heuristic_budget, workers)?;
    if heuristic.status == PcnStatus::Exact {
        return Ok((heuristic, hset));
    }
    let n = p.check_budget(vertex_budget)? as usize;
    let m = p.m() as usize;
    let g = hamming::generate(p, vertex_budget)?;
    let dm = hamming::hamming_distance_matrix(p, vertex_budget)?;
    let f: Vec<usize> = (1..m).collect();
    let lg = layered_graph(&g, &dm, &f, false)?;
    let warm = StableSet::from_bitset(hset.to_solver_bitset(&lg)?);
    let hints = hamming_solver_hints(p, vertex_budget)?;
    let cap = hints.alpha_cap.unwrap_or(n as u64).min(n as u64) as u32;
    let solver = MssSolver { budget: exact_budget, workers: workers.max(1) };
    let res = solver.solve(lg.graph(), Some(&warm), Some(cap))?;
    let found = LayeredStableSet::from_solution(&lg, res.best.members());
    let total = (m as u64 - 1) + n as u64;
    // a full cover would mean the value is below the product bound
    debug_assert!((res.lower as usize) < n);
    let upper = total - res.lower as u64;
    let witness = coloring_from_layered_set(&found, m - 1)?;
    verify_packing_coloring(&g, &dm, &witness).expect("constructed coloring must be valid");
    let product = hamming::product_lower_bound(p);
    let solver_lower = total - res.upper as u64;
    let (lower, lower_source) = if product >= solver_lower {
        (product, LowerBoundSource::ClosedForm)
    } else {
        (solver_lower, LowerBoundSource::SolverBound)
    };
    let status = if lower == upper { PcnStatus::Exact } else { PcnStatus::Bounds };
    Ok((
        PcnResult { lower, upper, status, witness: Some(witness), lower_source },
        found,
    ))
}

const BRUTE_FORCE_MAX: usize = 12;

/// Exhaustive search over all packing colorings, for cross-checking the
/// solver pipelines on tiny graphs (at most 12 vertices).
pub fn pcn_bruteforce(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX });
    }
    let dm = all_pairs_distances_sequential(g)?;

    fn go(dm: &DistanceMatrix, colors: &mut [u32], v: usize, max_used: u32, best: &mut u32) {
        if max_used >= *best {
            return;
        }
        if v == colors.len() {
            *best = max_used;
            return;
        }
        for c in 1..*best {
            if max_used.max(c) >= *best {
                break;
            }
            let blocked = colors[..v]
                .iter()
                .enumerate()
                .any(|(u, &cu)| cu == c && dm.get(u, v) <= c);
            if blocked {
                continue;
            }
            colors[v] = c;
            go(dm, colors, v + 1, max_used.max(c), best);
            colors[v] = 0;
        }
    }

    let mut best = n as u32; // distinct colors everywhere is always valid
    let mut colors = vec![0u32; n];
    go(&dm, &mut colors, 0, 0, &mut best);
    Ok(best as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, cycle, path, petersen, star};

    fn dm_of(g: &Graph) -> DistanceMatrix {
        all_pairs_distances_sequential(g).unwrap()
    }

    #[test]
    fn verify_coloring_examples() {
        let g = cycle(4).unwrap();
        let dm = dm_of(&g);
        let good = PackingColoring::new(vec![1, 2, 1, 3]);
        assert!(verify_packing_coloring(&g, &dm, &good).is_ok());
        assert_eq!(good.k(), 3);

        let bad = PackingColoring::new(vec![1, 2, 1, 2]);
        assert_eq!(
            verify_packing_coloring(&g, &dm, &bad),
            Err(ColoringViolation::TooClose { u: 1, v: 3, color: 2, distance: 2 })
        );

        let short = PackingColoring::new(vec![1, 2]);
        assert!(matches!(
            verify_packing_coloring(&g, &dm, &short),
            Err(ColoringViolation::LengthMismatch { expected: 4, got: 2 })
        ));

        let hole = PackingColoring::new(vec![1, 0, 1, 2]);
        assert_eq!(
            verify_packing_coloring(&g, &dm, &hole),
            Err(ColoringViolation::Uncolored(1))
        );
    }

    #[test]
    fn bruteforce_small_values() {
        assert_eq!(pcn_bruteforce(&path(2).unwrap()).unwrap(), 2);
        assert_eq!(pcn_bruteforce(&path(4).unwrap()).unwrap(), 3);
        assert_eq!(pcn_bruteforce(&complete(3).unwrap()).unwrap(), 3);
        assert_eq!(pcn_bruteforce(&cycle(4).unwrap()).unwrap(), 3);
        assert_eq!(pcn_bruteforce(&cycle(5).unwrap()).unwrap(), 4);
        assert_eq!(pcn_bruteforce(&cycle(6).unwrap()).unwrap(), 4);
        assert_eq!(pcn_bruteforce(&star(3).unwrap()).unwrap(), 2);
        assert!(matches!(
            pcn_bruteforce(&path(13).unwrap()),
            Err(Error::TooLarge { n: 13, max: 12 })
        ));
    }

    #[test]
    fn iterative_on_named_graphs() {
        let cases: Vec<(Graph, u64)> = vec![
            (cycle(4).unwrap(), 3),
            (cycle(6).unwrap(), 4),
            (star(3).unwrap(), 2),
            (path(5).unwrap(), 3),
            (path(7).unwrap(), 3),
            (complete(5).unwrap(), 5),
            (petersen(), 7),
        ];
        for (g, expected) in cases {
            let dm = dm_of(&g);
            let res = pcn_exact_iterative(&g, &dm, SolveBudget::unlimited()).unwrap();
            assert_eq!(res.status, PcnStatus::Exact);
            assert_eq!((res.lower, res.upper), (expected, expected));
            let witness = res.witness.expect("exact results carry a witness");
            assert!(verify_packing_coloring(&g, &dm, &witness).is_ok());
            assert_eq!(witness.k() as u64, expected);
        }
    }

    #[test]
    fn starred_matches_iterative() {
        for g in [cycle(4).unwrap(), cycle(7).unwrap(), path(6).unwrap(), star(4).unwrap(), petersen()] {
            let dm = dm_of(&g);
            let a = pcn_exact_iterative(&g, &dm, SolveBudget::unlimited()).unwrap();
            let b = pcn_exact_starred(&g, &dm, SolveBudget::unlimited()).unwrap();
            assert_eq!(a.status, PcnStatus::Exact);
            assert_eq!(b.status, PcnStatus::Exact);
            assert_eq!(a.upper, b.upper);
            let witness = b.witness.unwrap();
            assert!(verify_packing_coloring(&g, &dm, &witness).is_ok());
            assert_eq!(witness.k() as u64, b.upper);
        }
    }

    #[test]
    fn hamming_q3_m2_through_both_pipelines() {
        let p = HammingParams::new(3, 2).unwrap();
        let g = hamming::generate(&p, 100).unwrap();
        let dm = dm_of(&g);
        let a = pcn_exact_iterative(&g, &dm, SolveBudget::unlimited()).unwrap();
        let b = pcn_exact_starred(&g, &dm, SolveBudget::unlimited()).unwrap();
        assert_eq!((a.lower, a.upper), (7, 7));
        assert_eq!((b.lower, b.upper), (7, 7));
    }

    #[test]
    fn capped_pipeline_on_star() {
        let g = star(3).unwrap();
        let dm = dm_of(&g);
        let witness = PackingColoring::new(vec![2, 1, 1, 1]);
        let res =
            pcn_exact_starred_capped(&g, &dm, 2, &witness, SolveBudget::unlimited(), 1).unwrap();
        assert_eq!(res.status, PcnStatus::Exact);
        assert_eq!((res.lower, res.upper), (2, 2));

        // cap below what the witness needs
        assert!(matches!(
            pcn_exact_starred_capped(&g, &dm, 1, &witness, SolveBudget::unlimited(), 1),
            Err(Error::InvalidUpperBound { .. })
        ));
        // not a packing coloring at all
        let bogus = PackingColoring::new(vec![1, 1, 1, 1]);
        assert!(matches!(
            pcn_exact_starred_capped(&g, &dm, 3, &bogus, SolveBudget::unlimited(), 1),
            Err(Error::InvalidUpperBound { .. })
        ));
    }

    #[test]
    fn capped_matches_iterative_on_small_graphs() {
        for g in [path(6).unwrap(), cycle(8).unwrap(), petersen()] {
            let dm = dm_of(&g);
            let exact = pcn_exact_iterative(&g, &dm, SolveBudget::unlimited()).unwrap();
            let witness = exact.witness.clone().unwrap();
            let t = witness.k() as usize;
            let res =
                pcn_exact_starred_capped(&g, &dm, t, &witness, SolveBudget::unlimited(), 1)
                    .unwrap();
            assert_eq!(res.status, PcnStatus::Exact);
            assert_eq!(res.upper, exact.upper);
        }
    }

    #[test]
    fn truncation_oracle_matches_starred_solve() {
        for g in [path(5).unwrap(), cycle(6).unwrap(), star(4).unwrap()] {
            let dm = dm_of(&g);
            let p = dm.diameter() as usize - 1;
            let f: Vec<usize> = (1..=p).collect();
            let lg = layered_graph(&g, &dm, &f, true).unwrap();
            let res = MssSolver::default().solve(lg.graph(), None, None).unwrap();
            let direct = res.lower as u64;
            let via_truncations =
                starred_alpha_from_truncations(&g, &dm, p, SolveBudget::unlimited()).unwrap();
            assert_eq!(direct, via_truncations);
        }
    }

    #[test]
    fn hints_close_hamming_instances_without_search() {
        // seed size equals the cap, so even a one-node budget settles these
        for (q, m, expected) in [(3u32, 2u32, 7u64), (4, 2, 13), (3, 3, 17), (4, 3, 46)] {
            let p = HammingParams::new(q, m).unwrap();
            let g = hamming::generate(&p, 1000).unwrap();
            let dm = hamming::hamming_distance_matrix(&p, 1000).unwrap();
            let hints = hamming_solver_hints(&p, 1000).unwrap();
            let opts = PcnOptions {
                warm_start: hints.warm_start,
                alpha_cap: hints.alpha_cap,
                workers: 1,
            };
            let res =
                pcn_exact_iterative_with(&g, &dm, SolveBudget::nodes(1), &opts).unwrap();
            assert_eq!(res.status, PcnStatus::Exact);
            assert_eq!(res.upper, expected);
        }
    }

    #[test]
    fn heuristic_closes_known_families() {
        for (q, m, expected) in [
            (2u32, 2u32, 3u64),
            (3, 2, 7),
            (4, 2, 13),
            (5, 2, 21),
            (3, 3, 17),
            (4, 3, 46),
        ] {
            let p = HammingParams::new(q, m).unwrap();
            let (res, ls) = hamming_heuristic(&p, 1000, SolveBudget::unlimited(), 1).unwrap();
            assert_eq!(res.status, PcnStatus::Exact, "q={q} m={m}");
            assert_eq!(res.upper, expected);
            assert_eq!(res.lower_source, LowerBoundSource::ClosedForm);
            let dm = hamming::hamming_distance_matrix(&p, 1000).unwrap();
            assert!(ls.validate(&dm));
        }
    }

    #[test]
    fn bounds_pipeline_on_binary_hamming() {
        // no closed form at q=2, so the exact phase has to finish the job
        for (m, expected) in [(2u32, 3u64), (3, 5), (4, 7)] {
            let p = HammingParams::new(2, m).unwrap();
            let (res, ls) = hamming_bounds(
                &p,
                1000,
                SolveBudget::unlimited(),
                SolveBudget::unlimited(),
                1,
            )
            .unwrap();
            assert_eq!(res.status, PcnStatus::Exact, "m={m}");
            assert_eq!((res.lower, res.upper), (expected, expected));
            let dm = hamming::hamming_distance_matrix(&p, 1000).unwrap();
            assert!(ls.validate(&dm));
        }
    }

    #[test]
    fn layered_set_construction_and_validation() {
        let g = cycle(5).unwrap();
        let dm = dm_of(&g);
        let ok = LayeredStableSet::new(5, vec![1, 2], vec![(0, 1), (2, 1), (4, 2)], vec![])
            .unwrap();
        assert!(ok.validate(&dm));
        assert_eq!(ok.members_of_layer(1), vec![0, 2]);
        assert_eq!(ok.len(), 3);

        // vertices 0 and 2 are at distance 2, too close for layer 2
        let close = LayeredStableSet::new(5, vec![1, 2], vec![(0, 2), (2, 2)], vec![]).unwrap();
        assert!(!close.validate(&dm));

        // same vertex in two layers breaks the column rule
        let dup = LayeredStableSet::new(5, vec![1, 2], vec![(0, 1), (0, 2)], vec![]).unwrap();
        assert!(!dup.validate(&dm));

        // a starred layer must stay empty
        let starred =
            LayeredStableSet::new(5, vec![1, 2], vec![(0, 2)], vec![2]).unwrap();
        assert!(!starred.validate(&dm));

        assert!(matches!(
            LayeredStableSet::new(5, vec![1], vec![(7, 1)], vec![]),
            Err(Error::VertexOutOfRange { vertex: 7, n: 5 })
        ));
        assert!(matches!(
            LayeredStableSet::new(5, vec![1], vec![(0, 3)], vec![]),
            Err(Error::LayerOutOfRange { layer: 3, .. })
        ));
    }

    #[test]
    fn layered_set_solver_round_trip() {
        let g = cycle(6).unwrap();
        let dm = dm_of(&g);
        let lg = layered_graph(&g, &dm, &[1, 2], true).unwrap();
        let ls = LayeredStableSet::new(6, vec![1, 2], vec![(0, 1), (2, 1), (1, 2)], vec![]).unwrap();
        let bits = ls.to_solver_bitset(&lg).unwrap();
        let back = LayeredStableSet::from_solution(&lg, &bits);
        assert_eq!(back, ls);

        // stars survive the round trip on a starred graph
        let with_star =
            LayeredStableSet::new(6, vec![1, 2], vec![(0, 1), (2, 1)], vec![2]).unwrap();
        let bits = with_star.to_solver_bitset(&lg).unwrap();
        assert_eq!(LayeredStableSet::from_solution(&lg, &bits), with_star);

        // but are rejected when the graph has no stars
        let plain = layered_graph(&g, &dm, &[1, 2], false).unwrap();
        assert!(matches!(
            with_star.to_solver_bitset(&plain),
            Err(Error::StarMembersPresent)
        ));
    }

    #[test]
    fn coloring_conversion_examples() {
        // diagonal of the 3x3 rook graph: 3 covered, 6 singletons, 7 colors
        let p = HammingParams::new(3, 2).unwrap();
        let g = hamming::generate(&p, 100).unwrap();
        let dm = dm_of(&g);
        let diag = hamming::diagonal_stable_set(&p, 100).unwrap();
        let members = diag.vertices().into_iter().map(|v| (v, 1)).collect();
        let ls = LayeredStableSet::new(9, vec![1], members, vec![]).unwrap();
        let coloring = coloring_from_layered_set(&ls, 1).unwrap();
        assert_eq!(coloring.k(), 7);
        assert!(verify_packing_coloring(&g, &dm, &coloring).is_ok());

        let starred = LayeredStableSet::new(9, vec![1], vec![], vec![1]).unwrap();
        assert!(matches!(
            coloring_from_layered_set(&starred, 1),
            Err(Error::StarMembersPresent)
        ));
    }

    #[test]
    fn starred_witness_normalization_moves_classes_down() {
        // members sit in layer 2 while layer 1 holds a star; the witness must
        // slide the class down and reuse layer 2 for a leftover vertex
        let g = cycle(6).unwrap();
        let dm = dm_of(&g);
        let ls = LayeredStableSet::new(6, vec![1, 2], vec![(0, 2), (3, 2)], vec![1]).unwrap();
        assert!(ls.validate(&dm));
        let coloring = coloring_from_starred_set(&ls, 2);
        assert!(verify_packing_coloring(&g, &dm, &coloring).is_ok());
        assert_eq!(coloring.color(0), 1);
        assert_eq!(coloring.color(3), 1);
        // uncovered vertices: 1, 2, 4, 5 -> colors 2 (freed star layer), then 3, 4, 5
        assert_eq!(coloring.color(1), 2);
        assert_eq!(coloring.colors()[2..], [3, 1, 4, 5][..]);
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        let g = petersen();
        let dm = dm_of(&g);
        let res = pcn_exact_iterative(&g, &dm, SolveBudget::nodes(1)).unwrap();
        assert_eq!(res.status, PcnStatus::Bounds);
        assert!(res.lower <= 7 && 7 <= res.upper, "bracket {:?} misses 7", (res.lower, res.upper));
        let witness = res.witness.unwrap();
        assert!(verify_packing_coloring(&g, &dm, &witness).is_ok());
        assert_eq!(witness.k() as u64, res.upper);
    }

    #[test]
    fn pipelines_match_bruteforce_on_tiny_graphs() {
        let mut graphs = vec![star(5).unwrap(), cycle(8).unwrap()];
        for n in 3..=8 {
            graphs.push(path(n).unwrap());
        }
        for g in graphs {
            let dm = dm_of(&g);
            let brute = pcn_bruteforce(&g).unwrap();
            let a = pcn_exact_iterative(&g, &dm, SolveBudget::unlimited()).unwrap();
            let b = pcn_exact_starred(&g, &dm, SolveBudget::unlimited()).unwrap();
            assert_eq!(a.upper, brute);
            assert_eq!(b.upper, brute);
        }
    }
}
