//! Exact and heuristic computation of the packing chromatic number of finite
//! graphs through reductions to maximum stable set problems.
//!
//! A packing coloring assigns each vertex a color `i >= 1` so that any two
//! distinct vertices sharing color `i` are at distance at least `i + 1`. The
//! packing chromatic number is the smallest number of colors admitting such
//! an assignment. The crate computes it by relating packing colorings to
//! stable sets of layered graphs built from distance powers:
//!
//! * [`graph`] — bitset-backed simple graphs, BFS all-pairs distances,
//!   distance powers `G^k`, and the layered graphs `G^F` / starred `G_*^F`
//!   whose stable sets encode packing colorings;
//! * [`hamming`] — Hamming graph generation, closed-form values and bounds,
//!   and explicit stable-set constructions;
//! * [`mss`] — deterministic greedy stable sets, clique edge covers, and a
//!   budgeted branch-and-bound maximum-stable-set solver;
//! * [`pcn`] — packing-coloring verification, the exact pipelines, a
//!   layer-by-layer heuristic for Hamming graphs, and a brute-force oracle;
//! * [`io`] — DIMACS graphs, LP model export, coloring and stable-set files,
//!   and bounds tables;
//! * [`cli`] — the `pcn` command line.
//!
//! With the default `parallel` feature the distance computation, graph
//! construction, and solver can fan work out over rayon; without it every
//! code path falls back to the sequential implementation.

pub mod bitset;
pub mod cli;
pub mod families;
pub mod graph;
pub mod hamming;
pub mod io;
pub mod mss;
pub mod pcn;

mod error;

pub use error::{Error, Result};
