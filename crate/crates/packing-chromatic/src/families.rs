//! Small named graph families and seeded random graphs, used by the CLI and
//! the test suites.

use rand::Rng;

use crate::graph::Graph;
use crate::{Error, Result};

pub fn path(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::VertexOutOfRange { vertex: n, n: 3 });
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges)
}

/// The star `K_{1,leaves}`; vertex 0 is the center.
pub fn star(leaves: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::new(leaves + 1, &edges)
}

pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((i, i + 5)); // spokes
        edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
    }
    Graph::new(10, &edges).expect("petersen edges are valid")
}

/// G(n, p) with each pair drawn independently; may be disconnected.
pub fn random_graph<R: Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// Random connected graph: a random attachment tree plus G(n, p) extras.
pub fn random_connected_graph<R: Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        edges.push((parent, v));
    }
    let tree: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
    for u in 0..n {
        for v in (u + 1)..n {
            if !tree.contains(&(u, v)) && rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}
