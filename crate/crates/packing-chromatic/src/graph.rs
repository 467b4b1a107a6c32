//! Simple undirected graphs with bitset adjacency rows, BFS all-pairs
//! distances, distance powers, and layered graphs.
//!
//! Vertices are `0..n` internally; the 1-based external numbering only
//! appears in file formats and CLI output.

use crate::bitset::Bitset;
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const UNREACHED: u32 = u32::MAX;

/// A finite simple undirected graph.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Bitset>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list. Rejects self-loops,
    /// duplicate edges, and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Bitset::new(n); n];
        let mut count = 0usize;
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if adj[u].contains(v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u].insert(v);
            adj[v].insert(u);
            count += 1;
        }
        Ok(Graph {
            adj,
            edge_count: count,
        })
    }

    /// Assembles a graph from prebuilt symmetric adjacency rows.
    pub(crate) fn from_rows(adj: Vec<Bitset>) -> Self {
        let degree_sum: usize = adj.iter().map(|row| row.len()).sum();
        debug_assert!(degree_sum.is_multiple_of(2));
        Graph {
            adj,
            edge_count: degree_sum / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n() {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edge_count == n * (n.saturating_sub(1)) / 2
    }

    /// The subgraph induced by `keep`, along with the original index of each
    /// surviving vertex (new id -> old id, ascending).
    pub fn induced(&self, keep: &Bitset) -> (Graph, Vec<usize>) {
        let old_ids: Vec<usize> = keep.iter().collect();
        let mut new_of_old = vec![usize::MAX; self.n()];
        for (new, &old) in old_ids.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut adj = vec![Bitset::new(old_ids.len()); old_ids.len()];
        for (new, &old) in old_ids.iter().enumerate() {
            let mut row = self.adj[old].clone();
            row.intersect_with(keep);
            for w in row.iter() {
                adj[new].insert(new_of_old[w]);
            }
        }
        (Graph::from_rows(adj), old_ids)
    }
}

/// All-pairs shortest path distances of a connected graph.
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
    diameter: u32,
}

impl DistanceMatrix {
    pub(crate) fn from_rows(n: usize, dist: Vec<u32>) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        let diameter = dist.iter().copied().max().unwrap_or(0);
        debug_assert_ne!(diameter, UNREACHED);
        DistanceMatrix { n, dist, diameter }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// Vertices at distance at most `r` from `v`, including `v` itself.
    pub fn ball(&self, v: usize, r: u32) -> Bitset {
        let mut b = Bitset::new(self.n);
        for u in 0..self.n {
            if self.get(v, u) <= r {
                b.insert(u);
            }
        }
        b
    }
}

fn bfs_row(g: &Graph, src: usize) -> Vec<u32> {
    let n = g.n();
    let mut dist = vec![UNREACHED; n];
    let mut visited = Bitset::new(n);
    let mut frontier = Bitset::new(n);
    visited.insert(src);
    frontier.insert(src);
    dist[src] = 0;
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Bitset::new(n);
        for u in frontier.iter() {
            next.union_with(g.neighbors(u));
        }
        next.subtract(&visited);
        for v in next.iter() {
            dist[v] = level;
        }
        visited.union_with(&next);
        frontier = next;
    }
    dist
}

fn assemble_distances(g: &Graph, rows: Vec<Vec<u32>>) -> Result<DistanceMatrix> {
    let n = g.n();
    let mut dist = Vec::with_capacity(n * n);
    for (src, row) in rows.into_iter().enumerate() {
        if let Some(unreachable) = row.iter().position(|&d| d == UNREACHED) {
            return Err(Error::Disconnected {
                from: src,
                unreachable,
            });
        }
        dist.extend_from_slice(&row);
    }
    Ok(DistanceMatrix::from_rows(n, dist))
}

/// BFS from every vertex; errors out on disconnected graphs. The unreachable
/// sentinel never escapes this function.
pub fn all_pairs_distances(g: &Graph) -> Result<DistanceMatrix> {
    #[cfg(feature = "parallel")]
    {
        let rows: Vec<Vec<u32>> = (0..g.n()).into_par_iter().map(|s| bfs_row(g, s)).collect();
        assemble_distances(g, rows)
    }
    #[cfg(not(feature = "parallel"))]
    all_pairs_distances_sequential(g)
}

/// Sequential reference implementation of [`all_pairs_distances`]; also the
/// fallback body when the `parallel` feature is disabled.
pub fn all_pairs_distances_sequential(g: &Graph) -> Result<DistanceMatrix> {
    let rows: Vec<Vec<u32>> = (0..g.n()).map(|s| bfs_row(g, s)).collect();
    assemble_distances(g, rows)
}

/// The distance power `G^k`: same vertices, an edge wherever the distance in
/// `G` is between 1 and `k`.
pub fn power_graph(g: &Graph, dm: &DistanceMatrix, k: usize) -> Graph {
    assert!(k >= 1, "power exponent must be at least 1");
    assert_eq!(g.n(), dm.n());
    let n = g.n();
    let k = k as u32;
    let build_row = |v: usize| {
        let mut row = Bitset::new(n);
        for u in 0..n {
            let d = dm.get(v, u);
            if d >= 1 && d <= k {
                row.insert(u);
            }
        }
        row
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Bitset> = (0..n).into_par_iter().map(build_row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Bitset> = (0..n).map(build_row).collect();
    Graph::from_rows(rows)
}

/// A vertex of a layered graph: either a copy `(v, k)` of a base vertex in
/// layer `k`, or the star vertex of layer `k`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LayeredVertex {
    Base { vertex: usize, layer: usize },
    Star { layer: usize },
}

/// The layered graph `G^F` (or its starred variant `G_*^F`).
///
/// For each layer `k` in `F` there is a copy `(v, k)` of every base vertex.
/// Within layer `k`, copies are adjacent iff the base distance is at most
/// `k`; copies of the same base vertex in different layers are always
/// adjacent, so columns are cliques. The starred variant appends one star
/// vertex per layer, adjacent to every copy in its own layer and to nothing
/// else. Stable sets of `G^F` with one member per column correspond to
/// packing colorings using colors from `F`.
///
/// Numbering is layer-major: `(v, k)` has id `rank(k) * n + v` with layers in
/// ascending order, and star vertices follow all layer blocks, again in layer
/// order. LP exports reuse this numbering for variable order.
pub struct LayeredGraph {
    graph: Graph,
    base_n: usize,
    layers: Vec<usize>,
    starred: bool,
}

impl LayeredGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn starred(&self) -> bool {
        self.starred
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    fn layer_rank(&self, layer: usize) -> Option<usize> {
        self.layers.binary_search(&layer).ok()
    }

    /// Id of the copy `(v, layer)`. Panics if the layer is not present.
    pub fn id_of(&self, v: usize, layer: usize) -> usize {
        debug_assert!(v < self.base_n);
        let rank = self
            .layer_rank(layer)
            .expect("layer not present in layered graph");
        rank * self.base_n + v
    }

    /// Id of the star vertex of `layer`, if this is a starred graph.
    pub fn star_id(&self, layer: usize) -> Option<usize> {
        if !self.starred {
            return None;
        }
        self.layer_rank(layer)
            .map(|rank| self.base_n * self.layers.len() + rank)
    }

    pub fn vertex_at(&self, id: usize) -> LayeredVertex {
        let block = self.base_n * self.layers.len();
        if id < block {
            LayeredVertex::Base {
                vertex: id % self.base_n,
                layer: self.layers[id / self.base_n],
            }
        } else {
            debug_assert!(self.starred && id - block < self.layers.len());
            LayeredVertex::Star {
                layer: self.layers[id - block],
            }
        }
    }
}

/// Materializes the layered graph of `g` over the layer set `f`.
///
/// `f` is interpreted as a set; it must be nonempty and every layer must lie
/// in `1..=n`.
pub fn layered_graph(
    g: &Graph,
    dm: &DistanceMatrix,
    f: &[usize],
    starred: bool,
) -> Result<LayeredGraph> {
    if f.is_empty() {
        return Err(Error::EmptyLayerSet);
    }
    let n = g.n();
    let mut layers: Vec<usize> = f.to_vec();
    layers.sort_unstable();
    layers.dedup();
    for &k in &layers {
        if k == 0 || k > n {
            return Err(Error::LayerOutOfRange { layer: k, max: n });
        }
    }
    let l = layers.len();
    let total = n * l + if starred { l } else { 0 };
    let layers_ref = &layers;
    let build_row = |id: usize| -> Bitset {
        let mut row = Bitset::new(total);
        if id < n * l {
            let rank = id / n;
            let v = id % n;
            let k = layers_ref[rank] as u32;
            // intra-layer edges by base distance
            for u in 0..n {
                let d = dm.get(v, u);
                if d >= 1 && d <= k {
                    row.insert(rank * n + u);
                }
            }
            // column edges to every other layer
            for r in 0..l {
                if r != rank {
                    row.insert(r * n + v);
                }
            }
            if starred {
                row.insert(n * l + rank);
            }
        } else {
            // star of layer `rank`: adjacent to its whole layer block only
            let rank = id - n * l;
            for v in 0..n {
                row.insert(rank * n + v);
            }
        }
        row
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Bitset> = (0..total).into_par_iter().map(build_row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Bitset> = (0..total).map(build_row).collect();
    Ok(LayeredGraph {
        graph: Graph::from_rows(rows),
        base_n: n,
        layers,
        starred,
    })
}
