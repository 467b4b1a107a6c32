//! Hamming graphs `H_{q,m}` and their closed-form packing chromatic values,
//! bounds, and explicit stable-set constructions.
//!
//! `H_{q,m}` has the `q^m` words of length `m` over `{0, .., q-1}` as
//! vertices, two words being adjacent when they differ in exactly one
//! coordinate; graph distance is then the number of differing coordinates
//! (Hamming distance), and the diameter is `m`. Stable sets of the distance
//! power `H^k` are exactly codes of minimum distance `k + 1`.

use crate::bitset::Bitset;
use crate::graph::{DistanceMatrix, Graph};
use crate::mss::StableSet;
use crate::pcn::LayeredStableSet;
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default cap on materialized vertices; override with the CLI flag or the
/// `PCN_VERTEX_BUDGET` environment variable.
pub const DEFAULT_VERTEX_BUDGET: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HammingParams {
    q: u32,
    m: u32,
}

impl HammingParams {
    pub fn new(q: u32, m: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall { got: q, min: 2 });
        }
        if m < 1 {
            return Err(Error::WordLengthTooSmall(m));
        }
        Ok(HammingParams { q, m })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `q^m`, saturating on overflow so budget checks still fire.
    pub fn vertex_count(&self) -> u64 {
        let mut n = 1u64;
        for _ in 0..self.m {
            n = n.saturating_mul(self.q as u64);
        }
        n
    }

    pub fn check_budget(&self, vertex_budget: u64) -> Result<u64> {
        let n = self.vertex_count();
        if n > vertex_budget {
            return Err(Error::VertexBudgetExceeded {
                requested: n,
                budget: vertex_budget,
            });
        }
        Ok(n)
    }
}

/// A word of `H_{q,m}`. Coordinate 1 is the most significant digit of the
/// base-`q` rank, so rank order is lexicographic on coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub coords: Vec<u32>,
}

impl Word {
    pub fn from_rank(p: &HammingParams, rank: u64) -> Word {
        let mut coords = vec![0u32; p.m as usize];
        let mut r = rank;
        for i in (0..p.m as usize).rev() {
            coords[i] = (r % p.q as u64) as u32;
            r /= p.q as u64;
        }
        Word { coords }
    }

    pub fn rank(&self, q: u32) -> u64 {
        self.coords
            .iter()
            .fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }

    pub fn distance(&self, other: &Word) -> u32 {
        self.coords
            .iter()
            .zip(&other.coords)
            .filter(|(a, b)| a != b)
            .count() as u32
    }
}

fn digits(rank: u64, q: u64, m: usize, out: &mut [u32]) {
    let mut r = rank;
    for i in (0..m).rev() {
        out[i] = (r % q) as u32;
        r /= q;
    }
}

/// Builds `H_{q,m}` with words numbered by base-`q` rank.
pub fn generate(p: &HammingParams, vertex_budget: u64) -> Result<Graph> {
    let n = p.check_budget(vertex_budget)? as usize;
    let q = p.q as u64;
    let m = p.m as usize;
    let build_row = |rank: usize| {
        let mut row = Bitset::new(n);
        let mut place = 1u64;
        for _ in 0..m {
            let digit = (rank as u64 / place) % q;
            let base = rank as u64 - digit * place;
            for other in 0..q {
                if other != digit {
                    row.insert((base + other * place) as usize);
                }
            }
            place *= q;
        }
        row
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Bitset> = (0..n).into_par_iter().map(build_row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Bitset> = (0..n).map(build_row).collect();
    Ok(Graph::from_rows(rows))
}

/// All-pairs distances straight from coordinate differences, no BFS.
pub fn hamming_distance_matrix(p: &HammingParams, vertex_budget: u64) -> Result<DistanceMatrix> {
    let n = p.check_budget(vertex_budget)? as usize;
    let q = p.q as u64;
    let m = p.m as usize;
    let build_row = |u: usize| {
        let mut du = vec![0u32; m];
        digits(u as u64, q, m, &mut du);
        let mut dv = vec![0u32; m];
        let mut row = vec![0u32; n];
        for (v, slot) in row.iter_mut().enumerate() {
            digits(v as u64, q, m, &mut dv);
            *slot = du.iter().zip(&dv).filter(|(a, b)| a != b).count() as u32;
        }
        row
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<u32>> = (0..n).into_par_iter().map(build_row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<u32>> = (0..n).map(build_row).collect();
    let mut dist = Vec::with_capacity(n * n);
    for row in rows {
        dist.extend_from_slice(&row);
    }
    Ok(DistanceMatrix::from_rows(n, dist))
}

fn diagonal_ranks(p: &HammingParams) -> Vec<usize> {
    let n = p.vertex_count() as usize;
    let q = p.q as u64;
    let m = p.m as usize;
    let mut d = vec![0u32; m];
    let mut out = Vec::with_capacity((n as u64 / q).max(1) as usize);
    for rank in 0..n {
        digits(rank as u64, q, m, &mut d);
        if d.iter().map(|&x| x as u64).sum::<u64>() % q == 0 {
            out.push(rank);
        }
    }
    out
}

/// The diagonal stable set: all words whose coordinate sum is divisible by
/// `q`. Two such words cannot differ in exactly one coordinate, so the set
/// is stable in `H_{q,m}`; its size is `q^(m-1)`.
pub fn diagonal_stable_set(p: &HammingParams, vertex_budget: u64) -> Result<StableSet> {
    let n = p.check_budget(vertex_budget)? as usize;
    let ranks = diagonal_ranks(p);
    let mut set = StableSet::from_vertices(n, &ranks);
    // stability holds by construction; record it without a graph in hand
    debug_assert_eq!(ranks.len() as u64, p.vertex_count() / p.q as u64);
    set.certify_unchecked();
    Ok(set)
}

/// A permutation `a` of `{0, .., q-1}` with `2i + a_i` never divisible by
/// `q`; needs `q >= 3`. Used as third coordinates for the second layer of
/// [`two_layer_stable_set`].
///
/// First half: `a_i = q - 2(i+1)`; second half: `a_i = 2q - 2(i+1)`, plus 1
/// when `q` is even. Both claimed properties are re-checked at runtime and
/// violations panic rather than silently producing a bad construction.
pub fn sum_avoiding_permutation(q: u32) -> Result<Vec<u32>> {
    if q < 3 {
        return Err(Error::AlphabetTooSmall { got: q, min: 3 });
    }
    let half = q / 2;
    let mut a = vec![0u32; q as usize];
    for i in 0..q {
        let v = if i < half {
            q - 2 * (i + 1)
        } else if q % 2 == 1 {
            2 * q - 2 * (i + 1)
        } else {
            2 * q - 2 * (i + 1) + 1
        };
        a[i as usize] = v;
    }
    let mut seen = vec![false; q as usize];
    for (i, &ai) in a.iter().enumerate() {
        assert!(
            ai < q && !seen[ai as usize],
            "third-coordinate map is not a permutation for q={q}"
        );
        seen[ai as usize] = true;
        assert!(
            !(2 * i as u64 + ai as u64).is_multiple_of(q as u64),
            "third-coordinate map hits the diagonal for q={q}, i={i}"
        );
    }
    Ok(a)
}

/// The explicit two-layer stable set of the layered graph of `H_{q,3}` over
/// layers `{1, 2}`: the diagonal of `H_{q,3}` in layer 1 (`q^2` words) plus
/// the `q` words `(i, i, a_i)` in layer 2. The layer-2 words pairwise differ
/// in all three coordinates, and `2i + a_i` not divisible by `q` keeps them
/// off the diagonal, so columns stay disjoint. Total size `q^2 + q`.
pub fn two_layer_stable_set(q: u32) -> Result<LayeredStableSet> {
    let a = sum_avoiding_permutation(q)?;
    let p = HammingParams::new(q, 3)?;
    let base_n = p.vertex_count() as usize;
    let mut members: Vec<(usize, usize)> = diagonal_ranks(&p)
        .into_iter()
        .map(|v| (v, 1))
        .collect();
    let q64 = q as u64;
    for i in 0..q as u64 {
        let rank = i * q64 * q64 + i * q64 + a[i as usize] as u64;
        members.push((rank as usize, 2));
    }
    LayeredStableSet::new(base_n, vec![1, 2], members, vec![])
}

/// Lower bound on the packing chromatic number of `H_{q,m}` obtained by
/// peeling one factor at a time off the product:
/// `m - 1 + q^m - sum_{k=1}^{m-1} q^k`. Exact for `m = 1` (complete graph).
pub fn product_lower_bound(p: &HammingParams) -> u64 {
    let q = p.q as u64;
    let mut sum = 0u64;
    let mut pow = 1u64;
    for _ in 1..p.m {
        pow = pow.saturating_mul(q);
        sum = sum.saturating_add(pow);
    }
    (p.m as u64 - 1) + p.vertex_count() - sum
}

/// Closed-form packing chromatic number: `1 + q^2 - q` for `m = 2`, and
/// `2 + q^3 - q^2 - q` for `m = 3` with `q >= 3`.
pub fn closed_form_pcn(p: &HammingParams) -> Result<u64> {
    let q = p.q as u64;
    match p.m {
        2 => Ok(1 + q * q - q),
        3 if p.q >= 3 => Ok(2 + q * q * q - q * q - q),
        _ => Err(Error::ClosedFormUnavailable { q: p.q, m: p.m }),
    }
}

/// Upper bound on the stability number of the layered graph of `H_{q,m}`
/// over layers `1..m-1`, propagated from a valid packing chromatic lower
/// bound `prev_lower` for `H_{q,m-1}`:
/// `m - 1 + q^m - (q * prev_lower - (q-1)(m-1))`.
pub fn propagated_alpha_upper_bound(p: &HammingParams, prev_lower: u64) -> u64 {
    assert!(p.m >= 2, "propagation needs m >= 2");
    let q = p.q as i128;
    let m1 = (p.m - 1) as i128;
    let val = m1 + p.vertex_count() as i128 - (q * prev_lower as i128 - (q - 1) * m1);
    val.max(0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_distances_sequential, power_graph};

    #[test]
    fn generate_small_graphs() {
        let c4 = generate(&HammingParams::new(2, 2).unwrap(), 100).unwrap();
        assert_eq!((c4.n(), c4.edge_count()), (4, 4));

        let h32 = generate(&HammingParams::new(3, 2).unwrap(), 100).unwrap();
        assert_eq!((h32.n(), h32.edge_count()), (9, 18));

        let cube = generate(&HammingParams::new(2, 3).unwrap(), 100).unwrap();
        assert_eq!((cube.n(), cube.edge_count()), (8, 12));
        let dm = all_pairs_distances_sequential(&cube).unwrap();
        assert_eq!(dm.diameter(), 3);
    }

    #[test]
    fn edge_count_formula_holds() {
        for (q, m) in [(2u32, 4u32), (3, 3), (4, 2), (5, 2)] {
            let p = HammingParams::new(q, m).unwrap();
            let g = generate(&p, 10_000).unwrap();
            let expected = m as u64 * (q as u64 - 1) * p.vertex_count() / 2;
            assert_eq!(g.edge_count() as u64, expected);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = HammingParams::new(10, 4).unwrap();
        assert!(matches!(
            generate(&p, 100),
            Err(Error::VertexBudgetExceeded {
                requested: 10_000,
                budget: 100
            })
        ));
    }

    #[test]
    fn distance_matrix_matches_bfs() {
        for (q, m) in [(3u32, 3u32), (2, 4)] {
            let p = HammingParams::new(q, m).unwrap();
            let g = generate(&p, 10_000).unwrap();
            let fast = hamming_distance_matrix(&p, 10_000).unwrap();
            let bfs = all_pairs_distances_sequential(&g).unwrap();
            for u in 0..g.n() {
                for v in 0..g.n() {
                    assert_eq!(fast.get(u, v), bfs.get(u, v));
                }
            }
            assert_eq!(fast.diameter(), m);
        }
    }

    #[test]
    fn diagonal_examples() {
        let p = HammingParams::new(3, 2).unwrap();
        let s = diagonal_stable_set(&p, 100).unwrap();
        // (0,0), (1,2), (2,1)
        assert_eq!(s.vertices(), vec![0, 5, 7]);

        let p = HammingParams::new(2, 3).unwrap();
        assert_eq!(diagonal_stable_set(&p, 100).unwrap().len(), 4);

        let p = HammingParams::new(5, 3).unwrap();
        let s = diagonal_stable_set(&p, 1000).unwrap();
        assert_eq!(s.len(), 25);
        let g = generate(&p, 1000).unwrap();
        let mut s = s;
        assert!(s.certify(&g));
    }

    #[test]
    fn permutation_frozen_values() {
        assert_eq!(sum_avoiding_permutation(3).unwrap(), vec![1, 2, 0]);
        assert_eq!(sum_avoiding_permutation(4).unwrap(), vec![2, 0, 3, 1]);
        assert_eq!(sum_avoiding_permutation(5).unwrap(), vec![3, 1, 4, 2, 0]);
        assert!(matches!(
            sum_avoiding_permutation(2),
            Err(Error::AlphabetTooSmall { got: 2, min: 3 })
        ));
    }

    #[test]
    fn two_layer_set_examples() {
        for (q, size) in [(3u32, 12usize), (4, 20), (10, 110)] {
            let s = two_layer_stable_set(q).unwrap();
            assert_eq!(s.len(), size);
        }
        // validate against true distances for a couple of sizes
        for q in [3u32, 4, 5] {
            let p = HammingParams::new(q, 3).unwrap();
            let dm = hamming_distance_matrix(&p, 10_000).unwrap();
            let s = two_layer_stable_set(q).unwrap();
            assert!(s.validate(&dm));
        }
    }

    #[test]
    fn two_layer_set_is_stable_in_the_layered_graph() {
        let q = 3;
        let p = HammingParams::new(q, 3).unwrap();
        let g = generate(&p, 100).unwrap();
        let dm = all_pairs_distances_sequential(&g).unwrap();
        let s = two_layer_stable_set(q).unwrap();
        // layer-2 part stable in H^2
        let h2 = power_graph(&g, &dm, 2);
        let layer2 = s.members_of_layer(2);
        for (i, &u) in layer2.iter().enumerate() {
            for &v in &layer2[i + 1..] {
                assert!(!h2.are_adjacent(u, v));
            }
        }
    }

    #[test]
    fn bound_values() {
        let p = |q, m| HammingParams::new(q, m).unwrap();
        assert_eq!(product_lower_bound(&p(3, 4)), 45);
        assert_eq!(product_lower_bound(&p(4, 2)), 13);
        assert_eq!(product_lower_bound(&p(2, 1)), 2);

        assert_eq!(closed_form_pcn(&p(3, 2)).unwrap(), 7);
        assert_eq!(closed_form_pcn(&p(3, 3)).unwrap(), 17);
        assert_eq!(closed_form_pcn(&p(4, 3)).unwrap(), 46);
        assert!(matches!(
            closed_form_pcn(&p(2, 3)),
            Err(Error::ClosedFormUnavailable { q: 2, m: 3 })
        ));
        assert!(matches!(
            closed_form_pcn(&p(3, 4)),
            Err(Error::ClosedFormUnavailable { q: 3, m: 4 })
        ));

        assert_eq!(propagated_alpha_upper_bound(&p(3, 3), 7), 12);
        assert_eq!(propagated_alpha_upper_bound(&p(3, 4), 17), 39);
        assert_eq!(propagated_alpha_upper_bound(&p(2, 2), 2), 2);
    }

    #[test]
    fn closed_form_agrees_with_product_bound() {
        for q in 2..=12u32 {
            let p2 = HammingParams::new(q, 2).unwrap();
            assert_eq!(closed_form_pcn(&p2).unwrap(), product_lower_bound(&p2));
            if q >= 3 {
                let p3 = HammingParams::new(q, 3).unwrap();
                assert_eq!(closed_form_pcn(&p3).unwrap(), product_lower_bound(&p3));
            }
        }
    }

    #[test]
    fn word_rank_round_trip() {
        let p = HammingParams::new(5, 3).unwrap();
        for rank in [0u64, 1, 24, 124] {
            let w = Word::from_rank(&p, rank);
            assert_eq!(w.rank(5), rank);
        }
        // coordinate 1 is most significant
        let w = Word::from_rank(&p, 124);
        assert_eq!(w.coords, vec![4, 4, 4]);
        let a = Word::from_rank(&p, 30);
        let b = Word::from_rank(&p, 31);
        assert_eq!(a.distance(&b), 1);
    }
}
