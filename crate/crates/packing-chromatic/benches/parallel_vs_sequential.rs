//! Compares the rayon-backed code paths against their sequential
//! fallbacks: all-pairs distances on Hamming graphs, and the stable-set
//! search with one worker versus several.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use packing_chromatic::graph::{all_pairs_distances_sequential, power_graph};
use packing_chromatic::hamming::{generate, hamming_distance_matrix, HammingParams};
use packing_chromatic::mss::{MssSolver, SolveBudget};

const BENCH_VERTEX_BUDGET: u64 = 1 << 20;

fn distance_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_pairs_distances");
    for (q, m) in [(3u32, 3u32), (4, 3), (3, 4)] {
        let params = HammingParams::new(q, m).unwrap();
        let g = generate(&params, BENCH_VERTEX_BUDGET).unwrap();
        let label = format!("q{q}_m{m}");
        group.bench_with_input(BenchmarkId::new("sequential", &label), &g, |b, g| {
            b.iter(|| all_pairs_distances_sequential(g).unwrap());
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", &label), &g, |b, g| {
            b.iter(|| packing_chromatic::graph::all_pairs_distances(g).unwrap());
        });
    }
    group.finish();
}

fn solver_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("mss_solve_hamming_q3_m3_power2");
    group.sample_size(10);
    let params = HammingParams::new(3, 3).unwrap();
    let g = generate(&params, BENCH_VERTEX_BUDGET).unwrap();
    let dm = hamming_distance_matrix(&params, BENCH_VERTEX_BUDGET).unwrap();
    let g2 = power_graph(&g, &dm, 2);
    let worker_counts: &[usize] = if cfg!(feature = "parallel") { &[1, 4] } else { &[1] };
    for &workers in worker_counts {
        group.bench_with_input(BenchmarkId::new("workers", workers), &workers, |b, &w| {
            let solver = MssSolver {
                budget: SolveBudget::unlimited(),
                workers: w,
            };
            b.iter(|| solver.solve(&g2, None, None).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, distance_benches, solver_benches);
criterion_main!(benches);
