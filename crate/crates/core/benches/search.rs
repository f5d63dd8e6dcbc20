//! Sequential against rayon-parallel cycle search.
//!
//! `threads = 1` takes the sequential path. Built with
//! `--no-default-features` every thread count runs sequentially, which
//! isolates the pool overhead.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pancake_core::search::{parallel_cycle_search, SearchConfig};
use pancake_core::GraphParams;

fn thread_counts() -> Vec<usize> {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut counts = vec![1, 2, 4, cores.max(2)];
    counts.sort_unstable();
    counts.dedup();
    counts
}

fn bench_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("cycle_search");
    group.sample_size(10);
    let graphs = [
        ("UP(2,3)", GraphParams::undirected(2, 3).unwrap()),
        ("P(4,2)", GraphParams::directed(4, 2).unwrap()),
        ("P(5,2)", GraphParams::directed(5, 2).unwrap()),
    ];
    for (name, params) in graphs {
        for threads in thread_counts() {
            let config = SearchConfig::new(params).threads(threads);
            group.bench_with_input(BenchmarkId::new(name, threads), &config, |b, config| {
                b.iter(|| black_box(parallel_cycle_search(config, None).unwrap().lengths))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_search);
criterion_main!(benches);
