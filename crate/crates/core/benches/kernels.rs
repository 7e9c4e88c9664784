//! Exhaustive kernels on the default rayon pool versus a single thread.
//! Without the `parallel` feature both variants run the sequential code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use flipkit::breaksep::separability_search;
use flipkit::generate::{gnp, instance_rng, random_labels};
use flipkit::metric::FlipMetric;
use flipkit::{Eps, Partition, WeightFn};

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        None => f(),
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(f),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

const VARIANTS: [(&str, Option<usize>); 2] = [("pool", None), ("single", Some(1))];

fn partition_metric(c: &mut Criterion) {
    let g = gnp(14, 0.4, 1).unwrap();
    let p = Partition::from_labels(&random_labels(14, 4, &mut instance_rng(1, 0)));
    let mut group = c.benchmark_group("all_pairs_partition_n14_p4");
    for (name, threads) in VARIANTS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_threads(threads, || FlipMetric::new(&g, 4).all_pairs_partition(&p).unwrap()))
        });
    }
    group.finish();
}

fn separability(c: &mut Criterion) {
    let g = gnp(9, 0.5, 2).unwrap();
    let w = WeightFn::uniform(9);
    let eps = Eps::new(1, 3).unwrap();
    let mut group = c.benchmark_group("separability_n9_k2");
    group.sample_size(20);
    for (name, threads) in VARIANTS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_threads(threads, || separability_search(&g, &w, 1, eps, 2, 4, 10).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, partition_metric, separability);
criterion_main!(benches);
