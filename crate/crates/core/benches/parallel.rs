use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entwit_core::par::{self, Execution};
use entwit_core::search::{max_violation_with, SearchConfig};
use entwit_core::witness::evaluate_witness;
use entwit_core::{rng, zoo, BipartiteDims, CMatrix};

fn restarts(c: &mut Criterion) {
    let rho = zoo::isotropic_state(3, 0.8).unwrap();
    let cfg = SearchConfig { restarts: 8, max_iters: 200, ..Default::default() };
    let mut group = c.benchmark_group("max_violation");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &e| {
            b.iter(|| max_violation_with(&rho, &cfg, e).unwrap())
        });
    }
    group.finish();
}

fn separable_sweep(c: &mut Criterion) {
    let dims = BipartiteDims::new(2, 3).unwrap();
    let mut group = c.benchmark_group("separable_sweep");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &e| {
            b.iter(|| {
                par::map_indexed(256, e, |k| {
                    let mut r = rng::substream(7, k as u64);
                    let rho = zoo::random_separable(dims, 4, &mut r).unwrap();
                    let u = CMatrix::identity(2, 2);
                    let v = CMatrix::identity(3, 3);
                    evaluate_witness(&rho, &u, &v).map(|w| w.w_val).unwrap_or(f64::NAN)
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, restarts, separable_sweep);
criterion_main!(benches);
