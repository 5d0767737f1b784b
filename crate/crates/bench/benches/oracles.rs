use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use fpp_core::oracles::{
    solve_malthusian, solve_w_cm, solve_w_complete, CompleteGraphSampler, FiniteVarianceSampler,
    DEFAULT_TRUNCATION,
};
use fpp_core::{DegreeLaw, PoolConfig, RngStream, WeightLaw};

fn pools(c: &mut Criterion) {
    let mut group = c.benchmark_group("pool");
    group.sample_size(10);
    let cfg = PoolConfig::with_size(20_000);
    for s in [0.5, 1.0, 2.0] {
        group.bench_with_input(BenchmarkId::new("w_complete", s), &s, |b, &s| {
            b.iter(|| solve_w_complete(s, DEFAULT_TRUNCATION, &cfg, RngStream::new(1, 0)).unwrap())
        });
    }
    let law = DegreeLaw::fixed(4).unwrap();
    let lambda = solve_malthusian(3.0, &WeightLaw::Exponential).unwrap();
    group.bench_function("w_cm/fixed4", |b| {
        b.iter(|| {
            solve_w_cm(
                &law,
                &WeightLaw::Exponential,
                lambda,
                &cfg,
                RngStream::new(1, 0),
            )
            .unwrap()
        })
    });
    group.finish();
}

fn samplers(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampler");
    const DRAWS: u64 = 10_000;
    group.throughput(Throughput::Elements(DRAWS));
    let cfg = PoolConfig::with_size(20_000);

    let w = solve_w_complete(1.0, DEFAULT_TRUNCATION, &cfg, RngStream::new(1, 0)).unwrap();
    let mut complete = CompleteGraphSampler::new(1.0, &w).unwrap();
    group.bench_function("hatd_complete/s1", |b| {
        let mut rng = RngStream::new(2, 0).rng();
        b.iter(|| {
            (0..DRAWS)
                .map(|_| complete.sample(&mut rng).unwrap())
                .sum::<u64>()
        })
    });

    let law = DegreeLaw::fixed(4).unwrap();
    let lambda = solve_malthusian(3.0, &WeightLaw::Exponential).unwrap();
    let w = solve_w_cm(
        &law,
        &WeightLaw::Exponential,
        lambda,
        &cfg,
        RngStream::new(1, 1),
    )
    .unwrap();
    let mut cm = FiniteVarianceSampler::new(&law, WeightLaw::Exponential, lambda, &w).unwrap();
    group.bench_function("hatd_cm/fixed4", |b| {
        let mut rng = RngStream::new(2, 1).rng();
        b.iter(|| (0..DRAWS).map(|_| cm.sample(&mut rng)).sum::<u64>())
    });
    group.finish();
}

criterion_group!(benches, pools, samplers);
criterion_main!(benches);
