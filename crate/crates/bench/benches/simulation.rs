use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dynet_core::rng::seeded;
use dynet_core::simulator::{connectivity_time, simulate_si, simulate_si_with_edges, SiConfig};
use dynet_core::turnover::{simulate_pa_turnover, simulate_turnover_er, LifespanPolicy, PaConfig, TurnoverConfig};
use dynet_core::{EdgeParams, InfectionRate};

fn si(c: &mut Criterion) {
    let params = EdgeParams::new(0.01, 0.01).unwrap();
    let mut group = c.benchmark_group("si_full_infection");
    for n in [100usize, 400, 1600] {
        let cfg = SiConfig::new(n, params, InfectionRate::Finite(0.015));
        let mut seed = 0;
        group.bench_with_input(BenchmarkId::new("lumped", n), &cfg, |b, cfg| {
            b.iter(|| {
                seed += 1;
                simulate_si(cfg, &mut seeded(seed)).unwrap()
            })
        });
    }
    let cfg = SiConfig::new(100, params, InfectionRate::Finite(0.015));
    let mut seed = 0;
    group.bench_function("full_state/100", |b| {
        b.iter(|| {
            seed += 1;
            simulate_si_with_edges(&cfg, &mut seeded(seed)).unwrap()
        })
    });
    group.finish();
}

fn connectivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("connectivity_time");
    for n in [500usize, 2000] {
        let mut seed = 0;
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                seed += 1;
                connectivity_time(n, 1.0, &mut seeded(seed)).unwrap()
            })
        });
    }
    group.finish();
}

fn turnover(c: &mut Criterion) {
    let mut group = c.benchmark_group("turnover");
    group.sample_size(10);
    let er = TurnoverConfig::new(200, EdgeParams::new(0.1, 0.1).unwrap(), 100.0);
    group.bench_function("er/200x100", |b| b.iter(|| simulate_turnover_er(&er, &mut seeded(1)).unwrap()));
    let pa = PaConfig::new(2000, 2, LifespanPolicy::Exponential, 20_000);
    group.bench_function("pa_exponential/2000x20000", |b| {
        b.iter(|| simulate_pa_turnover(&pa, &mut seeded(1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, si, connectivity, turnover);
criterion_main!(benches);
