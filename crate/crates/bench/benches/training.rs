use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sparsebeam::numerics::{beta_params, closed_form_pattern, fresnel};
use sparsebeam::training::{exhaustive_train, three_phase_train_k, LsEstimator};
use sparsebeam::{make_channel, Sounder, SystemConfig, TrainingContext, TrainingParams, UserLocation};

fn schemes(c: &mut Criterion) {
    let cfg = SystemConfig::default();
    let ctx = TrainingContext::new(cfg.clone(), TrainingParams::for_config(&cfg).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ch = make_channel(&cfg, &UserLocation::new(20.0, 0.3).unwrap(), &mut rng).unwrap();
    let ls = LsEstimator::new(&cfg).unwrap();

    let mut group = c.benchmark_group("train_n257");
    group.bench_function("three_phase_k3", |b| {
        let mut noise = ChaCha8Rng::seed_from_u64(2);
        b.iter(|| three_phase_train_k(&ctx, &mut Sounder::noisy(&cfg, &ch, &mut noise), 3).unwrap())
    });
    group.bench_function("exhaustive", |b| {
        let mut noise = ChaCha8Rng::seed_from_u64(3);
        b.iter(|| exhaustive_train(&ctx, &mut Sounder::noisy(&cfg, &ch, &mut noise)).unwrap())
    });
    group.bench_function("least_squares", |b| {
        let mut noise = ChaCha8Rng::seed_from_u64(4);
        b.iter(|| ls.estimate(&mut Sounder::noisy(&cfg, &ch, &mut noise)).unwrap())
    });
    group.finish();

    c.bench_function("context_n257", |b| {
        b.iter(|| TrainingContext::new(cfg.clone(), TrainingParams::for_config(&cfg).unwrap()).unwrap())
    });
}

fn numerics(c: &mut Criterion) {
    c.bench_function("fresnel", |b| b.iter(|| fresnel(black_box(3.7)).unwrap()));
    c.bench_function("closed_form_pattern", |b| {
        b.iter(|| closed_form_pattern(beta_params(black_box(20.0), 0.1, 0.01, 17, 16, 0.005).unwrap()).unwrap())
    });
}

criterion_group!(benches, schemes, numerics);
criterion_main!(benches);
