use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heavytail::fit::{self, ScanOptions};
use heavytail::resample::{self, BodyMode};
use heavytail::{hurwitz_zeta, io, Family, Model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn zeta(c: &mut Criterion) {
    let mut g = c.benchmark_group("hurwitz_zeta");
    for q in [1.0, 7.0, 150.0] {
        g.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, &q| {
            b.iter(|| hurwitz_zeta(black_box(1.953), black_box(q)).unwrap())
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let data = io::moby();
    let template = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
    let fixed = Model::new(Family::DiscretePowerLaw, 7.0).unwrap();
    let fitted = Model::with_params(Family::DiscretePowerLaw, 7.0, &[1.9527]).unwrap();
    c.bench_function("estimate_pars/moby", |b| {
        b.iter(|| fit::estimate_pars(&fixed, black_box(&data), None).unwrap())
    });
    c.bench_function("ks_statistic/moby", |b| {
        b.iter(|| fit::ks_statistic(&fitted, black_box(&data)).unwrap())
    });
    c.bench_function("estimate_xmin/moby", |b| {
        b.iter(|| fit::estimate_xmin(&template, black_box(&data), &ScanOptions::default()).unwrap())
    });
}

fn replicate(c: &mut Criterion) {
    let data = io::moby();
    let template = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
    let fitted = fit::estimate_xmin(&template, &data, &ScanOptions::default())
        .unwrap()
        .model(Family::DiscretePowerLaw)
        .unwrap();
    let opts = ScanOptions::default();
    let mut index = 0;
    c.bench_function("gof_replicate/moby", |b| {
        b.iter(|| {
            index += 1;
            let s = resample::gof_sample(&data, &fitted, BodyMode::Empirical, 1, index, 0).unwrap();
            fit::estimate_xmin(&template, &s, &opts).unwrap()
        })
    });
}

fn sampling(c: &mut Criterion) {
    let m = Model::with_params(Family::DiscretePowerLaw, 1.0, &[2.5]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    c.bench_function("rand/displ_10k", |b| {
        b.iter(|| m.rand(black_box(10_000), &mut rng).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = zeta, scan, replicate, sampling
}
criterion_main!(benches);
