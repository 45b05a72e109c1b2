use criterion::{criterion_group, criterion_main, Criterion};
use relnav_bench::{explored_grid, scene, world};
use relnav_core::drpm::extract_frontiers;
use relnav_core::dsrg::Dsrg;
use relnav_core::gridsim::{plan_local, sense, Pose};
use relnav_core::harness::{run_episode, RunConfig};
use std::hint::black_box;

fn perception(c: &mut Criterion) {
    let w = world(0);
    let pose = Pose { position: w.scene.episode.start, heading: w.scene.episode.heading };
    c.bench_function("sense", |b| b.iter(|| sense(black_box(&w), black_box(pose))));
}

fn planning(c: &mut Criterion) {
    let w = world(0);
    let g = explored_grid(&w);
    c.bench_function("extract_frontiers", |b| b.iter(|| extract_frontiers(black_box(&g))));
    let frontiers = extract_frontiers(&g);
    let goal = frontiers.first().expect("a frontier after the spin").midpoint;
    let from = Pose { position: w.scene.episode.start, heading: 0.0 };
    c.bench_function("plan_local", |b| b.iter(|| plan_local(black_box(&g), from, goal)));
}

fn episode(c: &mut Criterion) {
    let s = scene(0);
    let prior = Dsrg::default_prior();
    let cfg = RunConfig::default();
    let mut group = c.benchmark_group("episode");
    group.sample_size(10);
    group.bench_function("seed_0", |b| b.iter(|| run_episode(black_box(&s), &prior, &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, perception, planning, episode);
criterion_main!(benches);
