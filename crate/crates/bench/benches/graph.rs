use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use war_core::classic::classic_trial;
use war_core::{
    attaining_set, decode, encode, simulate_classic, ComparisonRule, EdgeFilter, PlacementProbabilities, StateIndex,
    WarConfig,
};

fn ranking(c: &mut Criterion) {
    let s = decode(StateIndex(123_456_789), 12).unwrap();
    c.bench_function("encode n=12", |b| b.iter(|| encode(black_box(&s))));
    c.bench_function("decode n=12", |b| b.iter(|| decode(black_box(StateIndex(123_456_789)), 12).unwrap()));
}

fn reachability(c: &mut Criterion) {
    let mut group = c.benchmark_group("attaining_set");
    group.sample_size(10);
    group.bench_function("n=8 both orders", |b| {
        b.iter(|| attaining_set(8, ComparisonRule::Standard, EdgeFilter::BothOrders).unwrap().wandering_count)
    });
    group.finish();
}

fn classic(c: &mut Criterion) {
    let (deal, seed) = classic_trial(7, 0);
    let probs = PlacementProbabilities::uniform();
    let config = WarConfig::default();
    c.bench_function("simulate_classic", |b| {
        b.iter(|| simulate_classic(black_box(&deal), &probs, &config, seed, 1_000_000).unwrap().moves)
    });
}

criterion_group!(benches, ranking, reachability, classic);
criterion_main!(benches);
