use std::path::PathBuf;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use tiersynth::domain::load_domain;
use tiersynth::exec::Execution;
use tiersynth::ltlf::parse_formula;
use tiersynth::synthesis::synth_multitier;

const CHAIN: [&str; 5] = [
    "F clean_D",
    "F clean_D & F at_B",
    "F clean_D & F at_B & F clean_L2",
    "F clean_D & F at_B & F clean_L2 & F at_L1",
    "F clean_D & F at_B & F clean_L2 & F at_L1 & F (clean_L2 & X F clean_D)",
];

fn robot_tiers(c: &mut Criterion) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/robot.json");
    let d = Arc::new(load_domain(&std::fs::read_to_string(path).unwrap()).unwrap());
    let goals: Vec<_> = CHAIN.iter().map(|g| parse_formula(g).unwrap()).collect();
    let mut group = c.benchmark_group("robot-5-tiers");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| synth_multitier(&d, &goals, Execution::Sequential).unwrap())
    });
    group.bench_function("parallel", |b| b.iter(|| synth_multitier(&d, &goals, Execution::Parallel).unwrap()));
    group.finish();
}

criterion_group!(benches, robot_tiers);
criterion_main!(benches);
