//! Sequential versus rayon execution of the batch workloads.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use z2asym::bloch::{sample_states, Axis, SamplerConfig};
use z2asym::monotones::monotone_profile;
use z2asym::oracle::{oracle_agreement, OracleConfig};
use z2asym::parallel::{map_indexed, Execution};
use z2asym::suites::{run_suite, Suite, SuiteParams};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn profiles(c: &mut Criterion) {
    let mut g = c.benchmark_group("profiles");
    for n in [10_000usize, 100_000] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    let states = sample_states(&SamplerConfig::uniform_ball(1), n, exec).unwrap();
                    black_box(map_indexed(states.len(), exec, |i| monotone_profile(&states[i])))
                })
            });
        }
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_agreement");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    let config = OracleConfig { seed: 1, ..OracleConfig::default() };
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, 200), |b| {
            b.iter(|| {
                black_box(
                    oracle_agreement(200, &config, 0.02, &Axis::X, &SamplerConfig::uniform_ball(1), exec).unwrap(),
                )
            })
        });
    }
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for suite in [Suite::Inequalities, Suite::Realizability, Suite::Channels] {
        for (name, exec) in MODES {
            let params = SuiteParams { n: 20_000, exec, ..SuiteParams::default() };
            g.bench_function(BenchmarkId::new(name, suite.label()), |b| {
                b.iter(|| black_box(run_suite(suite, &params).unwrap()))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, profiles, oracle, suites);
criterion_main!(benches);
