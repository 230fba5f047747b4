use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dj_bench::{situations, with_models};
use dj_core::agent::{Agent, Policy};
use dj_core::conditions::{check_cac, lemma_suite};
use dj_core::dialogue::run_validation_dialogue;
use dj_core::fixtures;
use dj_core::fuzz::{fuzz_theorems, FuzzConfig};
use dj_core::model::{extract_cac_subset, gamma_operational_validity};
use dj_core::Profile;

fn fixtures_bench(c: &mut Criterion) {
    let budget = fixtures::budget();
    let all = budget.all_args();
    c.bench_function("judgment/budget", |b| b.iter(|| black_box(&budget).deliberated_judgment()));
    c.bench_function("check_cac/budget", |b| b.iter(|| check_cac(black_box(&budget), &all)));
}

fn condition_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_cac");
    for n in [6, 9, 12] {
        let sits = situations(n, Profile::Free, 16);
        group.bench_with_input(BenchmarkId::from_parameter(n), &sits, |b, sits| {
            b.iter(|| {
                for s in sits {
                    black_box(check_cac(s, &s.all_args()));
                }
            })
        });
    }
    group.finish();

    let sits = situations(12, Profile::Layered, 16);
    c.bench_function("lemma_suite/12", |b| {
        b.iter(|| {
            for s in &sits {
                black_box(lemma_suite(s, &s.all_args()));
            }
        })
    });
    c.bench_function("extract/12", |b| {
        b.iter(|| {
            for s in &sits {
                black_box(extract_cac_subset(s, &s.all_args()));
            }
        })
    });
}

fn validation(c: &mut Criterion) {
    let cases = with_models(situations(12, Profile::CacEnforced, 16));
    c.bench_function("operational_validity/12", |b| {
        b.iter(|| {
            for (s, m) in &cases {
                black_box(gamma_operational_validity(s, &s.all_args(), m));
            }
        })
    });
    c.bench_function("dialogue_static/12", |b| {
        b.iter(|| {
            for (s, m) in &cases {
                let mut agent = Agent::new(s.clone(), Policy::Static, None).unwrap();
                black_box(run_validation_dialogue(&mut agent, m, &s.all_args(), 2).unwrap());
            }
        })
    });
}

fn fuzz(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz");
    group.sample_size(10);
    group.bench_function("50_instances", |b| b.iter(|| fuzz_theorems(&FuzzConfig::new(50, 7))));
    group.finish();
}

criterion_group!(benches, fixtures_bench, condition_scaling, validation, fuzz);
criterion_main!(benches);
