use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use worldlens_core::agents::delta_agent;
use worldlens_core::extraction::{extract, reconstruct_world, Method, Probe};
use worldlens_core::goal::{make_family, FamilyKind, Goal, Triple};
use worldlens_core::mdp::builtin::{make_chain_world, LEFT, ORIGIN, RIGHT};
use worldlens_core::prob::optimal_success_prob;
use worldlens_core::{DeltaConfig, DeltaMode, ProbeStart};

const PROBE: Triple = Triple { state: ORIGIN, action: RIGHT, next: 3 };

fn methods(c: &mut Criterion) {
    let w = make_chain_world(0.35, 0.5).unwrap();
    let mut group = c.benchmark_group("extract");
    for n in [100, 400] {
        let cases = [
            (Method::Deterministic, DeltaConfig::point_mass(0.0, DeltaMode::Optimal, 0), 0.0),
            (Method::Stochastic, DeltaConfig::mixed(0.2, DeltaMode::RandomFeasible, 0), 0.2),
            (Method::Width2Exact, DeltaConfig::point_mass(0.0, DeltaMode::Optimal, 0), 0.0),
            (Method::Width2Delta, DeltaConfig::point_mass(0.2, DeltaMode::RandomFeasible, 0), 0.2),
        ];
        for (method, config, delta) in cases {
            let agent = delta_agent(&w, config).unwrap();
            let probe = Probe::new(PROBE);
            group.bench_with_input(BenchmarkId::new(method.name(), n), &n, |b, &n| {
                b.iter(|| extract(&agent, &probe, method, black_box(n), delta).unwrap())
            });
        }
    }
    group.finish();
}

fn kernel(c: &mut Criterion) {
    let w = make_chain_world(0.35, 0.5).unwrap();
    let agent = delta_agent(&w, DeltaConfig::mixed(0.1, DeltaMode::RandomFeasible, 0)).unwrap();
    c.bench_function("reconstruct chain t2 n=400", |b| {
        b.iter(|| reconstruct_world(&agent, 5, Method::Stochastic, 400, 0.1, &ProbeStart::State).unwrap())
    });
}

fn solver(c: &mut Criterion) {
    let w = make_chain_world(0.35, 0.5).unwrap();
    let mut group = c.benchmark_group("optimal_success_prob");
    for n in [2, 4] {
        let family = make_family(PROBE, FamilyKind::XiK { a: LEFT, b: RIGHT, n, k: 1 }, 2).unwrap();
        let goal = Goal::Family(family);
        group.bench_with_input(BenchmarkId::new("xi_k", n), &goal, |b, goal| {
            b.iter(|| optimal_success_prob(&w, goal, ORIGIN).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, methods, kernel, solver);
criterion_main!(benches);
