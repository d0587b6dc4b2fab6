//! Microbenchmarks for the synthesis hot path: Hermitian exponentials,
//! schedule execution, objective/gradient evaluation, closure ranks, and a
//! full single-restart compile.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use jjqml::compiler::{compile2, f_test, grad_f, OptimizerConfig, SplitMix64, Template};
use jjqml::device::{hamiltonian2, EnergyConfig, SwitchState};
use jjqml::gates::library;
use jjqml::liealg::{device_generators, lie_closure_dim, standard_generators, DEFAULT_CLOSURE_TOL};
use jjqml::linalg::{expm_hermitian, operator_schmidt};
use jjqml::qml::execute;

fn bench_expm(c: &mut Criterion) {
    let cfg = EnergyConfig::default();
    let h = hamiltonian2(&cfg, SwitchState::H2);
    c.bench_function("expm_hermitian_4x4", |b| {
        b.iter(|| expm_hermitian(black_box(&h), black_box(158.8193)).unwrap())
    });
}

fn bench_execute(c: &mut Criterion) {
    let cfg = EnergyConfig::default();
    let tpl = Template::two_qubit_15();
    let mut rng = SplitMix64::new(1);
    let times: Vec<f64> = (0..15).map(|_| rng.uniform(0.0, 1000.0)).collect();
    let cmd = tpl.to_command("bench", &times, &cfg).unwrap();
    c.bench_function("execute_15_letters", |b| {
        b.iter(|| execute(black_box(&cmd)).unwrap())
    });
}

fn bench_objective(c: &mut Criterion) {
    let cfg = EnergyConfig::default();
    let tpl = Template::two_qubit_15();
    let g = library("cnot", None).unwrap();
    let mut rng = SplitMix64::new(2);
    let times: Vec<f64> = (0..15).map(|_| rng.uniform(0.0, 1000.0)).collect();
    c.bench_function("f_test_15", |b| {
        b.iter(|| f_test(black_box(&g), black_box(&times), &tpl, &cfg).unwrap())
    });
    c.bench_function("grad_f_15", |b| {
        b.iter(|| grad_f(black_box(&g), black_box(&times), &tpl, &cfg).unwrap())
    });
}

fn bench_schmidt(c: &mut Criterion) {
    let cfg = EnergyConfig::default();
    let tpl = Template::two_qubit_15();
    let mut rng = SplitMix64::new(3);
    let times: Vec<f64> = (0..15).map(|_| rng.uniform(0.0, 1000.0)).collect();
    let u = execute(&tpl.to_command("bench", &times, &cfg).unwrap()).unwrap();
    c.bench_function("operator_schmidt_4x4", |b| {
        b.iter(|| operator_schmidt(black_box(&u)).unwrap())
    });
}

fn bench_closure(c: &mut Criterion) {
    let cfg = EnergyConfig::default();
    let device = device_generators(&cfg);
    c.bench_function("lie_closure_su4", |b| {
        b.iter(|| lie_closure_dim(black_box(&device), DEFAULT_CLOSURE_TOL).unwrap())
    });
    let su8 = standard_generators(3).unwrap();
    c.bench_function("lie_closure_su8", |b| {
        b.iter(|| lie_closure_dim(black_box(&su8), DEFAULT_CLOSURE_TOL).unwrap())
    });
}

fn bench_compile(c: &mut Criterion) {
    let cfg = EnergyConfig::default();
    let g = library("swap", None).unwrap();
    let opt = OptimizerConfig {
        restarts: 1,
        max_iters: 200,
        target_f: 1e-30, // force the full iteration budget
        seed: 4,
        ..OptimizerConfig::default()
    };
    let mut group = c.benchmark_group("compile");
    group.sample_size(10);
    group.bench_function("single_restart_200_iters", |b| {
        b.iter(|| compile2(black_box(&g), &cfg, &opt).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_expm,
    bench_execute,
    bench_objective,
    bench_schmidt,
    bench_closure,
    bench_compile
);
criterion_main!(benches);
