use criterion::{criterion_group, criterion_main, Criterion};
use ghost_algebra::loop_model::relations::DEFAULT_BUDGET;
use ghost_algebra::loop_model::{
    check_bybe, check_ybe, commutation_residual, transfer, BoundaryOperator, BoundarySide, Sampler,
};
use ghost_algebra::ParamMode;

fn local(c: &mut Criterion) {
    let mut s = Sampler::new(3);
    let (dense, dilute) = (s.dense(), s.dilute());
    let (u, v) = s.pair();
    c.bench_function("ybe dense", |b| b.iter(|| check_ybe(dense, u, v).unwrap()));
    c.bench_function("ybe dilute", |b| b.iter(|| check_ybe(dilute, u, v).unwrap()));
    let env = s.binding(dilute);
    let op =
        BoundaryOperator::new(s.family("dilute-IV", dilute, &env, BoundarySide::Top, ParamMode::Standard).unwrap());
    c.bench_function("bybe dilute-IV", |b| {
        b.iter(|| check_bybe(dilute, BoundarySide::Top, &op, u, v, &env, ParamMode::Standard).unwrap())
    });
}

fn transfer_tangles(c: &mut Criterion) {
    let mut g = c.benchmark_group("transfer");
    g.sample_size(10);
    let mut s = Sampler::new(4);
    for (name, n) in [("dense-I", 2), ("dense-I", 3), ("dilute-III", 2)] {
        let spec = if name.starts_with("dense") { s.dense() } else { s.dilute() };
        let env = s.binding(spec);
        let top = BoundaryOperator::new(s.family(name, spec, &env, BoundarySide::Top, ParamMode::Standard).unwrap());
        let bottom =
            BoundaryOperator::new(s.family(name, spec, &env, BoundarySide::Bottom, ParamMode::Standard).unwrap());
        let (u, v) = s.pair();
        g.bench_function(format!("{name} n={n}"), |b| {
            b.iter(|| transfer(spec, n, u, &top, &bottom, &env, ParamMode::Standard, DEFAULT_BUDGET).unwrap())
        });
        if n == 2 {
            g.bench_function(format!("{name} n={n} commutator"), |b| {
                b.iter(|| {
                    commutation_residual(spec, n, u, v, &top, &bottom, &env, ParamMode::Standard, DEFAULT_BUDGET)
                        .unwrap()
                })
            });
        }
    }
    g.finish();
}

criterion_group!(benches, local, transfer_tangles);
criterion_main!(benches);
