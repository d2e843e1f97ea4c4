use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ghost_algebra::cellular::CellDatum;
use ghost_algebra::enumeration::{dim_formula, enumerate_diagrams};
use ghost_algebra::{ParamMode, Variant};
use ghost_bench::{basis_pairs, wide_element};

fn dimensions(c: &mut Criterion) {
    c.bench_function("dim_formula n=1..10, four algebras", |b| {
        b.iter(|| {
            for n in 1..=10 {
                for v in [Variant::GH1, Variant::GH2, Variant::DGH1, Variant::DGH2] {
                    black_box(dim_formula(n, v));
                }
            }
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for (v, n) in [(Variant::GH2, 4), (Variant::DGH2, 3)] {
        g.bench_function(format!("{v} n={n}"), |b| b.iter(|| enumerate_diagrams(n, v, u128::MAX).unwrap().count()));
    }
    g.finish();
}

fn products(c: &mut Criterion) {
    let mut g = c.benchmark_group("multiply");
    for (v, n) in [(Variant::GH2, 3), (Variant::DGH2, 2), (Variant::DGH1, 3)] {
        let pairs = basis_pairs(n, v, 256, 1);
        g.bench_function(format!("{v} n={n} basis x256"), |b| {
            b.iter(|| {
                for (x, y) in &pairs {
                    black_box(x.mul(y, ParamMode::Standard, &()).unwrap());
                }
            })
        });
    }
    let x = wide_element(2, Variant::DGH2, 100);
    g.bench_function("dgh2 n=2 100 x 100 terms", |b| b.iter(|| x.mul(&x, ParamMode::Standard, &()).unwrap()));
    g.finish();
}

fn cellularity(c: &mut Criterion) {
    let mut g = c.benchmark_group("cellular");
    g.sample_size(10);
    let d = CellDatum::new(2, Variant::GH2);
    let mult = d.basis_multipliers();
    g.bench_function("gh2 n=2 all axioms", |b| b.iter(|| d.check_all(&mult, ParamMode::Standard).unwrap()));
    g.finish();
}

criterion_group!(benches, dimensions, enumeration, products, cellularity);
criterion_main!(benches);
