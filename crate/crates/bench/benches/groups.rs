use affdes_bench::{affine_fixtures, build};
use affdes_core::orbits::enumerate_orbits;
use affdes_core::{GroupFamily, Guard};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn schreier_sims(c: &mut Criterion) {
    let mut group = c.benchmark_group("order");
    for (name, fam) in affine_fixtures() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build(black_box(&fam)).order().unwrap())
        });
    }
    let asp = GroupFamily::new(affdes_core::FamilyTag::ASp, 4, 2, 1).unwrap();
    group.bench_function("ASp(4,2)", |b| b.iter(|| build(black_box(&asp)).order().unwrap()));
    group.finish();
}

fn orbits(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbits");
    group.sample_size(10);
    let g = build(&GroupFamily::agl(4, 2));
    for k in [4u32, 6, 8] {
        group.bench_with_input(BenchmarkId::new("AGL(4,2)", k), &k, |b, &k| {
            b.iter(|| enumerate_orbits(&g, k, &Guard::default()).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, schreier_sims, orbits);
criterion_main!(benches);
