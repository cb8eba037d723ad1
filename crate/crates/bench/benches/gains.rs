use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;

use abc_gains::enumerate::{enumerate_abc, RadicalTable};
use abc_gains::gains::{full_report, AbcTriple};
use abc_gains::padic::{best_padic_approx, Residue};
use abc_gains::surd::{cf_surd, search_from_surd};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn reyssat() -> AbcTriple {
    AbcTriple::new(big(2), big(3).pow(10) * big(109), big(23).pow(5)).unwrap()
}

fn bench_full_report(c: &mut Criterion) {
    let small = AbcTriple::from_u64(3087, 4913, 8000).unwrap();
    let record = AbcTriple::new(
        big(2).pow(49),
        big(7).pow(7) * big(19).pow(3) * big(123499),
        big(3).pow(13) * big(5).pow(5) * big(503).pow(2),
    )
    .unwrap();
    c.bench_function("full_report/cube_example", |b| {
        b.iter(|| full_report(black_box(&small)))
    });
    c.bench_function("full_report/power_gain_record", |b| {
        b.iter(|| full_report(black_box(&record)))
    });
    c.bench_function("make_triple/reyssat", |b| b.iter(reyssat));
}

fn bench_enumerate(c: &mut Criterion) {
    c.bench_function("radical_sieve/100k", |b| {
        b.iter(|| RadicalTable::build(black_box(100_000)).unwrap())
    });
    c.bench_function("enumerate_abc/10k", |b| {
        b.iter(|| enumerate_abc(black_box(10_000)).unwrap().count())
    });
}

fn bench_padic(c: &mut Criterion) {
    let target = Residue::new(big(149797), big(2).pow(19)).unwrap();
    c.bench_function("best_padic_approx/2^19", |b| {
        b.iter(|| best_padic_approx(black_box(&target)))
    });
}

fn bench_surd(c: &mut Criterion) {
    c.bench_function("cf_surd/109^(1/5)", |b| {
        b.iter(|| cf_surd(black_box(109), 5, 6).unwrap())
    });
    c.bench_function("surd_search/109^(1/5)", |b| {
        b.iter(|| search_from_surd(black_box(109), 5, &big(1_000_000), 1.4).unwrap())
    });
}

criterion_group!(
    benches,
    bench_full_report,
    bench_enumerate,
    bench_padic,
    bench_surd
);
criterion_main!(benches);
