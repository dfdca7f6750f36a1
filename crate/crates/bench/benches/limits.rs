//! Wall iteration, kernel sums, prescribed-approximant construction, and
//! matrix products on their acceptance-sized fixtures.

use criterion::{criterion_group, criterion_main, Criterion};
use multilim::bernoulli::{bernoulli_cf, TargetSequence};
use multilim::matprod::{product_limit, Direction};
use multilim::multilimit::build;
use multilim::poincare::order_two;
use multilim::qseries::{f_limit, FSumSpec};
use multilim::{Complex64, MatrixSeq, PerturbationSeq, QParam, RootOfUnity, SquareMatrix};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn bench_residue_limits(cr: &mut Criterion) {
    let ml = build(
        RootOfUnity::new(1, 6).unwrap(),
        RootOfUnity::new(5, 6).unwrap(),
        PerturbationSeq::geometric(c(0.7), 0.5),
        PerturbationSeq::geometric(c(0.7), 0.5),
    )
    .unwrap();
    cr.bench_function("residue_limits geometric m=6", |b| {
        b.iter(|| ml.residue_limits(1e-10, 20_000).unwrap())
    });
}

fn bench_f_limit(cr: &mut Criterion) {
    let spec = FSumSpec::new(
        RootOfUnity::primitive(5).unwrap(),
        1,
        0,
        QParam::real(0.3).unwrap(),
    )
    .unwrap();
    cr.bench_function("f_limit m=5 q=0.3", |b| {
        b.iter(|| f_limit(&spec, 1e-10))
    });
}

fn bench_bernoulli(cr: &mut Criterion) {
    let vals: Vec<Complex64> = (0..200)
        .map(|n| Complex64::new((n as f64).sin(), (2.0 * n as f64).cos() / 2.0))
        .collect();
    cr.bench_function("bernoulli_cf 200 targets", |b| {
        b.iter(|| {
            let cf = bernoulli_cf(&TargetSequence::from_values(vals.clone()), 199).unwrap();
            cf.approximants(199, true).unwrap()
        })
    });
}

fn bench_product_limit(cr: &mut Criterion) {
    let w1 = RootOfUnity::new(1, 6).unwrap();
    let w2 = RootOfUnity::new(5, 6).unwrap();
    let s = w1.value() + w2.value();
    let p = w1.mul(&w2).value();
    let a = PerturbationSeq::geometric(c(1.0), 0.5);
    let (aa, ab, at) = (a.clone(), a.clone(), a.clone());
    let seq = MatrixSeq::new(
        move |n| SquareMatrix::from_rows(&[&[s + aa.at(n), -p], &[c(1.0), c(0.0)]]),
        SquareMatrix::from_rows(&[&[s, -p], &[c(1.0), c(0.0)]]),
        move |n| ab.bound(n),
        move |cut| at.tail(cut),
    );
    cr.bench_function("product_limit order=2 m=6", |b| {
        b.iter(|| product_limit(&seq, Direction::Left, 1e-11, 20_000).unwrap())
    });
}

fn bench_order_two(cr: &mut Criterion) {
    let w1 = RootOfUnity::new(1, 6).unwrap();
    let w2 = RootOfUnity::new(5, 6).unwrap();
    let a = PerturbationSeq::geometric(c(1.0), 0.5);
    let b = PerturbationSeq::zero();
    cr.bench_function("order_two limits m=6", |bch| {
        bch.iter(|| order_two(&w1, &w2, &a, &b, c(0.0), c(1.0), 1e-10).unwrap())
    });
}

fn bench_wall_sum(cr: &mut Criterion) {
    let w = RootOfUnity::primitive(5).unwrap();
    let q = QParam::real(0.15).unwrap();
    cr.bench_function("pn_sum depth 25", |b| {
        b.iter(|| multilim::qseries::pn_sum(&w, 25, &q))
    });
}

criterion_group!(
    benches,
    bench_residue_limits,
    bench_f_limit,
    bench_bernoulli,
    bench_product_limit,
    bench_order_two,
    bench_wall_sum
);
criterion_main!(benches);
