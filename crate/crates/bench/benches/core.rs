use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sumrule_core::algmodel::{build_g2k_hl, theorem3_check};
use sumrule_core::lab::SequenceFamily;
use sumrule_core::opuc::{ggt_matrix, trace_v};
use sumrule_core::trig::{Angle, CriticalPoints, ExactTrigPoly, NumericTrigPoly};

fn laurent(c: &mut Criterion) {
    let h = ExactTrigPoly::generic(&[2]).unwrap();
    let g = build_g2k_hl(2, &h).unwrap().g.numer;
    let shifted = g.pair_shift(3);
    c.bench_function("laurent/mul", |b| b.iter(|| black_box(&g) * black_box(&g)));
    c.bench_function("laurent/normal_form", |b| b.iter(|| black_box(&shifted).normal_form()));
}

fn theorem3(c: &mut Criterion) {
    let h = ExactTrigPoly::generic(&[2]).unwrap();
    let mut group = c.benchmark_group("theorem3");
    group.sample_size(10);
    group.bench_function("k=2,d=2", |b| b.iter(|| theorem3_check(2, black_box(&h)).unwrap()));
    group.finish();
}

fn trace(c: &mut Criterion) {
    let fam = SequenceFamily::PowerDecay { c: 0.3, gamma: 0.4, theta_over_pi: Angle::pi_fraction(1, 3) };
    let alpha = fam.materialize(801, 0, None).unwrap();
    let h = NumericTrigPoly::new(&CriticalPoints::single(1, 3, 3).unwrap());
    let mut group = c.benchmark_group("trace_v");
    group.sample_size(10);
    group.bench_function("N=800,d=3", |b| {
        b.iter(|| {
            let u = ggt_matrix(black_box(&alpha), 800).unwrap();
            trace_v(&u, &h).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, laurent, theorem3, trace);
criterion_main!(benches);
