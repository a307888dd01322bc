use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qhk_core::fixtures::{fixture, fixture_source};
use qhk_core::module::projective;
use qhk_core::pipeline::{run_pipeline, PipelineOptions};
use qhk_core::resolution::minimal_resolution;
use qhk_core::{GradedAlgebra, PrimeField, Rationals};

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for name in ["CATO", "SO4", "AK:6"] {
        let p = fixture(name).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| {
            b.iter(|| GradedAlgebra::build(&Rationals, p, None).unwrap())
        });
    }
    g.finish();
}

fn resolution(c: &mut Criterion) {
    let a = Arc::new(GradedAlgebra::build(&Rationals, &fixture("SO4").unwrap(), None).unwrap());
    let s = qhk_core::module::simple(&a, 0, 0).unwrap();
    c.bench_function("resolution/SO4 S1", |b| b.iter(|| minimal_resolution(&s, 4).unwrap()));
    let p = projective(&a, 3, 0).unwrap();
    c.bench_function("resolution/SO4 P4", |b| b.iter(|| minimal_resolution(&p, 2).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    for name in ["CATO", "PARA", "DUALEXT", "AK:4", "SO4"] {
        let src = fixture_source(name).unwrap();
        let opts = PipelineOptions { input: name.into(), ..Default::default() };
        g.bench_with_input(BenchmarkId::new("Q", name), &src, |b, src| {
            b.iter(|| run_pipeline(&Rationals, src, &opts).unwrap())
        });
        let fp = PrimeField::new(101).unwrap();
        g.bench_with_input(BenchmarkId::new("F101", name), &src, |b, src| {
            b.iter(|| run_pipeline(&fp, src, &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, build, resolution, pipeline);
criterion_main!(benches);
