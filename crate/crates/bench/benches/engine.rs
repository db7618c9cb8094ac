use std::hint::black_box;

use capax::bounds::{default_k_max, gk_lower};
use capax::capacities::eh_prefix;
use capax::fourdim::{c0_ell, c0_poly_piecewise, DEFAULT_DEPTH};
use capax::rescaled::convergence_report;
use capax::{reconcile, Rational, ReconcileOptions};
use capax_bench::{problems, step};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_bounds(c: &mut Criterion) {
    let mut g = c.benchmark_group("bounds");
    for (name, p) in problems() {
        let k = default_k_max(&p.a());
        g.bench_with_input(BenchmarkId::new("gk_lower", name), &p, |b, p| {
            b.iter(|| gk_lower(black_box(p), k).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("reconcile", name), &p, |b, p| {
            b.iter(|| reconcile(black_box(p), &ReconcileOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn bench_capacities(c: &mut Criterion) {
    let (x, y) = (Rational::from(1), Rational::new(37, 5));
    c.bench_function("eh_prefix_2000", |b| b.iter(|| eh_prefix(black_box(&x), &y, 2000)));
}

fn bench_fourdim(c: &mut Criterion) {
    let mut g = c.benchmark_group("fourdim");
    g.sample_size(10);
    for a in [Rational::from(7), Rational::new(29, 4)] {
        g.bench_with_input(BenchmarkId::new("c0_ell_b2", &a), &a, |b, a| {
            b.iter(|| c0_ell(black_box(a), &Rational::from(2), DEFAULT_DEPTH).unwrap())
        });
    }
    for bv in [2, 10, 50] {
        g.bench_function(BenchmarkId::new("c0_poly_piecewise", bv), |b| {
            b.iter(|| c0_poly_piecewise(black_box(&Rational::from(bv))).unwrap())
        });
    }
    g.finish();
}

fn bench_rescaled(c: &mut Criterion) {
    let mut g = c.benchmark_group("rescaled");
    g.sample_size(10);
    let (upper, step) = (Rational::from(10), step());
    g.bench_function("convergence_report", |b| {
        b.iter(|| convergence_report(black_box(&[10, 50, 200]), &upper, &step).unwrap())
    });
    g.finish();
}

criterion_group!(bounds, bench_bounds);
criterion_group!(capacities, bench_capacities);
criterion_group!(fourdim, bench_fourdim);
criterion_group!(rescaled, bench_rescaled);
criterion_main!(bounds, capacities, fourdim, rescaled);
