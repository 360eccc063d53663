use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eqtoda_core::diffalg::{Algebra, Ctx};
use eqtoda_core::diffop::op_power;
use eqtoda_core::dressing::{dressing, ell_direct, lax_free};
use eqtoda_core::equivariant::solve_constraint;
use eqtoda_core::properties::assoc_check;

/// Run `f` on a rayon pool with the given number of threads (0 = default).
fn on_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("pool");
    pool.install(f)
}

fn pools() -> [(&'static str, usize); 2] {
    [("sequential", 1), ("parallel", 0)]
}

fn lax_powers(c: &mut Criterion) {
    let lp = lax_free(Ctx::new(Algebra::FreeA, 6), 6).unwrap();
    let mut g = c.benchmark_group("lax_power_4");
    for (name, threads) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| on_pool(threads, || op_power(&lp.l, 4).unwrap()))
        });
    }
    g.finish();
}

fn dressing_ell(c: &mut Criterion) {
    let d = dressing(Ctx::new(Algebra::DressingB, 6), 6);
    let mut g = c.benchmark_group("ell_direct_d6");
    for (name, threads) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| on_pool(threads, || ell_direct(&d).unwrap()))
        });
    }
    g.finish();
}

fn constraint(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_constraint_k3");
    g.sample_size(10);
    for (name, threads) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| on_pool(threads, || solve_constraint(6, 3, 5).unwrap()))
        });
    }
    g.finish();
}

fn random_assoc(c: &mut Criterion) {
    let ctx = Ctx::new(Algebra::FreeA, 4);
    let mut g = c.benchmark_group("assoc_25");
    for (name, threads) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| on_pool(threads, || assoc_check(ctx, 1, 25).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, lax_powers, dressing_ell, constraint, random_assoc);
criterion_main!(benches);
