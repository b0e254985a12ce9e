//! Compares the default rayon pool against a single-thread pool on the two
//! hot paths: fault-set decodability and full table verification.
//!
//! With `--no-default-features` the crate compiles its sequential fallback
//! and both arms measure the same code; run with default features to see the
//! pool pay off (or not, on one core).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flagforge::codes::{bch_check, sort_desc};
use flagforge::decode::{build_table_bruteforce, decodable, verify_ft};
use flagforge::gadget::{stack, unfold, FlipOrder, Stabilizer};
use flagforge::with_jobs;

fn medium_circuit() -> flagforge::gadget::FlagCircuit {
    let h = sort_desc(&bch_check(13, 2).unwrap()).unwrap();
    let g = stack(&h, 3);
    unfold(&g, &Stabilizer::all_x(13), FlipOrder::TopDown).unwrap()
}

fn bench_decodable(c: &mut Criterion) {
    let circuit = medium_circuit();
    let mut group = c.benchmark_group("decodable_w13_t2_r3");
    group.sample_size(10);
    for (name, jobs) in [("one_thread", Some(1)), ("default_pool", None)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &jobs, |b, &jobs| {
            b.iter(|| with_jobs(jobs, || decodable(&circuit, 2, 1 << 26).unwrap()))
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let circuit = medium_circuit();
    let table = build_table_bruteforce(&circuit, 2).unwrap();
    let mut group = c.benchmark_group("verify_ft_w13_t2_r3");
    group.sample_size(10);
    for (name, jobs) in [("one_thread", Some(1)), ("default_pool", None)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &jobs, |b, &jobs| {
            b.iter(|| with_jobs(jobs, || verify_ft(&circuit, 2, &table).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_decodable, bench_verify);
criterion_main!(benches);
