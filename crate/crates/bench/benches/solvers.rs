use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ricci_homog::data::InvariantTensor;
use ricci_homog::solver::{solve_general, solve_two_summand, SolveOptions};
use ricci_homog_bench::{flag, grouped_flag, synthetic};

fn closed_form(c: &mut Criterion) {
    let sd = grouped_flag();
    let z = InvariantTensor::new(vec![1.0, 1.0]).unwrap();
    c.bench_function("solve_two_summand/grouped_flag", |b| {
        b.iter(|| solve_two_summand(black_box(&sd), black_box(&z)).unwrap())
    });
}

fn general_solver(c: &mut Criterion) {
    let sd = flag();
    let z = InvariantTensor::new(vec![1.0 / 6.0; 3]).unwrap();
    let opts = SolveOptions { starts: 4, ..Default::default() };
    c.bench_function("solve_general/flag", |b| {
        b.iter(|| solve_general(black_box(&sd), black_box(&z), black_box(&opts)).unwrap())
    });

    let (sd5, _, z5) = synthetic(5);
    let opts = SolveOptions { starts: 4, tol: 1e-9, ..Default::default() };
    c.bench_function("solve_general/s5", |b| {
        b.iter(|| solve_general(black_box(&sd5), black_box(&z5), black_box(&opts)).unwrap())
    });
}

criterion_group!(benches, closed_form, general_solver);
criterion_main!(benches);
