use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use edge_patterns::catalog::{all_cells, template};
use edge_patterns::laws::simplify;
use edge_patterns::semantics::find_disagreement;
use edge_patterns::stutter::{check_syntactic, falsify};
use edge_patterns::{enumerate_traces, eval, parse, print_canonical, Alphabet, Bounds};

const CELL: &str = "[]((up(Q) && !up(R) && <>up(R)) -> X (up(R) P P))";

fn bench_eval(c: &mut Criterion) {
    let f = parse(CELL).unwrap();
    let alphabet = Alphabet::new(["P", "Q", "R"]).unwrap();
    let traces: Vec<_> = enumerate_traces(&alphabet, 2, 2).take(512).collect();
    c.bench_function("eval 512 lassos", |b| {
        b.iter(|| traces.iter().filter(|t| eval(&f, t, 0).unwrap()).count())
    });
    let g = f.eliminate_sugar();
    c.bench_function("bit-sliced equivalence at 3,2", |b| {
        b.iter(|| find_disagreement(black_box(&f), &g, &alphabet, 3, 2).unwrap())
    });
}

fn bench_falsify(c: &mut Criterion) {
    let f = parse(CELL).unwrap();
    let alphabet = Alphabet::of_formula(&f).unwrap();
    let mut group = c.benchmark_group("falsify");
    group.sample_size(10);
    for workers in [1, 4] {
        group.bench_function(format!("cell at 3,2 with {workers} workers"), |b| {
            b.iter(|| falsify(black_box(&f), &alphabet, Bounds::new(3, 2), workers).unwrap())
        });
    }
    group.finish();
}

fn bench_prove(c: &mut Criterion) {
    let cells: Vec<_> = all_cells()
        .into_iter()
        .map(|id| template(id.pattern, id.scope, id.combo).unwrap())
        .collect();
    c.bench_function("prove catalog", |b| {
        b.iter(|| cells.iter().filter(|f| check_syntactic(f).is_proved()).count())
    });
}

fn bench_parse(c: &mut Criterion) {
    let cells: Vec<_> = all_cells()
        .into_iter()
        .map(|id| print_canonical(&template(id.pattern, id.scope, id.combo).unwrap()))
        .collect();
    c.bench_function("parse catalog", |b| {
        b.iter(|| cells.iter().map(|t| parse(black_box(t)).unwrap().size()).sum::<usize>())
    });
    let nested = parse("up(up(a && b) || down(X c U d)) && [] any(a)").unwrap();
    c.bench_function("simplify", |b| b.iter(|| simplify(black_box(&nested))));
}

criterion_group!(benches, bench_eval, bench_falsify, bench_prove, bench_parse);
criterion_main!(benches);
