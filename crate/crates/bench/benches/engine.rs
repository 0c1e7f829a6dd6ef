use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lfgmc_bench::{adjective_grammar, sentence};
use lfgmc_core::{fixtures, parse_sentence, satisfies, valid, Formula, SearchBounds};
use std::hint::black_box;

fn theory_conjunction(t: &lfgmc_core::Theory) -> Formula {
    t.formulas().into_iter().map(|f| f.formula.clone()).reduce(Formula::and).unwrap_or(Formula::True)
}

fn semantics(c: &mut Criterion) {
    let m = fixtures::a_girl_walks();
    let phi = theory_conjunction(&fixtures::figure1_grammar().compile().unwrap());
    c.bench_function("satisfies/theory at root", |b| {
        b.iter(|| satisfies(black_box(&m), m.cstruct().root().into(), black_box(&phi)).unwrap())
    });
    c.bench_function("valid/theory", |b| b.iter(|| valid(black_box(&m), black_box(&phi)).unwrap()));
}

fn search(c: &mut Criterion) {
    let g = adjective_grammar();
    let t = g.compile().unwrap();
    let bounds = SearchBounds::new(64, 64, 100).unwrap();
    let mut group = c.benchmark_group("parse_sentence");
    for n in [0, 2, 4, 8] {
        let s = sentence(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| parse_sentence(&t, &g, black_box(s), bounds).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, semantics, search);
criterion_main!(benches);
