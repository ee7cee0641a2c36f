use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use redproof::builders::{build_cc_spr, build_parity_spr, build_php_spr, build_tseitin_spr};
use redproof::gens::{default_charge, gen_cc, gen_parity, gen_php, gen_tseitin, random_regular};
use redproof::redundancy::check_rat;
use redproof::transforms::dpr_to_drat_nnv;
use redproof::{par, verify, Clause, Formula, Lit, Proof, Rule, SystemSpec};

fn corpus() -> Vec<(Formula, Proof)> {
    let mut out = Vec::new();
    for n in 4..=8 {
        out.push((gen_php(n), build_php_spr(n)));
    }
    for n in [7, 9] {
        out.push((gen_parity(n).unwrap(), build_parity_spr(n).unwrap()));
    }
    out.push((gen_cc(5, 3).unwrap(), build_cc_spr(5, 3).unwrap()));
    for seed in 0..4 {
        let g = random_regular(14, 3, seed).unwrap();
        let q = default_charge(14);
        out.push((gen_tseitin(&g, &q).unwrap(), build_tseitin_spr(&g, &q).unwrap()));
    }
    out
}

fn verify_corpus(c: &mut Criterion) {
    let items = corpus();
    let spec = SystemSpec::strict(Rule::Spr);
    let mut group = c.benchmark_group("verify_corpus");
    group.bench_function("seq", |b| {
        b.iter(|| items.iter().filter(|(g, pf)| verify(g, pf, spec).accepted()).count())
    });
    group.bench_function("par", |b| {
        b.iter(|| par::map(&items, |(g, pf)| verify(g, pf, spec).accepted()).into_iter().filter(|&a| a).count())
    });
    group.finish();
}

fn simulate_corpus(c: &mut Criterion) {
    let items: Vec<_> = corpus().into_iter().take(4).collect();
    let mut group = c.benchmark_group("dpr_to_drat");
    group.sample_size(10);
    group.bench_function("seq", |b| {
        b.iter(|| items.iter().map(|(g, pf)| dpr_to_drat_nnv(g, pf).unwrap().len()).sum::<usize>())
    });
    group.bench_function("par", |b| {
        b.iter(|| par::map(&items, |(g, pf)| dpr_to_drat_nnv(g, pf).unwrap().len()).into_iter().sum::<usize>())
    });
    group.finish();
}

/// RAT check with many resolution partners; the resolvent loop is the
/// data-parallel part of the checker.
fn rat_fanout(c: &mut Criterion) {
    let mut group = c.benchmark_group("rat_fanout");
    for n in [64u32, 512, 4096] {
        let mut g = Formula::new(n + 1);
        for v in 2..=n + 1 {
            g.push(Clause::new([Lit::neg(1), Lit::pos(v)]).unwrap());
            g.push(Clause::new([Lit::neg(v)]).unwrap());
        }
        let cl = Clause::new([Lit::pos(1)]).unwrap();
        group.bench_with_input(BenchmarkId::new("check_rat", n), &g, |b, g| b.iter(|| check_rat(black_box(g), &cl, Lit::pos(1))));
    }
    group.finish();
}

criterion_group!(benches, verify_corpus, simulate_corpus, rat_fanout);
criterion_main!(benches);
