use atlvis::checker::{CheckConfig, Checker};
use atlvis::gen::{gen_icgs, GenParams};
use atlvis::logic::parse_formula;
use atlvis::xval::{xvalidate, XValParams};
use atlvis::{Dialect, Exec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn checker(c: &mut Criterion) {
    let m = gen_icgs(&GenParams { states: 12, agents: 2, actions: 3, classes: 4, ..GenParams::default() }, 11).unwrap();
    let f = parse_formula("<<a0,a1>> (G F p & F G !q)", Dialect::AtlStar).unwrap();
    let mut group = c.benchmark_group("atlstar_sat");
    for (name, exec) in EXECS {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| Checker::new(&m, CheckConfig::new(Dialect::AtlStar).with_exec(exec)).unwrap().sat(&f).unwrap())
        });
    }
    group.finish();
}

fn cross_validation(c: &mut Criterion) {
    let p = XValParams { seed: 1, count: 100, ..XValParams::default() };
    let mut group = c.benchmark_group("xvalidate_100");
    group.sample_size(10);
    for (name, exec) in EXECS {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| b.iter(|| xvalidate(&p, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, checker, cross_validation);
criterion_main!(benches);
