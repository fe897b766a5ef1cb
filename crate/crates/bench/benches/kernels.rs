use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use suprametric_core::axioms::{verify_on, Axiom};
use suprametric_core::feasibility::Objective;
use suprametric_core::fit::{fit_suprametric_constants_on, FitLimits, SupraForm};
use suprametric_core::gallery::{load_gallery, random_space, RandomSpaceSpec};
use suprametric_core::picard::{certificate_pairs, check_ciric_contraction, solve_fixed_point};
use suprametric_core::sampling::{triples, SampleConfig};
use suprametric_core::{classify, ClassifyConfig, DistanceOracle, Point, SolveConfig};

fn classify_bench(c: &mut Criterion) {
    let exp_abs = load_gallery("exp_abs").unwrap();
    let cfg = ClassifyConfig {
        sample: SampleConfig::with_seed(1).samples(2_000),
        ..Default::default()
    };
    c.bench_function("classify/exp_abs_2k", |b| b.iter(|| classify(black_box(&exp_abs.oracle), &cfg).unwrap()));

    let finite = random_space(&RandomSpaceSpec::new(24, Axiom::Supra { s: 1.5, c: 0.5 }, 7)).unwrap();
    let oracle = DistanceOracle::finite("random24", finite);
    let cfg = ClassifyConfig::default();
    c.bench_function("classify/finite_24_exhaustive", |b| b.iter(|| classify(black_box(&oracle), &cfg).unwrap()));
}

fn triple_bench(c: &mut Criterion) {
    let item = load_gallery("supra_expm1").unwrap();
    let cfg = SampleConfig::with_seed(3).samples(10_000);
    c.bench_function("triples/sample_and_evaluate_10k", |b| b.iter(|| triples(black_box(&item.oracle), &cfg).unwrap()));

    let evaluated = triples(&item.oracle, &cfg).unwrap();
    let axiom = Axiom::Supra { s: 1.0, c: 1.0 };
    c.bench_function("triples/verify_10k", |b| b.iter(|| verify_on(black_box(&evaluated), axiom).unwrap()));
    c.bench_function("feasibility/lex_min_10k", |b| {
        b.iter(|| {
            fit_suprametric_constants_on(
                black_box(&evaluated),
                SupraForm::Plain,
                Objective::LexMinSThenC,
                FitLimits::default(),
            )
            .unwrap()
        })
    });
}

fn picard_bench(c: &mut Criterion) {
    let item = load_gallery("cosine_euclid").unwrap();
    let map = item.map.clone().unwrap();
    let x0 = Point::scalar(-1.0);
    let cfg = SolveConfig::default();
    c.bench_function("picard/solve_cosine", |b| {
        b.iter(|| solve_fixed_point(&map, black_box(&x0), &item.oracle, &cfg).unwrap())
    });

    let item = load_gallery("supra_expm1").unwrap();
    let map = item.map.clone().unwrap();
    let theta = item.theta.clone().unwrap();
    let start = Point::scalar(5.0);
    let pairs = certificate_pairs(&map, &item.oracle, &SampleConfig::with_seed(4).samples(5_000), Some(&start), 64).unwrap();
    c.bench_function("picard/ciric_certificate_5k", |b| {
        b.iter(|| check_ciric_contraction(&map, &item.oracle, &theta, black_box(&pairs)).unwrap())
    });
}

criterion_group!(benches, classify_bench, triple_bench, picard_bench);
criterion_main!(benches);
