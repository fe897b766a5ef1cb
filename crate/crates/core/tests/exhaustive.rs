use proptest::prelude::*;
use suprametric_core::axioms::Axiom;
use suprametric_core::classify::{classify, ClassifyConfig};
use suprametric_core::feasibility::Objective;
use suprametric_core::fit::{fit_b_index, fit_b_index_on, fit_suprametric_constants, FitLimits, SupraForm};
use suprametric_core::gallery::{random_space, RandomSpaceSpec};
use suprametric_core::oracle::{DistanceOracle, FiniteSpace};
use suprametric_core::sampling::{triples, SampleConfig};

fn brute(s: &FiniteSpace) -> (f64, [usize; 3]) {
    let n = s.len();
    let (mut best, mut arg) = (f64::NEG_INFINITY, [0; 3]);
    for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                let d = s.get(x, z) + s.get(z, y);
                if d > 0.0 && s.get(x, y) / d > best {
                    best = s.get(x, y) / d;
                    arg = [x, z, y];
                }
            }
        }
    }
    (best.max(1.0), arg)
}

fn random_matrix(n: usize, seed: u64) -> FiniteSpace {
    random_space(&RandomSpaceSpec::new(n, Axiom::BMetric { s: 3.0 }, seed)).unwrap()
}

proptest! {
    #[test]
    fn exhaustive_fit_matches_enumeration(seed in 0u64..100_000, n in 2usize..=12) {
        let space = random_matrix(n, seed);
        let o = DistanceOracle::finite("r", space.clone());
        let fit = fit_b_index(&o, &SampleConfig::with_seed(seed)).unwrap();
        prop_assert!(fit.exhaustive);
        let (s, _) = brute(&space);
        prop_assert_eq!(fit.s.unwrap(), s);
    }

    #[test]
    fn scaling_covariance(seed in 0u64..10_000, n in 3usize..=8, lambda in 0.01f64..100.0) {
        let space = random_space(&RandomSpaceSpec::new(n, Axiom::Supra { s: 1.0, c: 0.5 }, seed)).unwrap();
        let cfg = SampleConfig::with_seed(0);
        let a = DistanceOracle::finite("a", space.clone());
        let b = DistanceOracle::finite("b", space.scaled(lambda));
        let sa = fit_b_index(&a, &cfg).unwrap().s.unwrap();
        let sb = fit_b_index(&b, &cfg).unwrap().s.unwrap();
        prop_assert!((sa - sb).abs() <= 1e-12 * sa);

        let obj = Objective::MinCGivenS { s: 1.0 };
        let fa = fit_suprametric_constants(&a, &cfg, SupraForm::Plain, obj, FitLimits::default()).unwrap();
        let fb = fit_suprametric_constants(&b, &cfg, SupraForm::Plain, obj, FitLimits::default()).unwrap();
        let (ca, cb) = (fa.fit().unwrap().c.unwrap(), fb.fit().unwrap().c.unwrap());
        prop_assert!((cb - ca / lambda).abs() <= 1e-9 * (1.0 + ca / lambda), "{} vs {}", cb, ca / lambda);
    }

    #[test]
    fn enlarging_the_sample_never_lowers_s(seed in 0u64..10_000, n in 20usize..40, k in 100usize..1000) {
        let space = random_matrix(n, seed);
        let o = DistanceOracle::finite("r", space);
        let cfg = SampleConfig { exhaustive_cap: 4, ..SampleConfig::with_seed(seed).samples(2 * k) };
        let all = triples(&o, &cfg).unwrap();
        let mut prefix = all.clone();
        prefix.evals.truncate(k);
        let small = fit_b_index_on(&prefix).unwrap().s.unwrap();
        let large = fit_b_index_on(&all).unwrap().s.unwrap();
        prop_assert!(large >= small);
    }

    #[test]
    fn relabeling_leaves_the_report_unchanged(seed in 0u64..1000, n in 3usize..=7) {
        let space = random_matrix(n, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(seed as usize % n);
        perm.swap(0, n - 1);
        let cfg = ClassifyConfig { growth_probe: false, ..Default::default() };
        let a = classify(&DistanceOracle::finite("a", space.clone()), &cfg).unwrap();
        let b = classify(&DistanceOracle::finite("a", space.permuted(&perm).unwrap()), &cfg).unwrap();
        prop_assert_eq!(a.b.s(), b.b.s());
        prop_assert_eq!(a.supra.s(), b.supra.s());
        prop_assert_eq!(a.supra.c(), b.supra.c());
        prop_assert_eq!(a.metric.holds(), b.metric.holds());
        prop_assert_eq!(a.interpolative.c(), b.interpolative.c());
    }
}

#[test]
fn extremal_witness_attains_the_sup() {
    let space = FiniteSpace::from_rows(vec![vec![0.0, 1.0, 4.0], vec![1.0, 0.0, 1.0], vec![4.0, 1.0, 0.0]]).unwrap();
    let fit = fit_b_index(&DistanceOracle::finite("sq", space.clone()), &SampleConfig::default()).unwrap();
    let (s, arg) = brute(&space);
    assert_eq!(fit.s, Some(s));
    assert_eq!(s, 2.0);
    let idx = [&fit.extremal.x, &fit.extremal.z, &fit.extremal.y].map(|p| p.index().unwrap());
    assert_eq!(idx, arg);
}
