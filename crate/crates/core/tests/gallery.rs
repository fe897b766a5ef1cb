use suprametric_core::classify::{classify, ClassifyConfig};
use suprametric_core::fit::fit_b_index;
use suprametric_core::gallery::{list_gallery, load_gallery};
use suprametric_core::picard::{
    certificate_pairs, check_ciric_contraction, solve_fixed_point, uniqueness_probe, SolveConfig,
};
use suprametric_core::point::{DomainBox, Point};
use suprametric_core::sampling::SampleConfig;

#[test]
fn every_item_reproduces_its_class() {
    let cfg = ClassifyConfig::default();
    for item in list_gallery() {
        let report = classify(&item.oracle, &cfg).unwrap();
        let bad = item.expected.mismatches(&report);
        assert!(bad.is_empty(), "{}: {bad:?}", item.name);
        assert!(report.lattice_ok(), "{}: {:?}", item.name, report.lattice_issues);
    }
}

#[test]
fn exp_abs_index_grows_with_the_box() {
    let item = load_gallery("exp_abs").unwrap();
    let cfg = SampleConfig::with_seed(0).samples(200);
    let mut last = 0.0;
    for k in 1..=10 {
        let half = 2.0 * k as f64;
        let o = item.oracle.with_domain(DomainBox::line(-half, half).unwrap()).unwrap();
        let s = fit_b_index(&o, &cfg).unwrap().s.unwrap();
        // the midpoint triple (-2k, 0, 2k) has ratio e^{2k}/2
        assert!(s >= (half).exp() / 2.0 * (1.0 - 1e-12), "k={k}: {s}");
        assert!(s > last);
        last = s;
    }
}

#[test]
fn maps_reach_their_fixed_points() {
    for item in list_gallery() {
        let (Some(map), Some(z)) = (&item.map, &item.fixed_point) else {
            continue;
        };
        let d = item.oracle.domain().unwrap();
        let starts: Vec<Point> = [d.lo, d.center(), d.hi, 0.3 * d.hi].map(Point::scalar).to_vec();
        let u = uniqueness_probe(map, &item.oracle, &starts, &SolveConfig::default(), 1e-8).unwrap();
        assert!(u.ok, "{}", item.name);
        let got = u.distinct[0].as_scalar().unwrap();
        assert!((got - z.as_scalar().unwrap()).abs() < 1e-8, "{}: {got}", item.name);
    }
}

#[test]
fn certified_items() {
    for item in list_gallery() {
        let (Some(map), Some(theta), Some(_)) = (&item.map, &item.theta, &item.fixed_point) else {
            continue;
        };
        let pairs = certificate_pairs(
            map,
            &item.oracle,
            &SampleConfig::with_seed(0).samples(2000),
            Some(&Point::scalar(item.oracle.domain().unwrap().hi)),
            32,
        )
        .unwrap();
        let c = check_ciric_contraction(map, &item.oracle, theta, &pairs).unwrap();
        assert!(c.ok(), "{}: {c:?}", item.name);
    }
}

#[test]
fn supra_expm1_from_every_start() {
    let item = load_gallery("supra_expm1").unwrap();
    let cfg = SolveConfig {
        tol: 1e-10,
        residual_tol: 1e-10,
        ..Default::default()
    };
    for x0 in [-5.0, -1.0, 0.3, 5.0] {
        let r = solve_fixed_point(item.map.as_ref().unwrap(), &Point::scalar(x0), &item.oracle, &cfg).unwrap();
        assert!(r.converged());
        assert!(r.fixed_point.as_scalar().unwrap().abs() <= 1e-10, "{x0}");
    }
}
