//! Spaces, maps and comparison functions with known answers.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::Axiom;
use crate::classify::AxiomReport;
use crate::comparison::ComparisonFn;
use crate::error::{Error, Result};
use crate::oracle::{Carrier, DistanceOracle, FiniteSpace, Formula};
use crate::picard::SelfMap;
use crate::point::{DomainBox, Point};
use crate::sampling;

/// Default box for exponential distances: `e⁴⁰` still fits in a double.
pub const EXP_BOX: (f64, f64) = (-20.0, 20.0);
/// Default box for polynomial distances.
pub const POLY_BOX: (f64, f64) = (-1e3, 1e3);

/// The class a gallery item is known to belong to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ExpectedClass {
    Metric,
    /// A b-metric with index exactly `s`, and not a metric.
    BMetric { s: f64 },
    /// A b-suprametric with constants `(s, c)`. With `b_unbounded`, the
    /// b-index must fail or keep growing with the box.
    Suprametric { s: f64, c: f64, b_unbounded: bool },
    /// Violates symmetry, identity or non-negativity.
    NotSemimetric,
}

fn close(a: Option<f64>, b: f64) -> bool {
    a.is_some_and(|a| (a - b).abs() <= 1e-9 * (1.0 + b.abs()))
}

// On a bounded box the least feasible constant may sit just below the
// stated one (for exp_abs it is 1 - 2e^-20), never above it.
fn at_most_near(a: Option<f64>, b: f64) -> bool {
    a.is_some_and(|a| a <= b + 1e-9 * (1.0 + b.abs()) && a >= b - 1e-6 * (1.0 + b.abs()))
}

impl ExpectedClass {
    /// Mismatches between this expectation and a classification report.
    pub fn mismatches(&self, r: &AxiomReport) -> Vec<String> {
        let mut out = Vec::new();
        let mut need = |ok: bool, msg: &str| {
            if !ok {
                out.push(msg.to_string());
            }
        };
        match *self {
            ExpectedClass::Metric => {
                need(r.semimetric.ok, "semimetric check failed");
                need(r.metric.holds(), "metric does not hold");
            }
            ExpectedClass::BMetric { s } => {
                need(r.semimetric.ok, "semimetric check failed");
                need(r.b.holds() && close(r.b.s(), s), "b-index differs");
                need(r.metric.fails(), "metric should fail");
            }
            ExpectedClass::Suprametric { s, c, b_unbounded } => {
                need(r.semimetric.ok, "semimetric check failed");
                need(r.supra.holds(), "b-suprametric does not hold");
                need(close(r.supra.s(), s) && at_most_near(r.supra.c(), c), "suprametric constants differ");
                if b_unbounded {
                    let growing = r.b_growth.as_ref().is_some_and(|g| g.growing);
                    need(r.b.fails() || growing, "b-index should fail or grow");
                }
            }
            ExpectedClass::NotSemimetric => need(!r.semimetric.ok, "semimetric violation expected"),
        }
        out
    }
}

/// Declared continuity hypotheses; samples can refute but not prove them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Continuity {
    pub map: bool,
    pub distance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalleryItem {
    pub name: String,
    #[serde(rename = "space", serialize_with = "describe_oracle")]
    pub oracle: DistanceOracle,
    pub expected: ExpectedClass,
    pub map: Option<SelfMap>,
    pub theta: Option<ComparisonFn>,
    pub fixed_point: Option<Point>,
    pub continuity: Continuity,
    pub note: String,
}

fn describe_oracle<S: serde::Serializer>(o: &DistanceOracle, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&o.describe())
}

fn boxed(name: &str, formula: Formula, (lo, hi): (f64, f64)) -> DistanceOracle {
    DistanceOracle::analytic(name, formula, DomainBox::line(lo, hi).expect("static box"))
        .expect("static formula")
}

struct Spec {
    name: &'static str,
    formula: Formula,
    domain: (f64, f64),
    expected: ExpectedClass,
    map: Option<SelfMap>,
    theta: Option<ComparisonFn>,
    fixed_point: Option<f64>,
    note: &'static str,
}

fn specs() -> Vec<Spec> {
    let metric_map = |name, map, theta: Option<ComparisonFn>, fixed: Option<f64>, note| Spec {
        name,
        formula: Formula::Euclidean,
        domain: POLY_BOX,
        expected: ExpectedClass::Metric,
        map: Some(map),
        theta,
        fixed_point: fixed,
        note,
    };
    vec![
        Spec {
            name: "euclidean_line",
            formula: Formula::Euclidean,
            domain: POLY_BOX,
            expected: ExpectedClass::Metric,
            map: None,
            theta: None,
            fixed_point: None,
            note: "|x - y| on the real line",
        },
        Spec {
            name: "exp_signed",
            formula: Formula::ExpSigned,
            domain: EXP_BOX,
            expected: ExpectedClass::NotSemimetric,
            map: None,
            theta: None,
            fixed_point: None,
            note: "exp(x - y) for x != y, taken literally; not symmetric",
        },
        Spec {
            name: "exp_abs",
            formula: Formula::ExpAbs,
            domain: EXP_BOX,
            expected: ExpectedClass::Suprametric {
                s: 1.0,
                c: 1.0,
                b_unbounded: true,
            },
            map: None,
            theta: None,
            fixed_point: None,
            note: "exp(|x - y|) for x != y; suprametric with s = c = 1, midpoint ratio exp(t/2)/2 is unbounded",
        },
        Spec {
            name: "supra_expm1",
            formula: Formula::Expm1Abs,
            domain: (-5.0, 5.0),
            expected: ExpectedClass::Suprametric {
                s: 1.0,
                c: 1.0,
                b_unbounded: false,
            },
            map: Some(SelfMap::halving()),
            theta: Some(ComparisonFn::SqrtShift),
            fixed_point: Some(0.0),
            note: "exp(|x - y|) - 1 with T x = x/2; the contraction holds with equality for sqrt_shift",
        },
        Spec {
            name: "power_square",
            formula: Formula::Power { p: 2.0 },
            domain: POLY_BOX,
            expected: ExpectedClass::BMetric { s: 2.0 },
            map: None,
            theta: None,
            fixed_point: None,
            note: "|x - y|^2; b-metric with s = 2 by convexity",
        },
        metric_map(
            "halving_euclid",
            SelfMap::halving(),
            Some(ComparisonFn::Linear { k: 0.5 }),
            Some(0.0),
            "|x - y| with T x = x/2",
        ),
        metric_map(
            "doubling_euclid",
            SelfMap::doubling(),
            Some(ComparisonFn::Linear { k: 0.5 }),
            None,
            "|x - y| with T x = 2x; orbits from x != 0 leave every box",
        ),
        metric_map(
            "identity_euclid",
            SelfMap::identity(),
            None,
            None,
            "|x - y| with the identity map; every point is fixed",
        ),
        Spec {
            name: "cosine_euclid",
            formula: Formula::Euclidean,
            domain: (-1.0, 1.0),
            expected: ExpectedClass::Metric,
            map: Some(SelfMap::Cosine),
            theta: Some(ComparisonFn::Linear { k: 0.85 }),
            fixed_point: Some(0.739_085_133_215_160_7),
            note: "|x - y| on [-1, 1] with T x = cos x; Lipschitz constant sin 1",
        },
    ]
}

fn build(spec: Spec) -> GalleryItem {
    GalleryItem {
        name: spec.name.into(),
        oracle: boxed(spec.name, spec.formula, spec.domain),
        expected: spec.expected,
        map: spec.map,
        theta: spec.theta,
        fixed_point: spec.fixed_point.map(Point::scalar),
        continuity: Continuity {
            map: true,
            distance: true,
        },
        note: spec.note.into(),
    }
}

pub fn gallery_names() -> Vec<&'static str> {
    specs().into_iter().map(|s| s.name).collect()
}

pub fn list_gallery() -> Vec<GalleryItem> {
    specs().into_iter().map(build).collect()
}

pub fn load_gallery(name: &str) -> Result<GalleryItem> {
    specs()
        .into_iter()
        .find(|s| s.name == name)
        .map(build)
        .ok_or_else(|| Error::UnknownItem(format!("no gallery item named `{name}`")))
}

/// Samples a one-dimensional analytic space on `k` evenly spaced points.
pub fn export_finite(oracle: &DistanceOracle, k: usize) -> Result<FiniteSpace> {
    match oracle.carrier() {
        Carrier::Finite(s) => Ok(s.clone()),
        Carrier::Analytic { domain, .. } => {
            if domain.dim != 1 {
                return Err(Error::param("grid export supports one-dimensional boxes only"));
            }
            if k < 2 {
                return Err(Error::param("grid export needs at least two points"));
            }
            let pts = sampling::diagonal_grid(domain, k);
            let labels = pts.iter().map(|p| format!("{}", p)).collect();
            let rows = pts
                .iter()
                .map(|x| pts.iter().map(|y| oracle.distance(x, y)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            FiniteSpace::new(labels, rows)
        }
    }
}

/// A random symmetric space on `n` points with zero diagonal, tightened until
/// `axiom` holds on every triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSpaceSpec {
    pub n: usize,
    pub axiom: Axiom,
    pub seed: u64,
    /// Entries are drawn log-uniformly from `[lo, hi]`.
    pub lo: f64,
    pub hi: f64,
}

impl RandomSpaceSpec {
    pub fn new(n: usize, axiom: Axiom, seed: u64) -> Self {
        RandomSpaceSpec {
            n,
            axiom,
            seed,
            lo: 0.01,
            hi: 100.0,
        }
    }
}

const MAX_TIGHTEN_PASSES: usize = 200;

pub fn random_space(spec: &RandomSpaceSpec) -> Result<FiniteSpace> {
    spec.axiom.validate()?;
    if spec.n == 0 || !(spec.lo > 0.0 && spec.hi >= spec.lo) {
        return Err(Error::param("random spaces need n >= 1 and 0 < lo <= hi"));
    }
    let n = spec.n;
    let mut rng = sampling::rng(spec.seed);
    let (llo, lhi) = (spec.lo.ln(), spec.hi.ln());
    let mut d = vec![vec![0.0; n]; n];
    for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
        let v = rng.random_range(llo..=lhi).exp();
        d[i][j] = v;
        d[j][i] = v;
    }
    for _ in 0..MAX_TIGHTEN_PASSES {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    if i == k || j == k {
                        continue;
                    }
                    let bound = spec.axiom.symmetric_rhs(d[i][k], d[k][j]);
                    if d[i][j] > bound {
                        d[i][j] = bound;
                        d[j][i] = bound;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return FiniteSpace::from_rows(d);
        }
    }
    Err(Error::DegenerateSample(format!(
        "tightening did not settle after {MAX_TIGHTEN_PASSES} passes"
    )))
}
