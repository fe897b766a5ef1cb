//! Fitting the defining constants of each class on a triple sample.

use serde::{Deserialize, Serialize};

use crate::axioms::{interpolation_term, slack_ok, Axiom, TripleWitness};
use crate::error::{Error, Result};
use crate::feasibility::{Bounds, Frontier, HalfPlane, Objective};
use crate::oracle::DistanceOracle;
use crate::sampling::{self, EvaluatedTriples, SampleConfig, TripleEval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    Metric,
    B,
    StrongB,
    Supra,
    StrongSupra,
    Interpolative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsFit {
    pub kind: FitKind,
    pub s: Option<f64>,
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    /// Binding triple at the fitted constants.
    pub extremal: TripleWitness,
    pub samples_used: usize,
    pub exhaustive: bool,
}

impl ConstantsFit {
    pub fn axiom(&self) -> Axiom {
        let s = self.s.unwrap_or(1.0);
        let c = self.c.unwrap_or(0.0);
        match self.kind {
            FitKind::Metric => Axiom::Metric,
            FitKind::B => Axiom::BMetric { s },
            FitKind::StrongB => Axiom::StrongB { s },
            FitKind::Supra => Axiom::Supra { s, c },
            FitKind::StrongSupra => Axiom::StrongSupra { s, c },
            FitKind::Interpolative => Axiom::Interpolative {
                alpha: self.alpha.unwrap_or(0.5),
                c,
            },
        }
    }
}

/// Upper limits beyond which a fitted constant counts as a failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitLimits {
    pub s_max: f64,
    pub c_max: f64,
}

impl Default for FitLimits {
    fn default() -> Self {
        FitLimits {
            s_max: 1e6,
            c_max: 1e6,
        }
    }
}

/// Either fitted constants or the triple that rules out every admissible
/// choice within the limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FitOutcome {
    Feasible(ConstantsFit),
    Infeasible { witness: TripleWitness },
}

impl FitOutcome {
    pub fn fit(&self) -> Option<&ConstantsFit> {
        match self {
            FitOutcome::Feasible(f) => Some(f),
            FitOutcome::Infeasible { .. } => None,
        }
    }
}

/// Triple with the smallest normalized slack under `axiom`. Triples with a
/// zero leg are tight for any `s ≥ 1` and only count when nothing else is
/// available.
fn binding(triples: &EvaluatedTriples, axiom: Axiom) -> Option<TripleWitness> {
    let mut best: Option<(bool, f64, &TripleEval, f64)> = None;
    for e in &triples.evals {
        let degenerate = e.leg_a == 0.0 || e.leg_b == 0.0;
        let rhs = axiom.rhs(e.leg_a, e.leg_b);
        let slack = rhs - e.lhs;
        let key = slack / (1.0 + rhs.abs());
        if best.is_none_or(|(d, k, _, _)| (degenerate, key) < (d, k)) {
            best = Some((degenerate, key, e, slack));
        }
    }
    best.map(|(_, _, e, slack)| TripleWitness::from_eval(triples, e, slack))
}

/// Supremum of a per-triple lower bound on `s`, clamped to `s ≥ 1`.
fn fit_ratio(
    triples: &EvaluatedTriples,
    kind: FitKind,
    bound: impl Fn(&TripleEval) -> Option<f64>,
    axiom: impl Fn(f64) -> Axiom,
) -> Result<ConstantsFit> {
    let mut used = 0usize;
    let mut sup: Option<(f64, &TripleEval)> = None;
    for e in &triples.evals {
        if let Some(r) = bound(e) {
            used += 1;
            if sup.is_none_or(|(m, _)| r > m) {
                sup = Some((r, e));
            }
        }
    }
    let Some((ratio, e)) = sup else {
        return Err(Error::DegenerateSample(
            "no triple with a nonzero denominator".into(),
        ));
    };
    let s = ratio.max(1.0);
    let rhs = axiom(s).rhs(e.leg_a, e.leg_b);
    Ok(ConstantsFit {
        kind,
        s: Some(s),
        c: None,
        alpha: None,
        extremal: TripleWitness::from_eval(triples, e, rhs - e.lhs),
        samples_used: used,
        exhaustive: triples.exhaustive,
    })
}

/// `s = max(1, sup lhs/(leg_a + leg_b))`; triples with `leg_a + leg_b = 0`
/// are skipped. The extremal triple attains the supremum (first in sample
/// order on ties).
pub fn fit_b_index_on(triples: &EvaluatedTriples) -> Result<ConstantsFit> {
    fit_ratio(
        triples,
        FitKind::B,
        |e| {
            let d = e.leg_a + e.leg_b;
            (d > 0.0).then(|| e.lhs / d)
        },
        |s| Axiom::BMetric { s },
    )
}

pub fn fit_b_index(oracle: &DistanceOracle, cfg: &SampleConfig) -> Result<ConstantsFit> {
    fit_b_index_on(&sampling::triples(oracle, cfg)?)
}

/// `s = max(1, sup (lhs − leg_a)/leg_b)` for the strong form
/// `Δ(x, y) ≤ Δ(x, z) + s·Δ(z, y)`.
pub fn fit_strong_b_index_on(triples: &EvaluatedTriples) -> Result<ConstantsFit> {
    fit_ratio(
        triples,
        FitKind::StrongB,
        |e| (e.leg_b > 0.0).then(|| (e.lhs - e.leg_a) / e.leg_b),
        |s| Axiom::StrongB { s },
    )
}

pub fn fit_strong_b_index(oracle: &DistanceOracle, cfg: &SampleConfig) -> Result<ConstantsFit> {
    fit_strong_b_index_on(&sampling::triples(oracle, cfg)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupraForm {
    /// `s(a + b) + c·a·b`
    Plain,
    /// `s·a + b + c·a·b`
    Strong,
}

fn supra_constraint(form: SupraForm, e: &TripleEval) -> HalfPlane {
    let q = e.leg_a * e.leg_b;
    match form {
        SupraForm::Plain => HalfPlane {
            p: e.leg_a + e.leg_b,
            q,
            r: e.lhs,
        },
        SupraForm::Strong => HalfPlane {
            p: e.leg_a,
            q,
            r: e.lhs - e.leg_b,
        },
    }
}

/// Fits `(s, c)` exactly from the linear constraints one per triple.
pub fn fit_suprametric_constants_on(
    triples: &EvaluatedTriples,
    form: SupraForm,
    objective: Objective,
    limits: FitLimits,
) -> Result<FitOutcome> {
    if triples.is_empty() {
        return Err(Error::DegenerateSample("empty triple sample".into()));
    }
    if let Objective::MinCGivenS { s } = objective {
        Axiom::BMetric { s }.validate()?;
    }
    let constraints: Vec<HalfPlane> = triples.evals.iter().map(|e| supra_constraint(form, e)).collect();
    let bounds = Bounds {
        s_min: 1.0,
        s_max: limits.s_max,
        c_min: 0.0,
        c_max: limits.c_max,
    };
    let frontier = Frontier::new(&constraints, bounds);
    let make = |s: f64, c: f64| match form {
        SupraForm::Plain => Axiom::Supra { s, c },
        SupraForm::Strong => Axiom::StrongSupra { s, c },
    };
    match frontier.solve(objective) {
        Some((s, c)) => {
            let axiom = make(s, c);
            let extremal = binding(triples, axiom).expect("nonempty sample");
            Ok(FitOutcome::Feasible(ConstantsFit {
                kind: match form {
                    SupraForm::Plain => FitKind::Supra,
                    SupraForm::Strong => FitKind::StrongSupra,
                },
                s: Some(s),
                c: Some(c),
                alpha: None,
                extremal,
                samples_used: triples.len(),
                exhaustive: triples.exhaustive,
            }))
        }
        None => {
            let s = match objective {
                Objective::MinCGivenS { s } => s,
                Objective::LexMinSThenC => limits.s_max,
            };
            let witness = binding(triples, make(s, limits.c_max)).expect("nonempty sample");
            Ok(FitOutcome::Infeasible { witness })
        }
    }
}

pub fn fit_suprametric_constants(
    oracle: &DistanceOracle,
    cfg: &SampleConfig,
    form: SupraForm,
    objective: Objective,
    limits: FitLimits,
) -> Result<FitOutcome> {
    fit_suprametric_constants_on(&sampling::triples(oracle, cfg)?, form, objective, limits)
}

/// Default α grid `{0.1, …, 0.9}` for interpolative classification.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

/// Minimal `c ≥ 0` with `lhs ≤ a + b + c·a^α·b^(1−α)` on every triple, or the
/// violating triple when some triple with a vanishing interpolation term
/// already breaks the triangle inequality.
pub fn fit_interpolative_c_on(triples: &EvaluatedTriples, alpha: f64, limits: FitLimits) -> Result<FitOutcome> {
    Axiom::Interpolative { alpha, c: 0.0 }.validate()?;
    if triples.is_empty() {
        return Err(Error::DegenerateSample("empty triple sample".into()));
    }
    let mut c = 0.0f64;
    for e in &triples.evals {
        let term = interpolation_term(e.leg_a, e.leg_b, alpha);
        let excess = e.lhs - e.leg_a - e.leg_b;
        if term > 0.0 {
            c = c.max(excess / term);
        } else if !slack_ok(-excess, e.leg_a + e.leg_b) {
            let witness = binding(triples, Axiom::Metric).expect("nonempty sample");
            return Ok(FitOutcome::Infeasible { witness });
        }
    }
    let axiom = Axiom::Interpolative {
        alpha,
        c: c.min(limits.c_max),
    };
    if c > limits.c_max {
        let witness = binding(triples, axiom).expect("nonempty sample");
        return Ok(FitOutcome::Infeasible { witness });
    }
    Ok(FitOutcome::Feasible(ConstantsFit {
        kind: FitKind::Interpolative,
        s: None,
        c: Some(c),
        alpha: Some(alpha),
        extremal: binding(triples, axiom).expect("nonempty sample"),
        samples_used: triples.len(),
        exhaustive: triples.exhaustive,
    }))
}

/// Scans `alphas` and keeps the α with the smallest fitted `c` (first on
/// ties). Infeasible for every α yields the witness of the first α.
pub fn fit_interpolative_on(triples: &EvaluatedTriples, alphas: &[f64], limits: FitLimits) -> Result<FitOutcome> {
    let mut best: Option<ConstantsFit> = None;
    let mut first_fail: Option<FitOutcome> = None;
    for &alpha in alphas {
        match fit_interpolative_c_on(triples, alpha, limits)? {
            FitOutcome::Feasible(f) => {
                if best.as_ref().is_none_or(|b| f.c < b.c) {
                    best = Some(f);
                }
            }
            fail => {
                first_fail.get_or_insert(fail);
            }
        }
    }
    match (best, first_fail) {
        (Some(f), _) => Ok(FitOutcome::Feasible(f)),
        (None, Some(fail)) => Ok(fail),
        (None, None) => Err(Error::param("empty alpha grid")),
    }
}

/// Index of the b-metric implied by an `(α, c)` interpolative metric:
/// `max{1 + cα, 1 + c(1 − α)}`.
pub fn interpolative_to_b_index(alpha: f64, c: f64) -> Result<f64> {
    Axiom::Interpolative { alpha, c }.validate()?;
    Ok((1.0 + c * alpha).max(1.0 + c * (1.0 - alpha)))
}

/// `α·a + (1 − α)·b − a^α·b^(1−α)`, nonnegative by Young's inequality.
///
/// Negative values no larger than a few ulps of the weighted mean are
/// rounding and are returned as zero; anything below that is passed through.
pub fn young_gap(a: f64, b: f64, alpha: f64) -> f64 {
    let mean = alpha * a + (1.0 - alpha) * b;
    let gap = mean - interpolation_term(a, b, alpha);
    if gap < 0.0 && gap >= -8.0 * f64::EPSILON * mean {
        0.0
    } else {
        gap
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FiniteSpace, Formula};
    use crate::point::{DomainBox, Point};
    use approx::assert_relative_eq;

    fn line(f: Formula, lo: f64, hi: f64) -> DistanceOracle {
        DistanceOracle::analytic("t", f, DomainBox::line(lo, hi).unwrap()).unwrap()
    }

    fn on_points(f: Formula, pts: &[f64]) -> DistanceOracle {
        let o = line(f, -1e3, 1e3);
        let rows = pts
            .iter()
            .map(|&x| pts.iter().map(|&y| o.distance(&Point::scalar(x), &Point::scalar(y)).unwrap()).collect())
            .collect();
        DistanceOracle::finite("pts", FiniteSpace::from_rows(rows).unwrap())
    }

    #[test]
    fn b_index_examples() {
        let cfg = SampleConfig::default();
        assert_eq!(fit_b_index(&line(Formula::Euclidean, -1.0, 1.0), &cfg).unwrap().s, Some(1.0));

        let sq = fit_b_index(&on_points(Formula::Power { p: 2.0 }, &[0.0, 1.0, 2.0]), &cfg).unwrap();
        assert_eq!(sq.s, Some(2.0));
        assert!(sq.exhaustive);
        assert_eq!(sq.samples_used, 27 - 3);
        let w = &sq.extremal;
        assert_eq!((w.x.index(), w.z.index(), w.y.index()), (Some(0), Some(1), Some(2)));
        assert_eq!((w.lhs, w.slack), (4.0, 0.0));

        let e = on_points(Formula::ExpAbs, &[10.0, 0.0, -10.0]);
        let f = fit_b_index(&e, &cfg).unwrap();
        let expected = (20f64).exp() / (2.0 * (10f64).exp());
        assert_relative_eq!(f.s.unwrap(), expected, max_relative = 1e-12);
        assert!((f.s.unwrap() - 11013.2).abs() < 0.1);
    }

    #[test]
    fn degenerate_sample() {
        let one = DistanceOracle::finite("one", FiniteSpace::from_rows(vec![vec![0.0]]).unwrap());
        assert!(matches!(
            fit_b_index(&one, &SampleConfig::default()),
            Err(Error::DegenerateSample(_))
        ));
    }

    #[test]
    fn expm1_suprametric_constants() {
        let o = line(Formula::Expm1Abs, -20.0, 20.0);
        let out = fit_suprametric_constants(
            &o,
            &SampleConfig::default(),
            SupraForm::Plain,
            Objective::LexMinSThenC,
            FitLimits::default(),
        )
        .unwrap();
        let f = out.fit().unwrap();
        assert_eq!(f.s, Some(1.0));
        assert_relative_eq!(f.c.unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn metric_suprametric_constants() {
        let o = line(Formula::Euclidean, -5.0, 5.0);
        let out = fit_suprametric_constants(
            &o,
            &SampleConfig::default(),
            SupraForm::Plain,
            Objective::LexMinSThenC,
            FitLimits::default(),
        )
        .unwrap();
        let f = out.fit().unwrap();
        assert_eq!((f.s, f.c), (Some(1.0), Some(0.0)));
    }

    #[test]
    fn exp_abs_symmetric_repair_is_a_suprametric() {
        let o = line(Formula::ExpAbs, -20.0, 20.0);
        let out = fit_suprametric_constants(
            &o,
            &SampleConfig::default(),
            SupraForm::Plain,
            Objective::LexMinSThenC,
            FitLimits::default(),
        )
        .unwrap();
        let f = out.fit().unwrap();
        assert_eq!(f.s, Some(1.0));
        assert!(f.c.unwrap() <= 1.0);
        assert!(crate::axioms::verify_b_suprametric(&o, 1.0, 1.0, &SampleConfig::default()).unwrap().ok);
    }

    #[test]
    fn infeasible_within_limits() {
        let o = on_points(Formula::ExpAbs, &[10.0, 0.0, -10.0]);
        let tight = FitLimits { s_max: 2.0, c_max: 1e-12 };
        let out = fit_suprametric_constants(
            &o,
            &SampleConfig::default(),
            SupraForm::Plain,
            Objective::LexMinSThenC,
            tight,
        )
        .unwrap();
        match out {
            FitOutcome::Infeasible { witness } => {
                assert!(witness.slack < 0.0);
                assert_eq!(witness.z.index(), Some(1));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn strong_b_index() {
        let o = on_points(Formula::Power { p: 2.0 }, &[0.0, 1.0, 2.0]);
        // (lhs − a)/b at (0, 1, 2) = (4 − 1)/1.
        let f = fit_strong_b_index(&o, &SampleConfig::default()).unwrap();
        assert_eq!(f.s, Some(3.0));
    }

    #[test]
    fn interpolative_examples() {
        assert_eq!(interpolative_to_b_index(0.5, 2.0).unwrap(), 2.0);
        assert_eq!(interpolative_to_b_index(0.3, 0.0).unwrap(), 1.0);
        assert_eq!(interpolative_to_b_index(0.25, 4.0).unwrap(), 4.0);
        assert!(interpolative_to_b_index(1.0, 1.0).is_err());
        assert!(interpolative_to_b_index(0.0, 1.0).is_err());
        assert!(interpolative_to_b_index(0.5, -1.0).is_err());

        let o = on_points(Formula::Power { p: 2.0 }, &[0.0, 1.0, 2.0]);
        let t = sampling::triples(&o, &SampleConfig::default()).unwrap();
        let f = fit_interpolative_c_on(&t, 0.5, FitLimits::default()).unwrap();
        assert_eq!(f.fit().unwrap().c, Some(2.0));
    }

    #[test]
    fn young_gap_examples() {
        for alpha in [0.1, 0.5, 0.77] {
            let g = young_gap(3.0, 3.0, alpha);
            assert!((0.0..=1e-14).contains(&g), "{g}");
        }
        assert_relative_eq!(young_gap(4.0, 1.0, 0.5), 0.5, max_relative = 1e-15);
        assert_relative_eq!(young_gap(0.0, 5.0, 0.3), 3.5, max_relative = 1e-15);
    }
}
