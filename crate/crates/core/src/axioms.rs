//! Axiom inequalities of the generalized metric classes and their checks.
//!
//! Every class bounds `Δ(x, y)` by a right-hand side in the two legs
//! `a = Δ(x, z)` and `b = Δ(z, y)`:
//!
//! | class                 | right-hand side               |
//! |-----------------------|-------------------------------|
//! | metric                | `a + b`                       |
//! | b-metric              | `s(a + b)`                    |
//! | strong b-metric       | `a + s·b`                     |
//! | b-suprametric         | `s(a + b) + c·a·b`            |
//! | strong b-suprametric  | `s·a + b + c·a·b`             |
//! | interpolative         | `a + b + c·a^α·b^(1−α)`       |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::DistanceOracle;
use crate::point::Point;
use crate::sampling::{self, EvaluatedTriples, SampleConfig, TripleEval};

/// Relative slack tolerance for all axiom inequalities.
pub const SLACK_RTOL: f64 = 1e-9;

/// `slack ≥ −SLACK_RTOL·(1 + |rhs|)`.
#[inline]
pub fn slack_ok(slack: f64, rhs: f64) -> bool {
    slack >= -SLACK_RTOL * (1.0 + rhs.abs())
}

#[inline]
fn normalized(slack: f64, rhs: f64) -> f64 {
    slack / (1.0 + rhs.abs())
}

/// `a^α·b^(1−α)` with `0^α := 0`.
#[inline]
pub fn interpolation_term(a: f64, b: f64, alpha: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a.powf(alpha) * b.powf(1.0 - alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Axiom {
    Metric,
    BMetric { s: f64 },
    StrongB { s: f64 },
    Supra { s: f64, c: f64 },
    StrongSupra { s: f64, c: f64 },
    Interpolative { alpha: f64, c: f64 },
}

impl Axiom {
    pub fn validate(&self) -> Result<()> {
        let check_s = |s: f64| {
            if s.is_finite() && s >= 1.0 {
                Ok(())
            } else {
                Err(Error::param(format!("index s must satisfy s >= 1, got {s}")))
            }
        };
        let check_c = |c: f64| {
            if c.is_finite() && c >= 0.0 {
                Ok(())
            } else {
                Err(Error::param(format!("constant c must satisfy c >= 0, got {c}")))
            }
        };
        match *self {
            Axiom::Metric => Ok(()),
            Axiom::BMetric { s } | Axiom::StrongB { s } => check_s(s),
            Axiom::Supra { s, c } | Axiom::StrongSupra { s, c } => check_s(s).and(check_c(c)),
            Axiom::Interpolative { alpha, c } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::param(format!("alpha must lie in (0, 1), got {alpha}")));
                }
                check_c(c)
            }
        }
    }

    /// Right-hand side for legs `a = Δ(x, z)`, `b = Δ(z, y)`.
    #[inline]
    pub fn rhs(&self, a: f64, b: f64) -> f64 {
        match *self {
            Axiom::Metric => a + b,
            Axiom::BMetric { s } => s * (a + b),
            Axiom::StrongB { s } => a + s * b,
            Axiom::Supra { s, c } => s * (a + b) + c * a * b,
            Axiom::StrongSupra { s, c } => s * a + b + c * a * b,
            Axiom::Interpolative { alpha, c } => a + b + c * interpolation_term(a, b, alpha),
        }
    }

    /// Bound that holds for both orientations of a symmetric pair of legs.
    pub fn symmetric_rhs(&self, a: f64, b: f64) -> f64 {
        self.rhs(a, b).min(self.rhs(b, a))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Metric => "metric",
            Axiom::BMetric { .. } => "b-metric",
            Axiom::StrongB { .. } => "strong b-metric",
            Axiom::Supra { .. } => "b-suprametric",
            Axiom::StrongSupra { .. } => "strong b-suprametric",
            Axiom::Interpolative { .. } => "interpolative metric",
        }
    }
}

/// A concrete triple `(x, z, y)` with its distances and the slack
/// `rhs − lhs` of the axiom under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleWitness {
    pub x: Point,
    pub z: Point,
    pub y: Point,
    pub lhs: f64,
    pub leg_a: f64,
    pub leg_b: f64,
    pub slack: f64,
}

impl TripleWitness {
    pub(crate) fn from_eval(triples: &EvaluatedTriples, e: &TripleEval, slack: f64) -> Self {
        TripleWitness {
            x: triples.point(e.idx[0]).clone(),
            z: triples.point(e.idx[1]).clone(),
            y: triples.point(e.idx[2]).clone(),
            lhs: e.lhs,
            leg_a: e.leg_a,
            leg_b: e.leg_b,
            slack,
        }
    }

    /// `Δ(x, y) / (Δ(x, z) + Δ(z, y))`, the b-metric ratio of the triple.
    pub fn triangle_ratio(&self) -> f64 {
        let d = self.leg_a + self.leg_b;
        if d > 0.0 {
            self.lhs / d
        } else {
            0.0
        }
    }
}

/// Outcome of checking one axiom on a triple sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub ok: bool,
    pub triples_checked: usize,
    pub violations: usize,
    /// Triple with the smallest normalized slack.
    pub worst: Option<TripleWitness>,
    pub exhaustive: bool,
}

/// Checks `axiom` on already evaluated triples.
pub fn verify_on(triples: &EvaluatedTriples, axiom: Axiom) -> Result<AxiomCheck> {
    axiom.validate()?;
    let mut violations = 0;
    let mut worst: Option<(f64, &TripleEval, f64)> = None;
    for e in &triples.evals {
        let rhs = axiom.rhs(e.leg_a, e.leg_b);
        let slack = rhs - e.lhs;
        if !slack_ok(slack, rhs) {
            violations += 1;
        }
        let key = normalized(slack, rhs);
        if worst.is_none_or(|(k, _, _)| key < k) {
            worst = Some((key, e, slack));
        }
    }
    Ok(AxiomCheck {
        axiom,
        ok: violations == 0,
        triples_checked: triples.len(),
        violations,
        worst: worst.map(|(_, e, slack)| TripleWitness::from_eval(triples, e, slack)),
        exhaustive: triples.exhaustive,
    })
}

pub fn verify(oracle: &DistanceOracle, axiom: Axiom, cfg: &SampleConfig) -> Result<AxiomCheck> {
    axiom.validate()?;
    verify_on(&sampling::triples(oracle, cfg)?, axiom)
}

pub fn verify_b_metric(oracle: &DistanceOracle, s: f64, cfg: &SampleConfig) -> Result<AxiomCheck> {
    verify(oracle, Axiom::BMetric { s }, cfg)
}

pub fn verify_strong_b_metric(oracle: &DistanceOracle, s: f64, cfg: &SampleConfig) -> Result<AxiomCheck> {
    verify(oracle, Axiom::StrongB { s }, cfg)
}

pub fn verify_b_suprametric(oracle: &DistanceOracle, s: f64, c: f64, cfg: &SampleConfig) -> Result<AxiomCheck> {
    verify(oracle, Axiom::Supra { s, c }, cfg)
}

pub fn verify_strong_b_suprametric(
    oracle: &DistanceOracle,
    s: f64,
    c: f64,
    cfg: &SampleConfig,
) -> Result<AxiomCheck> {
    verify(oracle, Axiom::StrongSupra { s, c }, cfg)
}

pub fn verify_interpolative(oracle: &DistanceOracle, alpha: f64, c: f64, cfg: &SampleConfig) -> Result<AxiomCheck> {
    verify(oracle, Axiom::Interpolative { alpha, c }, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemimetricAxiom {
    NonNegativity,
    Identity,
    Symmetry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemimetricViolation {
    pub axiom: SemimetricAxiom,
    pub x: Point,
    pub y: Point,
    /// `Δ(x, y)`
    pub forward: f64,
    /// `Δ(y, x)` for symmetry witnesses.
    pub backward: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemimetricReport {
    pub ok: bool,
    pub pairs_checked: usize,
    pub violations: usize,
    pub witnesses: Vec<SemimetricViolation>,
    pub exhaustive: bool,
}

pub const WITNESS_CAP: usize = 16;

/// Checks non-negativity, identity of indiscernibles and symmetry on a pair
/// sample. Symmetry witnesses are oriented so that `Δ(x, y) > Δ(y, x)`.
pub fn check_semimetric(oracle: &DistanceOracle, cfg: &SampleConfig) -> Result<SemimetricReport> {
    let sample = sampling::sample_pairs(oracle, cfg)?;
    if sample.pairs.is_empty() {
        return Err(Error::DegenerateSample("no pairs to check".into()));
    }
    let mut witnesses = Vec::new();
    let mut violations = 0usize;
    let mut checked = 0usize;
    let mut record = |v: SemimetricViolation, witnesses: &mut Vec<SemimetricViolation>| {
        violations += 1;
        if witnesses.len() < WITNESS_CAP {
            witnesses.push(v);
        }
    };
    for &[a, b] in &sample.pairs {
        if a > b {
            continue;
        }
        let x = &sample.pool[a as usize];
        let y = &sample.pool[b as usize];
        checked += 1;
        let f = oracle.distance(x, y)?;
        let same = a == b || x == y;
        let g = if a == b { f } else { oracle.distance(y, x)? };
        let w = |axiom, x: &Point, y: &Point, forward, backward| SemimetricViolation {
            axiom,
            x: x.clone(),
            y: y.clone(),
            forward,
            backward,
        };
        if f < 0.0 {
            record(w(SemimetricAxiom::NonNegativity, x, y, f, None), &mut witnesses);
        }
        if a != b && g < 0.0 {
            record(w(SemimetricAxiom::NonNegativity, y, x, g, None), &mut witnesses);
        }
        if same {
            if f != 0.0 {
                record(w(SemimetricAxiom::Identity, x, y, f, None), &mut witnesses);
            }
            continue;
        }
        if f == 0.0 {
            record(w(SemimetricAxiom::Identity, x, y, f, None), &mut witnesses);
        }
        if g == 0.0 {
            record(w(SemimetricAxiom::Identity, y, x, g, None), &mut witnesses);
        }
        if (f - g).abs() > SLACK_RTOL * (1.0 + f.abs().max(g.abs())) {
            let v = if f >= g {
                w(SemimetricAxiom::Symmetry, x, y, f, Some(g))
            } else {
                w(SemimetricAxiom::Symmetry, y, x, g, Some(f))
            };
            record(v, &mut witnesses);
        }
    }
    Ok(SemimetricReport {
        ok: violations == 0,
        pairs_checked: checked,
        violations,
        witnesses,
        exhaustive: sample.exhaustive,
    })
}
