//! Counterexample search for a claimed class membership.
//!
//! A structured pass tries midpoint triples along the box diagonal and all
//! triples of stress points (box corners, origin, quarter points), where
//! ratio blow-ups tend to live. A seeded random pass follows.

use serde::{Deserialize, Serialize};

use crate::axioms::{check_semimetric, verify_on, Axiom, SemimetricAxiom, SemimetricViolation, TripleWitness};
use crate::error::{Error, Result};
use crate::oracle::{Carrier, DistanceOracle};
use crate::point::Point;
use crate::sampling::{self, evaluate_triples, SampleConfig, TripleSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Claim {
    Axiom { axiom: Axiom },
    Symmetry,
}

impl Claim {
    /// Parses `b_metric:s`, `strong_b:s`, `supra:s,c`, `strong_supra:s,c`,
    /// `interpolative:alpha,c`, `metric` or `symmetry`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
        let nums: Vec<f64> = if arg.is_empty() {
            Vec::new()
        } else {
            arg.split(',')
                .map(|v| {
                    v.trim()
                        .parse()
                        .map_err(|_| Error::param(format!("`{v}` is not a number in claim `{spec}`")))
                })
                .collect::<Result<_>>()?
        };
        let axiom = match (name, nums.as_slice()) {
            ("symmetry", []) => return Ok(Claim::Symmetry),
            ("metric", []) => Axiom::Metric,
            ("b_metric", [s]) => Axiom::BMetric { s: *s },
            ("strong_b", [s]) => Axiom::StrongB { s: *s },
            ("supra", [s, c]) => Axiom::Supra { s: *s, c: *c },
            ("strong_supra", [s, c]) => Axiom::StrongSupra { s: *s, c: *c },
            ("interpolative", [alpha, c]) => Axiom::Interpolative { alpha: *alpha, c: *c },
            _ => return Err(Error::param(format!("cannot parse claim `{spec}`"))),
        };
        axiom.validate()?;
        Ok(Claim::Axiom { axiom })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalsifyConfig {
    pub sample: SampleConfig,
    /// Diagonal grid size for the structured pass.
    pub grid: usize,
}

impl Default for FalsifyConfig {
    fn default() -> Self {
        FalsifyConfig {
            sample: SampleConfig::default(),
            grid: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Structured,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Triple { witness: TripleWitness, triangle_ratio: f64 },
    Pair { violation: SemimetricViolation },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub claim: Claim,
    pub witness: Option<Witness>,
    pub phase: Option<Phase>,
    pub checked: usize,
}

impl FalsifyReport {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

fn midpoint(x: &Point, y: &Point) -> Option<Point> {
    let (a, b) = (x.coords()?, y.coords()?);
    Some(Point::Coords(a.iter().zip(b).map(|(u, v)| 0.5 * (u + v)).collect()))
}

/// Midpoint triples over the diagonal grid plus all stress-point triples.
pub fn structured_triples(oracle: &DistanceOracle, grid: usize) -> Option<TripleSample> {
    let Carrier::Analytic { domain, .. } = oracle.carrier() else {
        return None;
    };
    let mut pool = sampling::stress_points(domain);
    let k = pool.len() as u32;
    let mut triples = Vec::new();
    for x in 0..k {
        for z in 0..k {
            for y in 0..k {
                triples.push([x, z, y]);
            }
        }
    }
    let g = sampling::diagonal_grid(domain, grid);
    for (i, x) in g.iter().enumerate() {
        for y in &g[i + 1..] {
            let base = pool.len() as u32;
            pool.push(x.clone());
            pool.push(midpoint(x, y).expect("analytic points"));
            pool.push(y.clone());
            triples.push([base, base + 1, base + 2]);
        }
    }
    Some(TripleSample {
        pool,
        triples,
        exhaustive: false,
    })
}

pub fn falsify(oracle: &DistanceOracle, claim: &Claim, cfg: &FalsifyConfig) -> Result<FalsifyReport> {
    match claim {
        Claim::Symmetry => {
            let r = check_semimetric(oracle, &cfg.sample)?;
            let w = r.witnesses.into_iter().find(|w| w.axiom == SemimetricAxiom::Symmetry);
            Ok(FalsifyReport {
                claim: *claim,
                phase: w.as_ref().map(|_| if r.exhaustive { Phase::Structured } else { Phase::Random }),
                witness: w.map(|violation| Witness::Pair { violation }),
                checked: r.pairs_checked,
            })
        }
        Claim::Axiom { axiom } => {
            axiom.validate()?;
            let mut checked = 0;
            let phases = [
                (Phase::Structured, structured_triples(oracle, cfg.grid)),
                (Phase::Random, Some(sampling::sample_triples(oracle, &cfg.sample)?)),
            ];
            for (phase, sample) in phases {
                let Some(sample) = sample else { continue };
                let t = evaluate_triples(oracle, sample)?;
                let check = verify_on(&t, *axiom)?;
                checked += check.triples_checked;
                if !check.ok {
                    let witness = check.worst.expect("a violation has a witness");
                    return Ok(FalsifyReport {
                        claim: *claim,
                        witness: Some(Witness::Triple {
                            triangle_ratio: witness.triangle_ratio(),
                            witness,
                        }),
                        phase: Some(phase),
                        checked,
                    });
                }
            }
            Ok(FalsifyReport {
                claim: *claim,
                witness: None,
                phase: None,
                checked,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::load_gallery;

    fn cfg() -> FalsifyConfig {
        FalsifyConfig {
            sample: SampleConfig::with_seed(0).samples(2000),
            grid: 64,
        }
    }

    #[test]
    fn exp_abs_is_not_a_b_metric() {
        let o = load_gallery("exp_abs").unwrap().oracle;
        let r = falsify(&o, &Claim::parse("b_metric:100").unwrap(), &cfg()).unwrap();
        let Some(Witness::Triple { triangle_ratio, .. }) = r.witness else {
            panic!("no witness")
        };
        assert!(triangle_ratio > 100.0);
        assert_eq!(r.phase, Some(Phase::Structured));
        let r = falsify(&o, &Claim::parse("b_metric:1000").unwrap(), &cfg()).unwrap();
        assert!(r.found());
    }

    #[test]
    fn true_claims_survive() {
        let o = load_gallery("euclidean_line").unwrap().oracle;
        assert!(!falsify(&o, &Claim::parse("b_metric:1").unwrap(), &cfg()).unwrap().found());
        let o = load_gallery("exp_abs").unwrap().oracle;
        assert!(!falsify(&o, &Claim::parse("supra:1,1").unwrap(), &cfg()).unwrap().found());
        assert!(!falsify(&o, &Claim::Symmetry, &cfg()).unwrap().found());
    }

    #[test]
    fn exp_signed_symmetry() {
        let o = load_gallery("exp_signed").unwrap().oracle;
        let r = falsify(&o, &Claim::Symmetry, &cfg()).unwrap();
        let Some(Witness::Pair { violation }) = r.witness else {
            panic!("no witness")
        };
        assert_eq!((violation.x, violation.y), (Point::scalar(1.0), Point::scalar(0.0)));
    }

    #[test]
    fn parse_claims() {
        assert_eq!(
            Claim::parse("supra:1,2").unwrap(),
            Claim::Axiom {
                axiom: Axiom::Supra { s: 1.0, c: 2.0 }
            }
        );
        assert!(Claim::parse("b_metric:0.5").is_err());
        assert!(Claim::parse("b_metric").is_err());
        assert!(Claim::parse("interpolative:1.5,1").is_err());
        assert!(Claim::parse("bogus:1").is_err());
    }
}
