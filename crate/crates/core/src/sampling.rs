//! Deterministic point, pair and triple sampling.
//!
//! Finite carriers are enumerated exhaustively up to a size cap; beyond it,
//! and on analytic carriers, points are drawn uniformly from a seeded
//! ChaCha stream. Analytic samples always start with a fixed list of stress
//! points (origin, unit points, box corners, center, quarter points).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{Carrier, DistanceOracle};
use crate::point::{DomainBox, Point};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 64;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    /// Number of random triples (or pairs) drawn when not enumerating.
    pub samples: usize,
    /// Finite spaces with at most this many points are enumerated exhaustively.
    pub exhaustive_cap: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            samples: DEFAULT_SAMPLES,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

impl SampleConfig {
    pub fn with_seed(seed: u64) -> Self {
        SampleConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::param("sample count must be at least 1"));
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_point<R: Rng>(rng: &mut R, domain: &DomainBox) -> Point {
    Point::Coords((0..domain.dim).map(|_| rng.random_range(domain.lo..=domain.hi)).collect())
}

/// Deterministic stress points of an analytic box, in a fixed order.
pub fn stress_points(domain: &DomainBox) -> Vec<Point> {
    let d = domain.dim;
    let mut out: Vec<Vec<f64>> = Vec::new();
    let push = |v: Vec<f64>, out: &mut Vec<Vec<f64>>| {
        if domain.contains(&v) && !out.contains(&v) {
            out.push(v);
        }
    };
    push(vec![0.0; d], &mut out);
    for k in 0..d.min(4) {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        push(e.clone(), &mut out);
        e[k] = -1.0;
        push(e, &mut out);
    }
    if d <= 4 {
        for mask in 0..(1usize << d) {
            let corner = (0..d)
                .map(|k| if mask >> k & 1 == 1 { domain.hi } else { domain.lo })
                .collect();
            push(corner, &mut out);
        }
    }
    let c = domain.center();
    let q = 0.25 * domain.width();
    push(vec![c; d], &mut out);
    push(vec![domain.lo + q; d], &mut out);
    push(vec![domain.hi - q; d], &mut out);
    out.into_iter().map(Point::Coords).collect()
}

/// Points `g₀ < … < g_{k−1}` spread evenly along the box diagonal.
pub fn diagonal_grid(domain: &DomainBox, k: usize) -> Vec<Point> {
    let k = k.max(2);
    (0..k)
        .map(|i| {
            let t = domain.lo + domain.width() * (i as f64) / ((k - 1) as f64);
            Point::Coords(vec![t; domain.dim])
        })
        .collect()
}

/// Ordered triples `(x, z, y)` stored as indices into a point pool.
#[derive(Debug, Clone)]
pub struct TripleSample {
    pub pool: Vec<Point>,
    pub triples: Vec<[u32; 3]>,
    /// True iff every ordered triple of a finite carrier is present.
    pub exhaustive: bool,
}

/// Ordered pairs `(x, y)` stored as indices into a point pool.
#[derive(Debug, Clone)]
pub struct PairSample {
    pub pool: Vec<Point>,
    pub pairs: Vec<[u32; 2]>,
    pub exhaustive: bool,
}

impl PairSample {
    pub fn point_pairs(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.pairs
            .iter()
            .map(|[a, b]| (&self.pool[*a as usize], &self.pool[*b as usize]))
    }

    /// Builds a sample from explicit pairs.
    pub fn from_pairs(pairs: Vec<(Point, Point)>) -> Self {
        let mut pool = Vec::with_capacity(2 * pairs.len());
        let mut idx = Vec::with_capacity(pairs.len());
        for (x, y) in pairs {
            let i = pool.len() as u32;
            pool.push(x);
            pool.push(y);
            idx.push([i, i + 1]);
        }
        PairSample {
            pool,
            pairs: idx,
            exhaustive: false,
        }
    }
}

fn index_pool(n: usize) -> Vec<Point> {
    (0..n).map(Point::Index).collect()
}

pub fn sample_triples(oracle: &DistanceOracle, cfg: &SampleConfig) -> Result<TripleSample> {
    cfg.validate()?;
    let mut rng = rng(cfg.seed);
    match oracle.carrier() {
        Carrier::Finite(space) => {
            let n = space.len();
            if n <= cfg.exhaustive_cap {
                let mut triples = Vec::with_capacity(n * n * n);
                for x in 0..n as u32 {
                    for z in 0..n as u32 {
                        for y in 0..n as u32 {
                            triples.push([x, z, y]);
                        }
                    }
                }
                Ok(TripleSample {
                    pool: index_pool(n),
                    triples,
                    exhaustive: true,
                })
            } else {
                let triples = (0..cfg.samples)
                    .map(|_| {
                        [
                            rng.random_range(0..n) as u32,
                            rng.random_range(0..n) as u32,
                            rng.random_range(0..n) as u32,
                        ]
                    })
                    .collect();
                Ok(TripleSample {
                    pool: index_pool(n),
                    triples,
                    exhaustive: false,
                })
            }
        }
        Carrier::Analytic { domain, .. } => {
            let mut pool = stress_points(domain);
            let k = pool.len() as u32;
            let mut triples = Vec::with_capacity((k * k * k) as usize + cfg.samples);
            for x in 0..k {
                for z in 0..k {
                    for y in 0..k {
                        triples.push([x, z, y]);
                    }
                }
            }
            for _ in 0..cfg.samples {
                let base = pool.len() as u32;
                for _ in 0..3 {
                    pool.push(uniform_point(&mut rng, domain));
                }
                triples.push([base, base + 1, base + 2]);
            }
            Ok(TripleSample {
                pool,
                triples,
                exhaustive: false,
            })
        }
    }
}

pub fn sample_pairs(oracle: &DistanceOracle, cfg: &SampleConfig) -> Result<PairSample> {
    cfg.validate()?;
    let mut rng = rng(cfg.seed);
    match oracle.carrier() {
        Carrier::Finite(space) => {
            let n = space.len();
            if n <= cfg.exhaustive_cap * cfg.exhaustive_cap {
                let mut pairs = Vec::with_capacity(n * n);
                for x in 0..n as u32 {
                    for y in 0..n as u32 {
                        pairs.push([x, y]);
                    }
                }
                Ok(PairSample {
                    pool: index_pool(n),
                    pairs,
                    exhaustive: true,
                })
            } else {
                let mut pairs: Vec<[u32; 2]> = (0..n as u32).map(|i| [i, i]).collect();
                pairs.extend((0..cfg.samples).map(|_| [rng.random_range(0..n) as u32, rng.random_range(0..n) as u32]));
                Ok(PairSample {
                    pool: index_pool(n),
                    pairs,
                    exhaustive: false,
                })
            }
        }
        Carrier::Analytic { domain, .. } => {
            let mut pool = stress_points(domain);
            let k = pool.len() as u32;
            let mut pairs = Vec::with_capacity((k * k) as usize + 2 * cfg.samples);
            for x in 0..k {
                for y in 0..k {
                    pairs.push([x, y]);
                }
            }
            for _ in 0..cfg.samples {
                let base = pool.len() as u32;
                pool.push(uniform_point(&mut rng, domain));
                pool.push(uniform_point(&mut rng, domain));
                pairs.push([base, base + 1]);
                pairs.push([base, base]);
            }
            Ok(PairSample {
                pool,
                pairs,
                exhaustive: false,
            })
        }
    }
}

/// One evaluated triple: `lhs = Δ(x, y)`, `leg_a = Δ(x, z)`, `leg_b = Δ(z, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleEval {
    pub idx: [u32; 3],
    pub lhs: f64,
    pub leg_a: f64,
    pub leg_b: f64,
}

/// Triple sample with all three distances evaluated once.
#[derive(Debug, Clone)]
pub struct EvaluatedTriples {
    pub pool: Vec<Point>,
    pub evals: Vec<TripleEval>,
    pub exhaustive: bool,
}

impl EvaluatedTriples {
    pub fn point(&self, i: u32) -> &Point {
        &self.pool[i as usize]
    }

    pub fn len(&self) -> usize {
        self.evals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evals.is_empty()
    }
}

pub fn evaluate_triples(oracle: &DistanceOracle, sample: TripleSample) -> Result<EvaluatedTriples> {
    let TripleSample {
        pool,
        triples,
        exhaustive,
    } = sample;
    let mut evals = Vec::with_capacity(triples.len());
    // Finite carriers: read the matrix directly.
    if let Carrier::Finite(space) = oracle.carrier() {
        for t in &triples {
            let [x, z, y] = t.map(|v| v as usize);
            evals.push(TripleEval {
                idx: *t,
                lhs: space.get(x, y),
                leg_a: space.get(x, z),
                leg_b: space.get(z, y),
            });
        }
    } else {
        for t in &triples {
            let [x, z, y] = t.map(|v| &pool[v as usize]);
            evals.push(TripleEval {
                idx: *t,
                lhs: oracle.distance(x, y)?,
                leg_a: oracle.distance(x, z)?,
                leg_b: oracle.distance(z, y)?,
            });
        }
    }
    Ok(EvaluatedTriples {
        pool,
        evals,
        exhaustive,
    })
}

/// Samples and evaluates triples in one step.
pub fn triples(oracle: &DistanceOracle, cfg: &SampleConfig) -> Result<EvaluatedTriples> {
    evaluate_triples(oracle, sample_triples(oracle, cfg)?)
}
