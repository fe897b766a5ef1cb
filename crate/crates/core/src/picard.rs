//! Picard iteration and numerical certificates for Ćirić-type contractions.
//!
//! The fixed point theorem behind this module needs four things: the
//! contraction `Δ(Tx, Ty) ≤ θ(max{Δ(x, y), Δ(x, Tx), Δ(y, Ty)})` with
//! `θ ∈ Θ₁`, continuity of `T` or of `Δ`, bounded orbits, and completeness.
//! Each hypothesis that can be sampled gets a check here; each conclusion
//! (convergence of the orbit, uniqueness of the limit) gets a probe.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::comparison::{check_monotone, default_grid, ComparisonFn};
use crate::error::{Error, Result};
use crate::oracle::{Carrier, DistanceOracle};
use crate::point::Point;
use crate::sampling::{self, PairSample, SampleConfig};

/// A self-map `T: X → X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum SelfMap {
    /// `x ↦ scale·x + shift`, coordinatewise.
    Affine { scale: f64, shift: f64 },
    /// Every point to `(value, …, value)`.
    Constant { value: f64 },
    /// `x ↦ cos x`, coordinatewise.
    Cosine,
    /// `i ↦ images[i]` on a finite carrier.
    Table { images: Vec<usize> },
}

impl SelfMap {
    pub fn halving() -> Self {
        SelfMap::Affine { scale: 0.5, shift: 0.0 }
    }

    pub fn doubling() -> Self {
        SelfMap::Affine { scale: 2.0, shift: 0.0 }
    }

    pub fn identity() -> Self {
        SelfMap::Affine { scale: 1.0, shift: 0.0 }
    }

    pub fn name(&self) -> String {
        match self {
            SelfMap::Affine { scale, shift } if *shift == 0.0 && *scale == 0.5 => "halve".into(),
            SelfMap::Affine { scale, shift } if *shift == 0.0 && *scale == 2.0 => "double".into(),
            SelfMap::Affine { scale, shift } if *shift == 0.0 && *scale == 1.0 => "identity".into(),
            SelfMap::Affine { scale, shift } => format!("affine:{scale},{shift}"),
            SelfMap::Constant { value } => format!("constant:{value}"),
            SelfMap::Cosine => "cos".into(),
            SelfMap::Table { images } => format!(
                "table:{}",
                images.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }

    /// Parses `halve`, `double`, `identity`, `cos`, `affine:a,b`,
    /// `constant:c` or `table:i0,i1,…`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let nums = |a: Option<&str>| -> Result<Vec<f64>> {
            a.unwrap_or("")
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::param(format!("`{v}` is not a number in map `{spec}`")))
                })
                .collect()
        };
        let map = match (name, arg) {
            ("halve", None) => Self::halving(),
            ("double", None) => Self::doubling(),
            ("identity", None) => Self::identity(),
            ("cos", None) => SelfMap::Cosine,
            ("affine", Some(_)) => match nums(arg)?.as_slice() {
                [scale, shift] => SelfMap::Affine {
                    scale: *scale,
                    shift: *shift,
                },
                _ => return Err(Error::param("affine map needs `affine:scale,shift`")),
            },
            ("constant", Some(_)) => match nums(arg)?.as_slice() {
                [value] => SelfMap::Constant { value: *value },
                _ => return Err(Error::param("constant map needs `constant:value`")),
            },
            ("table", Some(a)) => SelfMap::Table {
                images: a
                    .split(',')
                    .map(|v| v.trim().parse().map_err(|_| Error::param(format!("`{v}` is not an index"))))
                    .collect::<Result<_>>()?,
            },
            _ => return Err(Error::param(format!("unknown map `{spec}`"))),
        };
        Ok(map)
    }

    fn image(&self, p: &Point) -> Option<Point> {
        match (self, p) {
            (SelfMap::Affine { scale, shift }, Point::Coords(c)) => {
                Some(Point::Coords(c.iter().map(|v| scale * v + shift).collect()))
            }
            (SelfMap::Constant { value }, Point::Coords(c)) => Some(Point::Coords(vec![*value; c.len()])),
            (SelfMap::Cosine, Point::Coords(c)) => Some(Point::Coords(c.iter().map(|v| v.cos()).collect())),
            (SelfMap::Table { images }, Point::Index(i)) => images.get(*i).map(|j| Point::Index(*j)),
            _ => None,
        }
    }

    /// `T(p)`, checked against the carrier. `iteration` is only used to
    /// annotate a domain escape.
    pub fn apply(&self, p: &Point, oracle: &DistanceOracle, iteration: usize) -> Result<Point> {
        if !oracle.contains(p) {
            return Err(Error::OutOfCarrier(p.clone()));
        }
        let image = self.image(p).ok_or_else(|| Error::OutOfCarrier(p.clone()))?;
        if !oracle.contains(&image) {
            return Err(Error::DomainEscape { iteration, point: image });
        }
        Ok(image)
    }

    /// Checks that the map matches the carrier kind (and is total on a
    /// finite carrier).
    pub fn validate_for(&self, oracle: &DistanceOracle) -> Result<()> {
        match (self, oracle.carrier()) {
            (SelfMap::Table { images }, Carrier::Finite(s)) => {
                if images.len() != s.len() || images.iter().any(|&j| j >= s.len()) {
                    return Err(Error::param(format!(
                        "table map must send each of the {} points into the carrier",
                        s.len()
                    )));
                }
                Ok(())
            }
            (SelfMap::Table { .. }, Carrier::Analytic { .. }) => {
                Err(Error::param("table maps need a finite carrier"))
            }
            (_, Carrier::Finite(_)) => Err(Error::param("coordinate maps need an analytic carrier")),
            _ => Ok(()),
        }
    }
}

/// Default number of leading orbit points used for the pairwise bound.
pub const ORBIT_WINDOW: usize = 1024;

/// A recorded Picard orbit `x, Tx, …, Tᴺx`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub base: Point,
    pub points: Vec<Point>,
    /// `step_distances[n] = Δ(points[n+1], points[n])`.
    pub step_distances: Vec<f64>,
    /// Max pairwise distance over the first `window` points.
    pub bound_m: f64,
    pub window: usize,
    pub truncated: bool,
}

impl OrbitTrace {
    fn new(points: Vec<Point>, step_distances: Vec<f64>, oracle: &DistanceOracle) -> Result<Self> {
        let window = points.len().min(ORBIT_WINDOW);
        let bound_m = max_pairwise(&points[..window], oracle)?;
        Ok(OrbitTrace {
            base: points[0].clone(),
            truncated: window < points.len(),
            points,
            step_distances,
            bound_m,
            window,
        })
    }

    /// Columnar text: `iteration point step_distance`, tab separated, with
    /// 17 significant digits. The last row has no step distance.
    pub fn to_columns(&self) -> String {
        let mut out = String::from("iteration\tpoint\tstep_distance\n");
        for (n, p) in self.points.iter().enumerate() {
            let point = match p {
                Point::Index(i) => i.to_string(),
                Point::Coords(c) => c.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(","),
            };
            let step = self
                .step_distances
                .get(n)
                .map(|d| format!("{d:.16e}"))
                .unwrap_or_default();
            let _ = writeln!(out, "{n}\t{point}\t{step}");
        }
        out
    }
}

fn max_pairwise(points: &[Point], oracle: &DistanceOracle) -> Result<f64> {
    let mut m = 0.0f64;
    for (j, y) in points.iter().enumerate() {
        for x in &points[..j] {
            m = m.max(oracle.distance(x, y)?);
        }
    }
    Ok(m)
}

/// Records `x0, Tx0, …, Tⁿx0` and the consecutive distances.
pub fn run_orbit(map: &SelfMap, x0: &Point, oracle: &DistanceOracle, n: usize) -> Result<OrbitTrace> {
    map.validate_for(oracle)?;
    if !oracle.contains(x0) {
        return Err(Error::OutOfCarrier(x0.clone()));
    }
    let mut points = Vec::with_capacity(n + 1);
    let mut steps = Vec::with_capacity(n);
    points.push(x0.clone());
    for k in 0..n {
        let next = map.apply(&points[k], oracle, k + 1)?;
        steps.push(oracle.distance(&next, &points[k])?);
        points.push(next);
    }
    OrbitTrace::new(points, steps, oracle)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitBound {
    /// Max pairwise distance over the window.
    pub m: f64,
    pub window: usize,
    /// `(prefix length, bound)` at doubling prefix lengths.
    pub prefix_bounds: Vec<(usize, f64)>,
    /// The bound still grows by 1.5x or more across the last doubling.
    pub growing: bool,
}

/// Evidence for bounded orbits: the diameter of the first `window` points
/// and how it evolves over doubling prefixes.
pub fn check_orbit_bounded(trace: &OrbitTrace, oracle: &DistanceOracle, window: usize) -> Result<OrbitBound> {
    if trace.points.is_empty() {
        return Err(Error::param("empty orbit"));
    }
    let window = window.clamp(1, trace.points.len());
    let pts = &trace.points[..window];
    let mut m = 0.0f64;
    let mut prefix_bounds = Vec::new();
    let mut next_mark = 4usize;
    for (j, y) in pts.iter().enumerate() {
        for x in &pts[..j] {
            m = m.max(oracle.distance(x, y)?);
        }
        if j + 1 == next_mark || j + 1 == window {
            prefix_bounds.push((j + 1, m));
            if j + 1 == next_mark {
                next_mark *= 2;
            }
        }
    }
    prefix_bounds.dedup_by_key(|(len, _)| *len);
    let growing = match prefix_bounds.as_slice() {
        [.., (_, prev), (_, last)] => *last > 0.0 && *last >= 1.5 * prev,
        _ => false,
    };
    Ok(OrbitBound {
        m,
        window,
        prefix_bounds,
        growing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Stop once `Δ(Tⁿ⁺¹x, Tⁿx) < tol` …
    pub tol: f64,
    /// … and `Δ(z, Tz) ≤ residual_tol` at `z = Tⁿ⁺¹x`.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Step distances above this count as divergence.
    pub divergence: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol: 1e-10,
            residual_tol: 1e-9,
            max_iter: 10_000,
            divergence: 1e12,
        }
    }
}

impl SolveConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.residual_tol > 0.0 && self.divergence > 0.0) || self.max_iter == 0 {
            return Err(Error::param("tolerances and the iteration cap must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub start: Point,
    pub fixed_point: Point,
    /// Index `n` of the step that met the tolerance (or the last step taken).
    pub iterations: usize,
    /// Final `Δ(Tⁿ⁺¹x, Tⁿx)`.
    pub last_step: f64,
    /// `Δ(z, Tz)`; absent when `T` left the carrier.
    pub residual: Option<f64>,
    pub status: SolveStatus,
    /// Iteration at which `T` left the carrier.
    pub escaped_at: Option<usize>,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

/// Iterates `T` from `x0` until consecutive points are within `tol` and the
/// residual `Δ(z, Tz)` is within `residual_tol`.
pub fn solve_fixed_point(map: &SelfMap, x0: &Point, oracle: &DistanceOracle, cfg: &SolveConfig) -> Result<SolveResult> {
    solve_inner(map, x0, oracle, cfg, None)
}

/// Like [`solve_fixed_point`], also returning the visited orbit.
pub fn solve_fixed_point_traced(
    map: &SelfMap,
    x0: &Point,
    oracle: &DistanceOracle,
    cfg: &SolveConfig,
) -> Result<(SolveResult, OrbitTrace)> {
    let mut rec = (vec![x0.clone()], Vec::new());
    let result = solve_inner(map, x0, oracle, cfg, Some(&mut rec))?;
    let trace = OrbitTrace::new(rec.0, rec.1, oracle)?;
    Ok((result, trace))
}

type Recorder<'a> = Option<&'a mut (Vec<Point>, Vec<f64>)>;

fn solve_inner(
    map: &SelfMap,
    x0: &Point,
    oracle: &DistanceOracle,
    cfg: &SolveConfig,
    mut rec: Recorder<'_>,
) -> Result<SolveResult> {
    cfg.validate()?;
    map.validate_for(oracle)?;
    if !oracle.contains(x0) {
        return Err(Error::OutOfCarrier(x0.clone()));
    }
    let escaped = |x: Point, n: usize, last_step: f64, at: usize| SolveResult {
        start: x0.clone(),
        fixed_point: x,
        iterations: n,
        last_step,
        residual: None,
        status: SolveStatus::Diverged,
        escaped_at: Some(at),
    };
    let mut x = x0.clone();
    let mut last_step = f64::NAN;
    for n in 0..cfg.max_iter {
        let y = match map.apply(&x, oracle, n + 1) {
            Ok(y) => y,
            Err(Error::DomainEscape { iteration, .. }) => return Ok(escaped(x, n, last_step, iteration)),
            Err(e) => return Err(e),
        };
        let d = oracle.distance(&y, &x)?;
        if let Some((pts, steps)) = rec.as_deref_mut() {
            pts.push(y.clone());
            steps.push(d);
        }
        last_step = d;
        if d > cfg.divergence {
            return Ok(SolveResult {
                start: x0.clone(),
                fixed_point: y,
                iterations: n,
                last_step: d,
                residual: None,
                status: SolveStatus::Diverged,
                escaped_at: None,
            });
        }
        if d < cfg.tol {
            let ty = match map.apply(&y, oracle, n + 2) {
                Ok(t) => t,
                Err(Error::DomainEscape { iteration, .. }) => return Ok(escaped(y, n, d, iteration)),
                Err(e) => return Err(e),
            };
            let residual = oracle.distance(&y, &ty)?;
            if residual <= cfg.residual_tol {
                return Ok(SolveResult {
                    start: x0.clone(),
                    fixed_point: y,
                    iterations: n,
                    last_step: d,
                    residual: Some(residual),
                    status: SolveStatus::Converged,
                    escaped_at: None,
                });
            }
        }
        x = y;
    }
    let residual = match map.apply(&x, oracle, cfg.max_iter + 1) {
        Ok(tx) => Some(oracle.distance(&x, &tx)?),
        Err(Error::DomainEscape { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(SolveResult {
        start: x0.clone(),
        fixed_point: x,
        iterations: cfg.max_iter,
        last_step,
        residual,
        status: SolveStatus::MaxIter,
        escaped_at: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionKind {
    /// `Δ(Tx, Ty) ≤ θ(Δ(x, y))`
    Plain,
    /// `Δ(Tx, Ty) ≤ θ(max{Δ(x, y), Δ(x, Tx), Δ(y, Ty)})`
    Ciric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    NoViolation,
    Violated,
}

/// Relative tolerance for contraction slacks.
pub const CONTRACTION_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub kind: ContractionKind,
    pub theta: String,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Smallest slack `θ(M(x, y)) − Δ(Tx, Ty)` over the sample.
    pub min_slack: f64,
    /// Pair with the smallest slack relative to `1 + θ(M(x, y))`.
    pub worst_pair: Option<(Point, Point)>,
    pub worst_slack: f64,
    pub worst_relative_slack: f64,
    pub verdict: CertificateVerdict,
}

impl ContractionCertificate {
    pub fn ok(&self) -> bool {
        self.verdict == CertificateVerdict::NoViolation
    }
}

/// Uniform pairs from the carrier plus all pairs `(Tⁱx0, Tʲx0)`, `i < j`, of
/// an orbit of length `orbit_len` from `orbit_start`.
pub fn certificate_pairs(
    map: &SelfMap,
    oracle: &DistanceOracle,
    cfg: &SampleConfig,
    orbit_start: Option<&Point>,
    orbit_len: usize,
) -> Result<PairSample> {
    let mut sample = sampling::sample_pairs(oracle, cfg)?;
    if let Some(x0) = orbit_start {
        let mut orbit = vec![x0.clone()];
        for k in 0..orbit_len {
            match map.apply(&orbit[k], oracle, k + 1) {
                Ok(p) => orbit.push(p),
                Err(Error::DomainEscape { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        let base = sample.pool.len() as u32;
        let m = orbit.len() as u32;
        sample.pool.extend(orbit);
        for i in 0..m {
            for j in i + 1..m {
                sample.pairs.push([base + i, base + j]);
            }
        }
    }
    Ok(sample)
}

fn certify(
    kind: ContractionKind,
    map: &SelfMap,
    oracle: &DistanceOracle,
    theta: &ComparisonFn,
    pairs: &PairSample,
) -> Result<ContractionCertificate> {
    map.validate_for(oracle)?;
    if let Some(w) = check_monotone(theta, &default_grid())? {
        return Err(Error::param(format!(
            "θ = {} is not nondecreasing: θ({}) = {} > θ({}) = {}",
            theta.name(),
            w.t1,
            w.value1,
            w.t2,
            w.value2
        )));
    }
    let mut violations = 0usize;
    let mut min_slack = f64::INFINITY;
    let mut worst: Option<(f64, f64, usize)> = None;
    for (k, (x, y)) in pairs.point_pairs().enumerate() {
        let eval = || -> Result<(f64, f64)> {
            let tx = map.apply(x, oracle, 1)?;
            let ty = map.apply(y, oracle, 1)?;
            let lhs = oracle.distance(&tx, &ty)?;
            let dxy = oracle.distance(x, y)?;
            let m = match kind {
                ContractionKind::Plain => dxy,
                ContractionKind::Ciric => dxy.max(oracle.distance(x, &tx)?).max(oracle.distance(y, &ty)?),
            };
            Ok((theta.eval(m), lhs))
        };
        let (bound, lhs) = eval().map_err(|e| Error::AtPair {
            x: x.clone(),
            y: y.clone(),
            source: Box::new(e),
        })?;
        let slack = bound - lhs;
        let rel = slack / (1.0 + bound.abs());
        if rel < -CONTRACTION_RTOL {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
        if worst.is_none_or(|(r, _, _)| rel < r) {
            worst = Some((rel, slack, k));
        }
    }
    let (worst_relative_slack, worst_slack, worst_pair) = match worst {
        Some((rel, slack, k)) => {
            let [a, b] = pairs.pairs[k];
            (
                rel,
                slack,
                Some((pairs.pool[a as usize].clone(), pairs.pool[b as usize].clone())),
            )
        }
        None => (f64::INFINITY, f64::INFINITY, None),
    };
    Ok(ContractionCertificate {
        kind,
        theta: theta.name(),
        pairs_checked: pairs.pairs.len(),
        violations,
        min_slack,
        worst_pair,
        worst_slack,
        worst_relative_slack,
        verdict: if violations == 0 {
            CertificateVerdict::NoViolation
        } else {
            CertificateVerdict::Violated
        },
    })
}

pub fn check_ciric_contraction(
    map: &SelfMap,
    oracle: &DistanceOracle,
    theta: &ComparisonFn,
    pairs: &PairSample,
) -> Result<ContractionCertificate> {
    certify(ContractionKind::Ciric, map, oracle, theta, pairs)
}

pub fn check_plain_contraction(
    map: &SelfMap,
    oracle: &DistanceOracle,
    theta: &ComparisonFn,
    pairs: &PairSample,
) -> Result<ContractionCertificate> {
    certify(ContractionKind::Plain, map, oracle, theta, pairs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub results: Vec<SolveResult>,
    pub all_converged: bool,
    /// Largest `Δ` between two computed fixed points.
    pub max_separation: f64,
    /// Representatives of the fixed points after merging within `merge_tol`.
    pub distinct: Vec<Point>,
    pub merge_tol: f64,
    pub ok: bool,
}

/// Solves from every start and checks that all limits coincide.
pub fn uniqueness_probe(
    map: &SelfMap,
    oracle: &DistanceOracle,
    starts: &[Point],
    cfg: &SolveConfig,
    merge_tol: f64,
) -> Result<UniquenessReport> {
    if starts.len() < 2 {
        return Err(Error::param("uniqueness probe needs at least two starts"));
    }
    let results = starts
        .iter()
        .map(|x0| solve_fixed_point(map, x0, oracle, cfg))
        .collect::<Result<Vec<_>>>()?;
    let all_converged = results.iter().all(SolveResult::converged);
    let limits: Vec<&Point> = results.iter().filter(|r| r.converged()).map(|r| &r.fixed_point).collect();
    let mut max_separation = 0.0f64;
    let mut distinct: Vec<Point> = Vec::new();
    for (j, z) in limits.iter().enumerate() {
        for w in &limits[..j] {
            max_separation = max_separation.max(oracle.distance(w, z)?);
        }
        let mut merged = false;
        for d in &distinct {
            if oracle.distance(d, z)? <= merge_tol {
                merged = true;
                break;
            }
        }
        if !merged {
            distinct.push((*z).clone());
        }
    }
    Ok(UniquenessReport {
        ok: all_converged && max_separation <= merge_tol,
        results,
        all_converged,
        max_separation,
        distinct,
        merge_tol,
    })
}

/// `dₙ = max_{m ∈ [n, n+w]} Δ(Tⁿx, Tᵐx)` along a recorded orbit.
pub fn cauchy_diagnostic(trace: &OrbitTrace, oracle: &DistanceOracle, w: usize) -> Result<Vec<f64>> {
    let len = trace.points.len();
    if len <= w {
        return Err(Error::param(format!("orbit of {len} points is too short for window {w}")));
    }
    (0..len - w)
        .map(|n| {
            let xn = &trace.points[n];
            trace.points[n..=n + w]
                .iter()
                .try_fold(0.0f64, |acc, xm| Ok(acc.max(oracle.distance(xn, xm)?)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityProbe {
    pub target: Point,
    /// `(Δ(xₖ, x), gap)` along `xₖ = x + 2⁻ᵏ·direction`.
    pub samples: Vec<(f64, f64)>,
    /// The approach distances vanish while the gap stays away from zero.
    pub refuted: bool,
}

fn approach(target: &[f64], direction: &[f64], k: usize) -> Point {
    let h = 0.5f64.powi(k as i32);
    Point::Coords(target.iter().zip(direction).map(|(t, d)| t + h * d).collect())
}

fn continuity_probe(
    oracle: &DistanceOracle,
    target: &Point,
    direction: &[f64],
    steps: usize,
    gap: impl Fn(&Point) -> Result<f64>,
) -> Result<ContinuityProbe> {
    let coords = target
        .coords()
        .ok_or_else(|| Error::param("continuity probes need an analytic carrier"))?;
    if direction.len() != coords.len() {
        return Err(Error::param("direction has the wrong dimension"));
    }
    let mut samples = Vec::with_capacity(steps);
    for k in 0..steps {
        let xk = approach(coords, direction, k);
        if !oracle.contains(&xk) {
            continue;
        }
        samples.push((oracle.distance(&xk, target)?, gap(&xk)?));
    }
    let refuted = match samples.last() {
        Some(&(d, g)) => d < 1e-9 && g > 1e-6,
        None => false,
    };
    Ok(ContinuityProbe {
        target: target.clone(),
        samples,
        refuted,
    })
}

/// Probes `Δ(a, xₖ) → Δ(a, x)` along a sequence with `Δ(xₖ, x) → 0`.
pub fn probe_separate_continuity(
    oracle: &DistanceOracle,
    anchor: &Point,
    target: &Point,
    direction: &[f64],
    steps: usize,
) -> Result<ContinuityProbe> {
    let base = oracle.distance(anchor, target)?;
    continuity_probe(oracle, target, direction, steps, |xk| {
        Ok((oracle.distance(anchor, xk)? - base).abs() / (1.0 + base))
    })
}

/// Probes `Δ(Txₖ, Tx) → 0` along a sequence with `Δ(xₖ, x) → 0`.
pub fn probe_map_continuity(
    map: &SelfMap,
    oracle: &DistanceOracle,
    target: &Point,
    direction: &[f64],
    steps: usize,
) -> Result<ContinuityProbe> {
    let tx = map.apply(target, oracle, 1)?;
    continuity_probe(oracle, target, direction, steps, |xk| {
        oracle.distance(&map.apply(xk, oracle, 1)?, &tx)
    })
}
