//! Comparison functions `θ` and numerical membership tests for the
//! Matkowski classes.
//!
//! `Θ₁` asks for `θⁿ(t) → 0` and `Θ₂` for `Σ θⁿ(t) < ∞`, both for every
//! `t > 0`. Neither is decidable from finitely many evaluations, so each
//! test returns one of three verdicts:
//!
//! * `holds`: on every probe the iterates (or partial sums) settled within
//!   the iteration cap;
//! * `fails`: some probe produced concrete evidence against the class, such
//!   as iterates that stop decreasing, a stall at a positive limit, a
//!   partial sum past the budget, or a Bertrand statistic below one;
//! * `inconclusive`: neither happened within the cap.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-linear `θ` through `(tᵢ, θᵢ)`, constant beyond the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFn {
    ts: Vec<f64>,
    values: Vec<f64>,
}

impl TableFn {
    pub fn new(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ts.is_empty() || ts.len() != values.len() {
            return Err(Error::param("table needs matching, nonempty t and value columns"));
        }
        if ts.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::param("table entries must be finite"));
        }
        if ts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("table t column must be strictly increasing"));
        }
        if ts[0] < 0.0 || values.iter().any(|v| *v < 0.0) {
            return Err(Error::param("table must map nonnegative t to nonnegative values"));
        }
        Ok(TableFn { ts, values })
    }

    /// Parses a two-column text file `t θ(t)`; blank lines and `#` comments
    /// are ignored, columns may be separated by whitespace or commas.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ts = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let [t, v] = cols.as_slice() else {
                return Err(Error::param(format!("line {}: expected two columns", lineno + 1)));
            };
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::param(format!("line {}: `{s}` is not a number", lineno + 1)))
            };
            ts.push(num(t)?);
            values.push(num(v)?);
        }
        Self::new(ts, values)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn grid(&self) -> &[f64] {
        &self.ts
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = self.ts.partition_point(|&x| x <= t);
        if k == 0 {
            return self.values[0];
        }
        if k == self.ts.len() {
            return self.values[k - 1];
        }
        let (t0, t1) = (self.ts[k - 1], self.ts[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ComparisonFn {
    /// `k·t`
    Linear { k: f64 },
    /// `t/(1 + t)`
    RationalDecay,
    /// `√(1 + t) − 1`
    SqrtShift,
    /// `tᵖ`
    Power { p: f64 },
    Table(TableFn),
    /// Applies `parts` left to right.
    Composition { parts: Vec<ComparisonFn> },
}

impl ComparisonFn {
    pub fn linear(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::param(format!("linear slope must be a nonnegative number, got {k}")));
        }
        Ok(ComparisonFn::Linear { k })
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::param(format!("power exponent must be positive, got {p}")));
        }
        Ok(ComparisonFn::Power { p })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ComparisonFn::Linear { k } => k * t,
            ComparisonFn::RationalDecay => t / (1.0 + t),
            // Rationalized form: no cancellation for small t.
            ComparisonFn::SqrtShift => t / ((1.0 + t).sqrt() + 1.0),
            ComparisonFn::Power { p } => {
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(*p)
                }
            }
            ComparisonFn::Table(table) => table.eval(t),
            ComparisonFn::Composition { parts } => parts.iter().fold(t, |acc, f| f.eval(acc)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ComparisonFn::Linear { k } => format!("linear:{k}"),
            ComparisonFn::RationalDecay => "rational_decay".into(),
            ComparisonFn::SqrtShift => "sqrt_shift".into(),
            ComparisonFn::Power { p } => format!("power:{p}"),
            ComparisonFn::Table(t) => format!("table({} points)", t.ts.len()),
            ComparisonFn::Composition { parts } => {
                parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("|")
            }
        }
    }

    /// Parses `linear:k`, `rational_decay`, `sqrt_shift`, `power:p`,
    /// `file:path` (two-column table), or a `|`-separated composition.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec.contains('|') {
            let parts = spec.split('|').map(|s| Self::parse(s.trim())).collect::<Result<Vec<_>>>()?;
            return Ok(ComparisonFn::Composition { parts });
        }
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            let a = a.ok_or_else(|| Error::param(format!("`{name}` needs a numeric parameter")))?;
            a.trim()
                .parse()
                .map_err(|_| Error::param(format!("`{a}` is not a number")))
        };
        match name {
            "linear" => Self::linear(number(arg)?),
            "power" => Self::power(number(arg)?),
            "rational_decay" if arg.is_none() => Ok(ComparisonFn::RationalDecay),
            "sqrt_shift" if arg.is_none() => Ok(ComparisonFn::SqrtShift),
            "file" | "table" => {
                let path = arg.ok_or_else(|| Error::param("table reference needs a path"))?;
                Ok(ComparisonFn::Table(TableFn::load(Path::new(path))?))
            }
            _ => Err(Error::param(format!("unknown comparison function `{spec}`"))),
        }
    }
}

/// `θⁿ(t)`, with `θ⁰(t) = t`.
pub fn iterate_theta(theta: &ComparisonFn, t: f64, n: usize) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param(format!("t must be a nonnegative number, got {t}")));
    }
    let mut x = t;
    for step in 1..=n {
        x = theta.eval(x);
        if !x.is_finite() {
            return Err(Error::NonFiniteIterate { t, step, value: x });
        }
    }
    Ok(x)
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("grid must be nonempty"));
    }
    if grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("grid must be finite, nonnegative and strictly increasing"));
    }
    Ok(())
}

/// `{0} ∪ {k/20 : k = 1..100} ∪ {10^(j/10) : j = −60..30}`.
pub fn default_grid() -> Vec<f64> {
    let mut g: Vec<f64> = std::iter::once(0.0)
        .chain((1..=100).map(|k| k as f64 / 20.0))
        .chain((-60..=30).map(|j| 10f64.powf(j as f64 / 10.0)))
        .collect();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

pub fn default_positive_grid() -> Vec<f64> {
    default_grid().into_iter().filter(|t| *t > 0.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneWitness {
    pub t1: f64,
    pub t2: f64,
    pub value1: f64,
    pub value2: f64,
}

/// Looks for `t₁ < t₂` on the grid with `θ(t₁) > θ(t₂)` beyond rounding;
/// returns the adjacent pair with the largest drop.
pub fn check_monotone(theta: &ComparisonFn, grid: &[f64]) -> Result<Option<MonotoneWitness>> {
    validate_grid(grid)?;
    let values: Vec<f64> = grid.iter().map(|&t| theta.eval(t)).collect();
    let mut worst: Option<(f64, MonotoneWitness)> = None;
    for k in 1..grid.len() {
        let drop = values[k - 1] - values[k];
        if drop > 1e-12 * (1.0 + values[k - 1].abs()) && worst.is_none_or(|(d, _)| drop > d) {
            worst = Some((
                drop,
                MonotoneWitness {
                    t1: grid[k - 1],
                    t2: grid[k],
                    value1: values[k - 1],
                    value2: values[k],
                },
            ));
        }
    }
    Ok(worst.map(|(_, w)| w))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubdiagonalWitness {
    pub t: f64,
    pub value: f64,
}

/// Checks `θ(t) < t` on a grid of positive `t`; the witness maximizes
/// `θ(t) − t` among the violations.
pub fn check_subdiagonal(theta: &ComparisonFn, grid: &[f64]) -> Result<Option<SubdiagonalWitness>> {
    validate_grid(grid)?;
    if grid[0] <= 0.0 {
        return Err(Error::param("subdiagonal grid must be strictly positive"));
    }
    let mut worst: Option<(f64, SubdiagonalWitness)> = None;
    for &t in grid {
        let v = theta.eval(t);
        let excess = v - t;
        if excess >= 0.0 && worst.is_none_or(|(e, _)| excess > e) {
            worst = Some((excess, SubdiagonalWitness { t, value: v }));
        }
    }
    Ok(worst.map(|(_, w)| w))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaConfig {
    pub probes: Vec<f64>,
    /// Iteration cap `N`.
    pub cap: usize,
    /// `θ₁` threshold: `θᴺ(t) < eps` counts as convergence to zero.
    pub eps: f64,
    /// `θ₂` budget for partial sums.
    pub budget: f64,
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig {
            probes: vec![1e-3, 0.1, 1.0, 10.0, 100.0],
            cap: 1_000_000,
            eps: 1e-5,
            budget: 1e9,
        }
    }
}

impl ThetaConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate(&self) -> Result<()> {
        if self.probes.is_empty() || self.probes.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::param("probes must be positive numbers"));
        }
        if self.cap == 0 || !(self.eps > 0.0) || !(self.budget > 0.0) {
            return Err(Error::param("cap, eps and budget must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaClass {
    Theta1,
    Theta2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails { t: f64, evidence: String },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub t: f64,
    pub iterations: usize,
    pub last_value: f64,
    pub partial_sum: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaVerdict {
    pub class: ThetaClass,
    pub verdict: Verdict,
    pub probes: Vec<ProbeOutcome>,
    pub cap: usize,
    pub eps: f64,
}

impl ThetaVerdict {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        matches!(self.verdict, Verdict::Fails { .. })
    }
}

fn aggregate(class: ThetaClass, probes: Vec<ProbeOutcome>, cfg: &ThetaConfig) -> ThetaVerdict {
    let verdict = if let Some(p) = probes.iter().find(|p| matches!(p.verdict, Verdict::Fails { .. })) {
        p.verdict.clone()
    } else if probes.iter().all(|p| p.verdict == Verdict::Holds) {
        Verdict::Holds
    } else {
        Verdict::Inconclusive {
            reason: "some probes neither converged nor produced counter-evidence within the cap".into(),
        }
    };
    ThetaVerdict {
        class,
        verdict,
        probes,
        cap: cfg.cap,
        eps: cfg.eps,
    }
}

fn theta1_probe(theta: &ComparisonFn, t: f64, cfg: &ThetaConfig) -> ProbeOutcome {
    let outcome = |iterations, last_value, verdict| ProbeOutcome {
        t,
        iterations,
        last_value,
        partial_sum: None,
        verdict,
    };
    let mut x = t;
    let mut prev_step = f64::NAN;
    for n in 0..cfg.cap {
        if x < cfg.eps {
            return outcome(n, x, Verdict::Holds);
        }
        let y = theta.eval(x);
        if !y.is_finite() {
            return outcome(n, x, Verdict::Fails { t, evidence: format!("non-finite iterate after step {n}") });
        }
        if y >= x {
            return outcome(
                n,
                x,
                Verdict::Fails {
                    t,
                    evidence: format!("iterates stop decreasing at step {n}: θ({x:e}) = {y:e} >= {x:e} > eps"),
                },
            );
        }
        let step = x - y;
        // Stall: nearly a fixed point, and a geometric tail cannot reach eps.
        if step < 1e-3 * cfg.eps * x {
            let r = step / prev_step;
            if r < 1.0 {
                let limit = y - step * r / (1.0 - r);
                if limit > cfg.eps {
                    return outcome(
                        n,
                        y,
                        Verdict::Fails {
                            t,
                            evidence: format!("iterates stall at step {n}; limit estimate {limit:e} > eps"),
                        },
                    );
                }
            }
        }
        prev_step = step;
        x = y;
    }
    if x < cfg.eps {
        outcome(cfg.cap, x, Verdict::Holds)
    } else {
        outcome(
            cfg.cap,
            x,
            Verdict::Inconclusive {
                reason: format!("θ^{}({t}) = {x:e} >= eps", cfg.cap),
            },
        )
    }
}

/// Numerical proxy for `θ ∈ Θ₁`.
pub fn check_theta1(theta: &ComparisonFn, cfg: &ThetaConfig) -> Result<ThetaVerdict> {
    cfg.validate()?;
    let probes = cfg.probes.iter().map(|&t| theta1_probe(theta, t, cfg)).collect();
    Ok(aggregate(ThetaClass::Theta1, probes, cfg))
}

const RATIO_WINDOW: usize = 32;

fn theta2_probe(theta: &ComparisonFn, t: f64, cfg: &ThetaConfig) -> ProbeOutcome {
    let outcome = |iterations, last_value, sum, verdict| ProbeOutcome {
        t,
        iterations,
        last_value,
        partial_sum: Some(sum),
        verdict,
    };
    let mut ratios = [0.0f64; RATIO_WINDOW];
    let mut x = t;
    let mut prev = f64::NAN;
    let mut sum = 0.0;
    for n in 0..cfg.cap {
        sum += x;
        if sum > cfg.budget {
            return outcome(
                n,
                x,
                sum,
                Verdict::Fails {
                    t,
                    evidence: format!("partial sum {sum:e} exceeds budget {:e} at step {n}", cfg.budget),
                },
            );
        }
        if x <= 1e-16 * sum {
            let late = &ratios[..n.min(RATIO_WINDOW)];
            let sup = late.iter().copied().fold(0.0, f64::max);
            return if sup < 1.0 - 1e-3 {
                outcome(n, x, sum, Verdict::Holds)
            } else {
                outcome(
                    n,
                    x,
                    sum,
                    Verdict::Inconclusive {
                        reason: format!("increments vanished but late ratio {sup} is not below 1"),
                    },
                )
            };
        }
        let y = theta.eval(x);
        if !y.is_finite() {
            return outcome(n, x, sum, Verdict::Fails { t, evidence: format!("non-finite iterate after step {n}") });
        }
        if y >= x {
            return outcome(
                n,
                x,
                sum,
                Verdict::Fails {
                    t,
                    evidence: format!("terms stop decreasing at step {n} (θ({x:e}) = {y:e}); the series diverges"),
                },
            );
        }
        ratios[n % RATIO_WINDOW] = y / x;
        prev = x;
        x = y;
    }
    // Bertrand: ln n · (n·(x_{n−1}/x_n − 1) − 1) tending below 1 means
    // divergence; 0.5 leaves room for the finite n.
    let n = cfg.cap as f64;
    let bertrand = n.ln() * (n * (prev / x - 1.0) - 1.0);
    if cfg.cap >= 1000 && bertrand < 0.5 {
        return outcome(
            cfg.cap,
            x,
            sum,
            Verdict::Fails {
                t,
                evidence: format!(
                    "terms decay sublinearly: Bertrand statistic {bertrand:.4} < 0.5 at n = {}, partial sum {sum:e}",
                    cfg.cap
                ),
            },
        );
    }
    outcome(
        cfg.cap,
        x,
        sum,
        Verdict::Inconclusive {
            reason: format!("partial sum {sum:e} still growing at the cap (Bertrand statistic {bertrand:.4})"),
        },
    )
}

/// Numerical proxy for `θ ∈ Θ₂`.
pub fn check_theta2(theta: &ComparisonFn, cfg: &ThetaConfig) -> Result<ThetaVerdict> {
    cfg.validate()?;
    let probes = cfg.probes.iter().map(|&t| theta2_probe(theta, t, cfg)).collect();
    Ok(aggregate(ThetaClass::Theta2, probes, cfg))
}
