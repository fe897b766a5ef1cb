//! Candidate generalized metrics.
//!
//! A [`DistanceOracle`] is either a finite carrier backed by an `n × n`
//! matrix or an analytic formula on a box in `ℝᵈ`. Nothing about the
//! axioms is assumed: the checks in [`crate::axioms`] decide them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{DomainBox, Point};

/// Closed-form distances on `ℝᵈ`, written in terms of `r = ‖x − y‖₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "formula", rename_all = "snake_case")]
pub enum Formula {
    /// `r`
    Euclidean,
    /// `rᵖ`
    Power { p: f64 },
    /// `e^r` for `x ≠ y`, `0` otherwise.
    ExpAbs,
    /// `exp(Σ(xᵢ − yᵢ))` for `x ≠ y`, `0` otherwise. Not symmetric.
    ExpSigned,
    /// `e^r − 1`
    Expm1Abs,
}

impl Formula {
    pub fn name(&self) -> String {
        match self {
            Formula::Euclidean => "euclidean".into(),
            Formula::Power { p } => format!("power:{p}"),
            Formula::ExpAbs => "exp_abs".into(),
            Formula::ExpSigned => "exp_signed".into(),
            Formula::Expm1Abs => "expm1_abs".into(),
        }
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let same = x == y;
        match self {
            Formula::ExpSigned => {
                if same {
                    0.0
                } else {
                    x.iter().zip(y).map(|(a, b)| a - b).sum::<f64>().exp()
                }
            }
            _ => {
                let r = if x.len() == 1 {
                    (x[0] - y[0]).abs()
                } else {
                    x.iter()
                        .zip(y)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                };
                match self {
                    Formula::Euclidean => r,
                    Formula::Power { p } => {
                        if r == 0.0 {
                            0.0
                        } else {
                            r.powf(*p)
                        }
                    }
                    Formula::ExpAbs => {
                        if same {
                            0.0
                        } else {
                            r.exp()
                        }
                    }
                    Formula::Expm1Abs => r.exp_m1(),
                    Formula::ExpSigned => unreachable!(),
                }
            }
        }
    }
}

/// Finite carrier `{0, …, n−1}` with a row-major distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    n: usize,
    entries: Vec<f64>,
}

impl FiniteSpace {
    /// Builds a finite space without validating the axioms; the matrix only
    /// has to be square and finite.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::SpaceFile("empty distance matrix".into()));
        }
        if labels.len() != n {
            return Err(Error::SpaceFile(format!(
                "{} labels for a {n}x{n} matrix",
                labels.len()
            )));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SpaceFile(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::SpaceFile(format!("entry ({i}, {j}) is not finite")));
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(FiniteSpace { labels, n, entries })
    }

    /// Unlabelled space; labels default to the indices.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(labels, rows)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Same space with every distance multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> FiniteSpace {
        FiniteSpace {
            labels: self.labels.clone(),
            n: self.n,
            entries: self.entries.iter().map(|v| v * lambda).collect(),
        }
    }

    /// Relabels points: new point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<FiniteSpace> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::param("relabeling is not a permutation"));
        }
        let mut entries = Vec::with_capacity(self.n * self.n);
        for &pi in perm {
            for &pj in perm {
                entries.push(self.get(pi, pj));
            }
        }
        Ok(FiniteSpace {
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            n: self.n,
            entries,
        })
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Carrier {
    Finite(FiniteSpace),
    Analytic { formula: Formula, domain: DomainBox },
}

/// A candidate distance `Δ` over a carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceOracle {
    label: String,
    carrier: Carrier,
}

impl DistanceOracle {
    pub fn finite(label: impl Into<String>, space: FiniteSpace) -> Self {
        DistanceOracle {
            label: label.into(),
            carrier: Carrier::Finite(space),
        }
    }

    pub fn analytic(label: impl Into<String>, formula: Formula, domain: DomainBox) -> Result<Self> {
        domain.validate()?;
        if let Formula::Power { p } = formula {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::param(format!("power exponent must be positive, got {p}")));
            }
        }
        Ok(DistanceOracle {
            label: label.into(),
            carrier: Carrier::Analytic { formula, domain },
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn finite_space(&self) -> Option<&FiniteSpace> {
        match &self.carrier {
            Carrier::Finite(s) => Some(s),
            Carrier::Analytic { .. } => None,
        }
    }

    pub fn domain(&self) -> Option<DomainBox> {
        match &self.carrier {
            Carrier::Analytic { domain, .. } => Some(*domain),
            Carrier::Finite(_) => None,
        }
    }

    /// Replaces the domain box of an analytic carrier; finite carriers are
    /// returned unchanged.
    pub fn with_domain(&self, domain: DomainBox) -> Result<Self> {
        domain.validate()?;
        let mut out = self.clone();
        if let Carrier::Analytic { domain: d, .. } = &mut out.carrier {
            *d = domain;
        }
        Ok(out)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (&self.carrier, p) {
            (Carrier::Finite(s), Point::Index(i)) => *i < s.len(),
            (Carrier::Analytic { domain, .. }, Point::Coords(c)) => {
                c.iter().all(|v| v.is_finite()) && domain.contains(c)
            }
            _ => false,
        }
    }

    /// Evaluates `Δ(x, y)`. Non-finite values are errors; negative values are
    /// returned as-is so the semi-metric check can report them.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        let value = match (&self.carrier, x, y) {
            (Carrier::Finite(s), Point::Index(i), Point::Index(j)) if *i < s.len() && *j < s.len() => {
                s.get(*i, *j)
            }
            (Carrier::Analytic { formula, domain }, Point::Coords(a), Point::Coords(b))
                if a.len() == domain.dim && b.len() == domain.dim =>
            {
                formula.eval(a, b)
            }
            _ => {
                let bad = if self.contains(x) { y } else { x };
                return Err(Error::OutOfCarrier(bad.clone()));
            }
        };
        if !value.is_finite() {
            return Err(Error::NonFinite {
                x: x.clone(),
                y: y.clone(),
                value,
            });
        }
        Ok(value)
    }

    pub fn describe(&self) -> String {
        match &self.carrier {
            Carrier::Finite(s) => format!("finite space with {} points", s.len()),
            Carrier::Analytic { formula, domain } => format!("{} on {}", formula.name(), domain),
        }
    }
}

impl fmt::Display for DistanceOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label, self.describe())
    }
}
