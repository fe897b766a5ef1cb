//! Points of a carrier set and analytic domain boxes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the carrier `X`.
///
/// Finite spaces address points by index; analytic spaces on `ℝᵈ` carry
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Index(usize),
    Coords(Vec<f64>),
}

impl Point {
    pub fn scalar(x: f64) -> Self {
        Point::Coords(vec![x])
    }

    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Coords(c) => Some(c),
            Point::Index(_) => None,
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            Point::Index(i) => Some(*i),
            Point::Coords(_) => None,
        }
    }

    /// First coordinate of an analytic point; `None` for finite points.
    pub fn as_scalar(&self) -> Option<f64> {
        self.coords().and_then(|c| c.first().copied())
    }
}

/// Shortest round-trip form, switching to scientific notation outside
/// `[1e-4, 1e7)`.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e7).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Index(i) => write!(f, "#{i}"),
            Point::Coords(c) if c.len() == 1 => write!(f, "{}", fmt_num(c[0])),
            Point::Coords(c) => {
                write!(f, "(")?;
                for (k, v) in c.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", fmt_num(*v))?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Axis-aligned box `[lo, hi]ᵈ` bounding an analytic carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub lo: f64,
    pub hi: f64,
    pub dim: usize,
}

impl DomainBox {
    pub fn new(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        let b = DomainBox { lo, hi, dim };
        b.validate()?;
        Ok(b)
    }

    pub fn line(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, 1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo >= self.hi {
            return Err(Error::param(format!(
                "domain box [{}, {}] must be finite with lo < hi",
                self.lo, self.hi
            )));
        }
        if self.dim == 0 {
            return Err(Error::param("domain box dimension must be at least 1"));
        }
        Ok(())
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Box with the same center and half the width.
    pub fn shrunk(&self, factor: f64) -> DomainBox {
        let c = self.center();
        let h = 0.5 * self.width() * factor;
        DomainBox {
            lo: c - h,
            hi: c + h,
            dim: self.dim,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        // Relative slack absorbs rounding in maps such as affine shifts.
        let eps = 1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()));
        x.len() == self.dim && x.iter().all(|v| *v >= self.lo - eps && *v <= self.hi + eps)
    }
}

impl fmt::Display for DomainBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 1 {
            write!(f, "[{}, {}]", self.lo, self.hi)
        } else {
            write!(f, "[{}, {}]^{}", self.lo, self.hi, self.dim)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_validation() {
        assert!(DomainBox::line(1.0, 1.0).is_err());
        assert!(DomainBox::line(f64::NEG_INFINITY, 1.0).is_err());
        assert!(DomainBox::new(0.0, 1.0, 0).is_err());
        let b = DomainBox::line(-20.0, 20.0).unwrap();
        assert_eq!(b.shrunk(0.5), DomainBox::line(-10.0, 10.0).unwrap());
        assert!(b.contains(&[20.0]));
        assert!(!b.contains(&[20.1]));
    }

    #[test]
    fn display() {
        assert_eq!(Point::Index(3).to_string(), "#3");
        assert_eq!(Point::scalar(0.5).to_string(), "0.5");
        assert_eq!(Point::Coords(vec![1.0, 2.0]).to_string(), "(1, 2)");
    }
}
