//! The finite-space file format: `{"points": [...], "distances": [[...]]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::FiniteSpace;

/// Relative tolerance for the symmetry check at load time.
pub const SYMMETRY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    /// Optional labels; points are named by index when absent.
    #[serde(default)]
    pub points: Vec<String>,
    pub distances: Vec<Vec<f64>>,
}

impl From<&FiniteSpace> for SpaceFile {
    fn from(s: &FiniteSpace) -> Self {
        SpaceFile {
            points: s.labels().to_vec(),
            distances: s.rows(),
        }
    }
}

/// Semimetric problems visible in the raw matrix.
pub fn matrix_problems(s: &FiniteSpace) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..s.len() {
        if s.get(i, i) != 0.0 {
            out.push(format!("nonzero diagonal at {i}: {}", s.get(i, i)));
        }
        for j in 0..s.len() {
            let (a, b) = (s.get(i, j), s.get(j, i));
            if a < 0.0 {
                out.push(format!("negative entry at ({i}, {j}): {a}"));
            }
            if i < j && (a - b).abs() > SYMMETRY_RTOL * (1.0 + a.abs().max(b.abs())) {
                out.push(format!("asymmetric entries at ({i}, {j}): {a} vs {b}"));
            }
        }
    }
    out
}

/// Parses a space file. With `validate`, rejects asymmetric matrices,
/// nonzero diagonals and negative entries.
pub fn parse_space_file(text: &str, validate: bool) -> Result<FiniteSpace> {
    let file: SpaceFile = serde_json::from_str(text)?;
    let space = if file.points.is_empty() {
        FiniteSpace::from_rows(file.distances)?
    } else {
        FiniteSpace::new(file.points, file.distances)?
    };
    if validate {
        if let Some(p) = matrix_problems(&space).into_iter().next() {
            return Err(Error::SpaceFile(p));
        }
    }
    Ok(space)
}

pub fn load_space_file(path: &Path, validate: bool) -> Result<FiniteSpace> {
    parse_space_file(&std::fs::read_to_string(path)?, validate)
}

pub fn to_json(space: &FiniteSpace) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SpaceFile::from(space))?)
}
