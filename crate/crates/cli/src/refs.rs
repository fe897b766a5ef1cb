//! Resolution of space, map, θ and point references.
//!
//! Spaces are gallery names, builtin formulas (`euclidean`, `power:p`,
//! `exp_abs`, `exp_signed`, `expm1_abs`) or `file:path` space files.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use suprametric_core::gallery::{load_gallery, GalleryItem, EXP_BOX, POLY_BOX};
use suprametric_core::oracle::{Carrier, DistanceOracle, Formula};
use suprametric_core::point::{DomainBox, Point};
use suprametric_core::spacefile::load_space_file;

/// A resolved space, with its gallery entry when it came from the gallery.
pub struct Space {
    pub oracle: DistanceOracle,
    pub item: Option<GalleryItem>,
}

fn builtin(name: &str) -> Result<Option<(Formula, (f64, f64))>> {
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    let f = match (head, arg) {
        ("euclidean", "") => (Formula::Euclidean, POLY_BOX),
        ("power", p) if !p.is_empty() => {
            let p: f64 = p.parse().map_err(|_| anyhow!("`{p}` is not an exponent"))?;
            (Formula::Power { p }, POLY_BOX)
        }
        ("exp_abs", "") => (Formula::ExpAbs, EXP_BOX),
        ("exp_signed", "") => (Formula::ExpSigned, EXP_BOX),
        ("expm1_abs", "") => (Formula::Expm1Abs, EXP_BOX),
        _ => return Ok(None),
    };
    Ok(Some(f))
}

/// Resolves a space reference. `validate` applies the space-file checks.
pub fn resolve_space(spec: &str, domain: Option<(f64, f64)>, validate: bool) -> Result<Space> {
    let mut space = if let Some(path) = spec.strip_prefix("file:") {
        let s = load_space_file(Path::new(path), validate).with_context(|| format!("cannot load space file `{path}`"))?;
        Space {
            oracle: DistanceOracle::finite(path, s),
            item: None,
        }
    } else if let Ok(item) = load_gallery(spec) {
        Space {
            oracle: item.oracle.clone(),
            item: Some(item),
        }
    } else if let Some((formula, (lo, hi))) = builtin(spec)? {
        Space {
            oracle: DistanceOracle::analytic(spec, formula, DomainBox::line(lo, hi)?)?,
            item: None,
        }
    } else {
        bail!("unknown space `{spec}` (try `gallery` for the list, or `file:path`)");
    };
    if let Some((lo, hi)) = domain {
        let dim = space
            .oracle
            .domain()
            .ok_or_else(|| anyhow!("--box applies to analytic spaces only"))?
            .dim;
        space.oracle = space.oracle.with_domain(DomainBox::new(lo, hi, dim)?)?;
    }
    Ok(space)
}

/// Parses a point of the carrier: comma-separated coordinates for analytic
/// spaces, an index or a label for finite ones.
pub fn parse_point(text: &str, oracle: &DistanceOracle) -> Result<Point> {
    let p = match oracle.carrier() {
        Carrier::Finite(s) => {
            let t = text.trim().trim_start_matches('#');
            match t.parse::<usize>() {
                Ok(i) => Point::Index(i),
                Err(_) => Point::Index(s.index_of(text).ok_or_else(|| anyhow!("no point labelled `{text}`"))?),
            }
        }
        Carrier::Analytic { domain, .. } => {
            let coords = text
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| anyhow!("`{v}` is not a number")))
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != domain.dim {
                bail!("point `{text}` has {} coordinates, the space has {}", coords.len(), domain.dim);
            }
            Point::Coords(coords)
        }
    };
    if !oracle.contains(&p) {
        bail!("point `{text}` is not in {}", oracle.describe());
    }
    Ok(p)
}

pub fn parse_box(text: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = text.split_once(',').ok_or("expected `lo,hi`")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("`{lo}` is not a number"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("`{hi}` is not a number"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err("need finite lo < hi".into());
    }
    Ok((lo, hi))
}
