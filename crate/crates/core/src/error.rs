use thiserror::Error;

use crate::point::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while evaluating distances, sampling, or iterating maps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite distance {value} between {x} and {y}")]
    NonFinite { x: Point, y: Point, value: f64 },

    #[error("point {0} does not belong to the carrier")]
    OutOfCarrier(Point),

    #[error("map left the carrier at iteration {iteration} (point {point})")]
    DomainEscape { iteration: usize, point: Point },

    #[error("non-finite value {value} at iterate {step} starting from t = {t}")]
    NonFiniteIterate { t: f64, step: usize, value: f64 },

    #[error("at pair ({x}, {y}): {source}")]
    AtPair {
        x: Point,
        y: Point,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid space file: {0}")]
    SpaceFile(String),

    #[error("unknown gallery item `{0}`")]
    UnknownItem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
