//! Error type shared by the whole crate.

use crate::space::Point;
use thiserror::Error;

/// Everything that can go wrong while building spaces, evaluating
/// functions or running estimators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("space `{space}` does not support {op}")]
    UnsupportedSpace { op: &'static str, space: String },

    #[error("strategy `{strategy}` cannot sample space `{space}`")]
    UnsupportedStrategy { strategy: String, space: String },

    #[error("`{label}` evaluated to a non-finite value at {point:?}")]
    NonFinite { label: String, point: Point },

    #[error("domain error in `{label}` at {point:?}: {detail}")]
    Domain {
        label: String,
        point: Point,
        detail: String,
    },

    #[error("no sampled pair at distance >= {min_distance}")]
    InsufficientSample { min_distance: f64 },

    #[error("search failed: {0}")]
    SearchFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
