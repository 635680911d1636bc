use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("exponent at offset {offset} must be an integer literal")]
    Exponent { offset: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("derivator degree {0} not supported (expected 1, 2 or 3)")]
    InvalidDegree(usize),

    #[error("invalid step {0}: delta must be finite and non-zero")]
    InvalidDelta(f64),

    #[error("interpolation system is numerically singular at x = {x}, delta = {delta}")]
    SingularSystem { x: f64, delta: f64 },

    #[error("function has no derivative tower; use the finite-difference backend")]
    MissingTower,

    #[error("leading coefficient vanishes; not a cubic")]
    DegenerateCubic,

    #[error("unknown builtin function `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
