//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("singular point at (p, q) = ({p}, {q})")]
    SingularPoint { p: f64, q: f64 },

    #[error("evaluation point ({x}) outside the tabulated range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("insufficient decay at grid edge: tail magnitude {tail:.3e} exceeds {limit:.3e}")]
    EdgeDecay { tail: f64, limit: f64 },

    #[error("aliasing detected: kernel magnitude at grid edge is {edge:.3e} of peak (limit {limit:.3e}); enlarge the grid")]
    Aliasing { edge: f64, limit: f64 },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("root bracketing failed at node {node}: {detail}")]
    RootBracket { node: f64, detail: String },

    #[error("function must be monotone: {0}")]
    NotMonotone(String),

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
