//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdent { name: String, offset: usize },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("exponent of `^` must be a literal constant (byte {offset})")]
    NonConstExponent { offset: usize },

    #[error("non-finite value in `{context}`")]
    NonFinite { context: String },

    #[error("division by near-zero denominator in `{context}`")]
    DivisionByZero { context: String },

    #[error("sqrt of negative argument {arg} in `{context}`")]
    NegativeSqrt { arg: f64, context: String },

    #[error("argument {value} outside domain [{min}, {max}] of `{name}`")]
    OutsideDomain {
        name: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("warping function must be positive on its domain; `{name}`({at}) = {value}")]
    NonPositiveWarp { name: String, at: f64, value: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("degenerate metric at node {node}: |det g| = {det:.3e}")]
    DegenerateMetric { node: usize, det: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("sign data invalid: {0}")]
    Signs(String),

    #[error("hypersurface data invalid: {0}")]
    Data(String),

    #[error("structure residual {residual:.3e} exceeds gate {gate:.3e} for `{check}` (strict mode)")]
    StructureGate {
        check: String,
        residual: f64,
        gate: f64,
    },

    #[error("frame completion failed: {0}")]
    FrameCompletion(String),

    #[error("initial frame row constraint violated: {0}")]
    RowConstraint(String),

    #[error("group drift {drift:.3e} exceeds limit {limit:.3e} before re-projection")]
    GroupDrift { drift: f64, limit: f64 },

    #[error("quadric membership violated: max |Σ ε_α χ_α² − c| = {residual:.3e} > {tol:.3e}")]
    QuadricViolation { residual: f64, tol: f64 },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}
