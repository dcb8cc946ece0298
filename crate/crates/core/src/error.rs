use thiserror::Error;

/// Errors raised by the model layers (materials, beam theory, oracle, sweeps).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown material `{name}` (available: {available})")]
    UnknownMaterial { name: String, available: String },

    #[error("unsupported unit `{0}` (expected one of um, GPa, pm_per_V, V, per_TPa)")]
    UnsupportedUnit(String),

    #[error("invalid material `{name}`: {reason}")]
    InvalidMaterial { name: String, reason: String },

    #[error("invalid multimorph stack: {0}")]
    InvalidStack(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("position x = {x:e} m lies outside [0, {span:e}] m")]
    OutOfRange { x: f64, span: f64 },

    #[error("singular linear system")]
    SingularSystem,

    #[error("invalid oracle grid: {0}")]
    InvalidGrid(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
