use thiserror::Error;

/// Errors shared across the toolkit modules.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument out of supported range: {0}")]
    Range(String),

    #[error("failed to bracket a root in [{lo}, {hi}] for {what}")]
    Bracket { what: String, lo: f64, hi: f64 },

    #[error("grid too coarse: {0}")]
    Refinement(String),

    #[error("degenerate cover: total mass {mass} < 2, no B-square exists")]
    DegenerateCover { mass: f64 },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
