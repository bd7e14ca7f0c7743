use crate::graphs::GraphError;
use crate::integrate::IntegrateError;
use thiserror::Error;

/// Failures shared by the three model tiers.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("order parameter of an empty phase set")]
    EmptyPhases,
    #[error("non-finite derivative at {force} node {node}")]
    NonFinite { force: &'static str, node: usize },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), ModelError> {
    if expected == got {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch {
            what,
            expected,
            got,
        })
    }
}

/// Round-trippable decimal text for CSV cells (17 significant digits).
pub(crate) fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}
