use thiserror::Error;

/// Errors raised across the operator algebra, state, equation-of-motion and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} site-flavors, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("missing expectation values for {} word(s): {}", .words.len(), .words.join(", "))]
    MissingData { words: Vec<String> },

    #[error("resource limit exceeded: {what} (limit {limit}){}", residual_suffix(.residual))]
    Resource {
        what: String,
        limit: usize,
        residual: Option<f64>,
    },

    #[error("singular denominator: {0}")]
    Singular(String),

    #[error("frequency {omega} lies within {distance:e} of pole {pole}")]
    PoleProximity {
        omega: String,
        pole: f64,
        distance: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

fn residual_suffix(residual: &Option<f64>) -> String {
    match residual {
        Some(r) => format!(", residual norm {r:e}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_sites(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
