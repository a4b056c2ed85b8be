pub mod algebra;
pub mod cli;
pub mod cobs_state;
pub mod error;
pub mod models;
pub mod oracle;
pub mod perturbation;
pub mod sdeom;

pub use error::{Error, Result};
