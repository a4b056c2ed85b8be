//! Operator bases graded by locality, states as expectation tables, and cumulants.

pub mod basis;
pub mod cumulant;
pub mod state;
pub mod two_spin;

pub use basis::{enumerate_cobs, GradedBasis};
pub use cumulant::{connected_expectation, cumulant, cumulant_operator, cumulant_recursive};
pub use state::{density_matrix_from_expectations, expectations_from_state, min_eigenvalue, pure_state, StateSpec};
pub use two_spin::{singlet_state, triplet_state, two_spin_state, Grade2Pair};
