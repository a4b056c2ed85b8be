//! Dense exact diagonalization, exact pole expansions and time evolution used as ground truth.

pub mod compare;
pub mod lehmann;
pub mod spectral;

pub use compare::{compare_greens, CompareReport, PolePair};
pub use lehmann::{lehmann_greens, time_evolve_expectation};
pub use spectral::{exact_diagonalize, exact_diagonalize_capped, SpectralData, DEGENERACY_TOL};
