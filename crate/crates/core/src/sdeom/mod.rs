//! Equations of motion for two-time correlators on a closed operator subspace.
pub mod analysis;
pub mod greens;
pub mod krylov;
pub mod system;

pub use analysis::{
    eigenstate_residual, liouvillian_from_structure, max_residual, moment_series, moment_series_value,
    pivotal_channels, pivotal_report, static_response, PivotalChannel, ResponseChannel, StaticResponse,
};
pub use greens::{GreensFunction, Kind, Pole, PoleClass};
pub use krylov::{adjoint_action, krylov_closure, KrylovBasis};
pub use system::{
    assemble, assemble_conjugate, assemble_with, solve_frequency, AssembleOptions, FrequencySolution,
    SdeomSystem, Side,
};
