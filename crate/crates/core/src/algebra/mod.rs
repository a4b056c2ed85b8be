//! Pauli-word operator algebra.

pub mod dense;
pub mod parse;
pub mod spin;
pub mod structure;
pub mod sum;
pub mod word;

pub use dense::{apply, expand_operator, to_dense, word_matrix_element, word_to_dense};
pub use parse::parse_operator;
pub use spin::{pauli, s_minus, s_plus, spin, sx, sy, sz, Axis};
pub use structure::{structure_constants, StructureConstants};
pub use sum::{anticommutator, commutator, trace_inner_product, OperatorSum};
pub use word::{Letter, PauliWord, Phase};
