pub mod error;
pub mod greens1d;
pub mod greens2d;
pub mod matfile;
pub mod operators;
pub mod quadrature;
pub mod recurrence;
pub mod special;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operators::{build_h, build_q_matrix, derive_params, symmetrize, DerivedParams, PhysicalParams, TridiagonalOperator};
pub use recurrence::{p_sequence, q_sequence, s_c_sequences, wronskian, SolutionPair};
