//! Small-dimension complex linear algebra for C², C³ and C⁶ = C² ⊗ C³.
//!
//! Vectors and operators are generic over [`Scalar`], implemented for
//! `Complex64` (floating point) and [`Cyclotomic`] (exact). Product states
//! use the index convention `3·j + J` for |j⟩⊗|J⟩.

mod bipartite;
pub mod cyclotomic;
mod operator;
mod scalar;
mod state;

pub use bipartite::{bloch, orthocomplement3, partial_trace, schmidt, BlochVector, SchmidtDecomposition, Subsystem};
pub use cyclotomic::Cyclotomic;
pub use operator::{DensityMatrix, Operator};
pub use scalar::{Mode, Scalar};
pub use state::{inner, tensor, ExactState, StateVector, PHASE_TIE_SLACK};

