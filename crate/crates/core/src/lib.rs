//! Mutually unbiased product bases in dimension six.
//!
//! The crate builds the Heisenberg–Weyl bases of C² and C³, the MU product
//! triples and pairs of C⁶, and checks the two impossibility results about
//! them: no vector is MU to an MU product triple, and the product
//! constellation {5,5,4} only extends by product states. A multi-start
//! numerical search provides an independent check of both, and reproduces
//! the count of 48 vectors MU to the Heisenberg–Weyl product pair.

pub mod constellation;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod search;
pub mod theorem1;
pub mod verify;

pub use error::{Error, Result};

/// Default tolerance for floating-point predicates.
pub const DEFAULT_TOL: f64 = 1e-10;
