//! The Lie algebra g on a Chevalley-type basis and reductive pairs `(g, r)`
//! with every splitting used by the Dirac operator.
//!
//! Elements of g are dense coordinate vectors on the basis
//! `h_1..h_n, e_φ (φ ∈ Δ₊), e_{−φ} (φ ∈ Δ₊)`. Elements of `h` alone are
//! coefficient vectors on the simple coroots `h_i`. Functionals on `h_r` are
//! value vectors on the chosen basis of `h_r`.

mod algebra;
mod pair;

pub use algebra::LieAlgebra;
pub use pair::{CartanVector, LiePair, PBlocks, RhoParts, SubalgebraSpec};

use thiserror::Error;

use crate::rootdata::RootDataError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("DegenerateForm: {0}")]
    DegenerateForm(String),
    #[error("NotSubalgebra: {0}")]
    NotSubalgebra(String),
    #[error("CartanNotAligned: {0}")]
    CartanNotAligned(String),
    #[error("InternalInconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}
