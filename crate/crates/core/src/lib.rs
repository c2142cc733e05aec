//! Binary matroids as GF(2) subspaces: exact evaluation of the Tutte
//! polynomial at (−ι, ι), the canonical tripartition, projection support
//! graphs and an isomorphism prefilter, each backed by a brute-force oracle.

pub mod caps;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod gf2;
pub mod graph;
pub mod profile;
pub mod projection;
pub mod qform;
pub mod subspace;
pub mod tripartition;
pub mod tutte;

pub use error::{Error, Result};
pub use gaussian::GaussianInteger;
pub use gf2::{BitMatrix, BitVector};
pub use qform::{compute_q_basis, FormKind, QBasis};
pub use subspace::Subspace;
pub use tutte::{evaluate, TuttePointValue};
