//! Exact homology of weighted graded Lie algebras and Hecke Lie algebras.
pub mod chain;
pub mod coeff;
pub mod error;
pub mod fgl;
pub mod hecke;
pub mod lie;
pub mod specseq;
pub mod wgmod;

pub use chain::{BigradedComplex, HomologyGroup, HomologySummary};
pub use coeff::{Matrix, RingSpec, Scalar};
pub use error::{Error, Result};
pub use wgmod::{BasisElem, FreeWGModule};
