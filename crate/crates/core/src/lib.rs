//! Exact difference-operator calculus for the equivariant Toda lattice
//! hierarchy.

pub mod check;
pub mod diffalg;
pub mod diffop;
pub mod dressing;
pub mod equivariant;
pub mod error;
pub mod flows;
pub mod parallel;
pub mod properties;
pub mod random;
pub mod variational;

pub use error::{Error, Mismatch, Result};
