//! Exact finite-level verification of free nilpotent group extensions,
//! twisted cup products and Hilbert symbols.

pub mod arithmetic;
pub mod cocycles;
pub mod cohomology;
pub mod error;
pub mod galois;
pub mod magnus;
pub mod models;
pub mod nilpotent;
pub mod obstruction;
pub mod quotient;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
