//! Cohomology of finite groups with twisted cyclic coefficients.

pub mod cochain;
pub mod extension;
pub mod group;
pub mod transport;

pub use cochain::{TwistedCochain, TwistedModule};
pub use extension::{extension_cocycle, galois_group, FiniteSemidirect};
pub use group::{FiniteGroup, Homomorphism};
pub use transport::{cohomologous, verify_transport};
