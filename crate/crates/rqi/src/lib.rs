//! Numerical toolkit for entanglement in relativistic settings: Unruh and
//! Hawking degradation and amplification, black-hole proximity, collapse,
//! cosmological expansion and geometric-phase detection, with every closed
//! form backed by an independent brute-force matrix oracle.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices, Hermitian eigendecomposition,
//!   partial trace / partial transpose, entropies.
//! - [`modes`]: physical parameters -> squeezing / Bogoliubov quantities.
//! - [`states`]: vacua, excitations and entangled families in the
//!   accelerated basis.
//! - [`measures`]: negativity, mutual information, entanglement entropy.
//! - [`scenarios`]: sweeps, crossings, protocols, geometric phases.
//! - [`oracle`]: brute-force verification against reference matrices.
//! - [`table`], [`config`]: CSV/JSON output and run configuration.

pub mod config;
pub mod error;
mod fock;
pub mod linalg;
pub mod measures;
pub mod modes;
pub mod oracle;
pub mod scenarios;
pub mod states;
pub mod table;

pub use error::{Result, RqiError};
