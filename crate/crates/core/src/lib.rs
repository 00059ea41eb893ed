//! toruslab: a numerical laboratory for volume-preserving diffeomorphisms
//! of flat tori.
//!
//! The crate computes Lyapunov spectra and exterior-power growth exponents
//! of explicit torus maps, the induced action on cohomology with its
//! spectral radii, Lyapunov metrics and their integrability diagnostics,
//! and volume-growth entropy estimators — and cross-checks the growth
//! inequalities relating them in a machine-readable verification harness.

pub mod catalog;
pub mod cocycle;
pub mod error;
pub mod hodge;
pub mod linalg;
pub mod metric;
pub mod report;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use torus::{Direction, ShearFactor, SystemSpec, TorusPoint, TorusSystem};
