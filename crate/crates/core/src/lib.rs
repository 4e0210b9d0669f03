//! Floquet dynamics and Nielsen circuit complexity of the periodically driven
//! transverse-field Ising chain.
//!
//! The chain `H(t) = -J Σ σᶻσᶻ - (g0 + g1 cos Ωt) Σ σˣ` decouples into
//! independent two-level problems, one per momentum pair `(k, -k)` of the
//! even-parity sector. In the high-frequency regime each of them is governed
//! by an effective XY chain whose anisotropy is a Bessel function of the
//! driving amplitude. This crate evaluates that effective description, the
//! resulting circuit complexity observables, and an exact Runge-Kutta
//! integration of the driven problem to check the approximation against.
//!
//! - [`specfun`]: Bessel functions `J_n` and their zeros.
//! - [`model`]: parameters, momentum grid, effective couplings, spectra, phases.
//! - [`dynamics`]: analytic and integrated spinor evolution, Floquet modes.
//! - [`complexity`]: `C(t)`, its time average, Floquet-mode complexities,
//!   finite-difference derivatives, and the equilibrium Ising complexity.

pub mod complexity;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
