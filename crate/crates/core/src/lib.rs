//! Intrinsic-decoherence dynamics of three coupled quantum harmonic
//! oscillators.
//!
//! Three bosonic modes with number-conserving couplings evolve under the
//! Milburn equation, `rho_dot = gamma (exp(-iH/gamma) rho exp(iH/gamma) -
//! rho)`, whose exact solution is a Poisson-weighted series of unitary
//! kicks. The crate provides
//!
//! - [`spectral`]: the two-rotation diagonalization of the three-mode
//!   Hamiltonian (mixing angles and effective frequencies);
//! - [`analytic`]: closed-form mean photon numbers for one mode starting in
//!   a coherent state;
//! - [`fock`]: truncated three-mode Fock-space operators and states;
//! - [`evolve`]: brute-force engines (coherent-amplitude oracle, truncated
//!   Fock series, second-order Lindblad integrator) that are independent of
//!   the closed forms and cross-validate them.

pub mod analytic;
pub mod evolve;
pub mod fock;
pub mod spectral;

pub use analytic::CoherentTriple;
pub use evolve::{Engine, EvolveError, SeriesTruncation, TimeSeries};
pub use fock::{DensityMatrix, FockDims, FockError, FockOperator, FockState};
pub use spectral::{ParamError, SpectralData, SystemParams};
