//! Two-rotation diagonalization of the three-mode Hamiltonian.
//!
//! The Hamiltonian couples modes 1 and 2 with strength `lambda` and couples
//! mode 3 to both with strength `g`. A pi/4 beam-splitter rotation of modes
//! 1-2 followed by a rotation of modes 2-3 by the mixing angle `phi`
//! decouples everything, leaving three normal modes with frequencies
//! `omega_minus = omega - lambda`, `omega_upper` and `omega_lower` (the two
//! roots of the remaining symmetric 2x2 block). Every other module consumes
//! the angles and frequencies computed here.

use nalgebra::Matrix3;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, SQRT_2};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("oscillator frequency omega must be positive, got {0}")]
    NonPositiveOmega(f64),
    #[error("decoherence rate gamma must be positive, got {0}")]
    NonPositiveGamma(f64),
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
}

/// The five physical inputs defining a scenario.
///
/// `lambda` and `g` may be zero or negative; `omega` and `gamma` must be
/// positive. `alpha` is the coherent amplitude initially placed in mode 1,
/// the other two modes start in vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Common angular frequency of the three oscillators.
    pub omega: f64,
    /// Coupling strength between modes 1 and 2.
    pub lambda: f64,
    /// Coupling strength of mode 3 to modes 1 and 2.
    pub g: f64,
    /// Intrinsic decoherence rate; the unitary limit is `gamma -> inf`.
    pub gamma: f64,
    /// Initial coherent amplitude of mode 1.
    pub alpha: Complex64,
}

impl SystemParams {
    pub fn new(
        omega: f64,
        lambda: f64,
        g: f64,
        gamma: f64,
        alpha: Complex64,
    ) -> Result<Self, ParamError> {
        for (name, value) in [
            ("omega", omega),
            ("lambda", lambda),
            ("g", g),
            ("gamma", gamma),
            ("alpha.re", alpha.re),
            ("alpha.im", alpha.im),
        ] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite(name));
            }
        }
        if omega <= 0.0 {
            return Err(ParamError::NonPositiveOmega(omega));
        }
        if gamma <= 0.0 {
            return Err(ParamError::NonPositiveGamma(gamma));
        }
        Ok(Self { omega, lambda, g, gamma, alpha })
    }

    /// `|alpha|^2`: the total excitation number, conserved by the dynamics.
    pub fn total_excitation(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// Mixing angles and effective frequencies of the diagonalized Hamiltonian.
///
/// In the rotated frame the normal modes are 1 <-> `omega_minus`,
/// 2 <-> `omega_upper`, 3 <-> `omega_lower`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    /// First rotation angle (modes 1-2); always pi/4.
    pub theta: f64,
    /// Second rotation angle (modes 2-3).
    pub phi: f64,
    /// omega - lambda, the antisymmetric-mode frequency.
    pub omega_minus: f64,
    /// omega + lambda.
    pub omega_plus: f64,
    /// Lower root of the symmetric-sector block (rotated mode 3).
    pub omega_lower: f64,
    /// Upper root of the symmetric-sector block (rotated mode 2).
    pub omega_upper: f64,
}

impl SpectralData {
    /// Frequencies of the rotated-frame modes 1, 2, 3 in that order.
    pub fn normal_mode_frequencies(&self) -> [f64; 3] {
        [self.omega_minus, self.omega_upper, self.omega_lower]
    }

    /// The three beat frequencies entering the photon-number formulas:
    /// `[omega_lower - omega_upper, omega_minus - omega_upper, omega_minus - omega_lower]`.
    pub fn beat_deltas(&self) -> [f64; 3] {
        [
            self.omega_lower - self.omega_upper,
            self.omega_minus - self.omega_upper,
            self.omega_minus - self.omega_lower,
        ]
    }

    /// Smallest nonzero beat magnitude, if any beat is nonzero.
    pub fn min_nonzero_beat(&self) -> Option<f64> {
        let scale = self.omega_upper.abs().max(self.omega_minus.abs()).max(1.0);
        self.beat_deltas()
            .iter()
            .map(|d| d.abs())
            .filter(|d| *d > scale * 1e-12)
            .min_by(f64::total_cmp)
    }
}

/// Second rotation angle `phi` decoupling mode 3 from the symmetric sector.
///
/// `2 phi = atan2(2 sqrt(2) g, omega_plus - omega)`; the two-argument form
/// keeps the branch well defined when `lambda = 0`, where it yields
/// `phi = pi/4`. The result lies in `(-pi/2, pi/2]`.
pub fn mixing_angle(params: &SystemParams) -> f64 {
    let omega_plus = params.omega + params.lambda;
    0.5 * f64::atan2(2.0 * SQRT_2 * params.g, omega_plus - params.omega)
}

/// Effective frequencies and mixing angles of the diagonal Hamiltonian.
///
/// `omega_lower/upper = ((omega_plus + omega) -/+ sqrt(8 g^2 + (omega_plus - omega)^2)) / 2`,
/// so `omega_lower <= omega_upper` holds by construction and the pair obeys
/// the sum rule `omega_lower + omega_upper = omega_plus + omega`.
pub fn effective_frequencies(params: &SystemParams) -> SpectralData {
    let omega_plus = params.omega + params.lambda;
    let omega_minus = params.omega - params.lambda;
    let split = (8.0 * params.g * params.g
        + (omega_plus - params.omega) * (omega_plus - params.omega))
        .sqrt();
    let sum = omega_plus + params.omega;
    SpectralData {
        theta: FRAC_PI_4,
        phi: mixing_angle(params),
        omega_minus,
        omega_plus,
        omega_lower: 0.5 * (sum - split),
        omega_upper: 0.5 * (sum + split),
    }
}

/// Single-particle coupling matrix M with `H = sum_ij M_ij a_i^dag a_j`.
///
/// Its eigenvalues are the normal-mode frequencies, which the spectral
/// formulas must reproduce; tests cross-check the two routes.
pub fn single_particle_matrix(params: &SystemParams) -> Matrix3<f64> {
    let (w, l, g) = (params.omega, params.lambda, params.g);
    Matrix3::new(
        w, l, g, //
        l, w, g, //
        g, g, w,
    )
}

/// Orthogonal matrix `O` of the combined rotation at `theta = pi/4`.
///
/// Rows are the normal-mode coefficient vectors: `O^T diag(omega_minus,
/// omega_upper, omega_lower) O` reconstructs [`single_particle_matrix`], and
/// column j outer itself gives the coefficient table of the transformed
/// number operator of original mode j.
pub fn rotation_images(phi: f64) -> Matrix3<f64> {
    let (st, ct) = (FRAC_PI_4.sin(), FRAC_PI_4.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    Matrix3::new(
        ct,
        -st,
        0.0,
        st * cp,
        ct * cp,
        sp,
        -st * sp,
        -ct * sp,
        cp,
    )
}
