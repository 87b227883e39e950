//! Closed-form photon-number dynamics under intrinsic decoherence.
//!
//! With the Hamiltonian diagonalized, the Milburn series resums into damped
//! cosines of the three beat frequencies. Each beat `delta` contributes the
//! factor
//!
//! ```text
//! f(delta, t) = 2 exp(gamma t (cos(delta/gamma) - 1)) cos(gamma t sin(delta/gamma))
//! ```
//!
//! which is the real form of the nested complex exponentials obtained from
//! the Poisson-weighted sum; evaluating it directly avoids the overflowing
//! `exp(gamma t)` intermediates of the literal complex expression. The
//! unitary limit `f -> 2 cos(delta t)` is recovered as `gamma -> inf`.

use crate::spectral::{SpectralData, SystemParams};
use num_complex::Complex64;

/// Coherent amplitudes of the three rotated-frame modes at `t = 0`.
///
/// Rotations conserve excitation number, so the squared moduli sum to
/// `|alpha|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentTriple {
    pub beta1: Complex64,
    pub beta2: Complex64,
    pub beta3: Complex64,
}

impl CoherentTriple {
    pub fn occupations(&self) -> [f64; 3] {
        [self.beta1.norm_sqr(), self.beta2.norm_sqr(), self.beta3.norm_sqr()]
    }

    pub fn total(&self) -> f64 {
        self.occupations().iter().sum()
    }
}

/// Images of the mode-1 coherent amplitude under the two rotations:
/// `(alpha cos(theta), alpha cos(phi) sin(theta), -alpha sin(phi) sin(theta))`.
pub fn rotated_initial_amplitudes(
    params: &SystemParams,
    spectral: &SpectralData,
) -> CoherentTriple {
    let (st, ct) = (spectral.theta.sin(), spectral.theta.cos());
    let (sp, cp) = (spectral.phi.sin(), spectral.phi.cos());
    CoherentTriple {
        beta1: params.alpha * ct,
        beta2: params.alpha * (cp * st),
        beta3: -params.alpha * (sp * st),
    }
}

/// Damped-cosine factor of one beat frequency.
///
/// Bounded by `|f| <= 2 exp(gamma t (cos(delta/gamma) - 1)) <= 2`, with
/// `f(delta, 0) = 2` and `f(0, t) = 2`.
pub fn damping_factor(delta: f64, gamma: f64, t: f64) -> f64 {
    let x = delta / gamma;
    2.0 * (gamma * t * (x.cos() - 1.0)).exp() * (gamma * t * x.sin()).cos()
}

/// Decaying envelope bounding `|damping_factor|`.
pub fn damping_envelope(delta: f64, gamma: f64, t: f64) -> f64 {
    let x = delta / gamma;
    2.0 * (gamma * t * (x.cos() - 1.0)).exp()
}

/// Mean photon number of mode 1.
pub fn mean_n1(params: &SystemParams, spectral: &SpectralData, t: f64) -> f64 {
    mode12_bracket(params, spectral, t, 1.0)
}

/// Mean photon number of mode 2.
pub fn mean_n2(params: &SystemParams, spectral: &SpectralData, t: f64) -> f64 {
    mode12_bracket(params, spectral, t, -1.0)
}

/// Shared bracket of modes 1 and 2; they differ only in the sign of the two
/// beats against the antisymmetric mode.
fn mode12_bracket(
    params: &SystemParams,
    spectral: &SpectralData,
    t: f64,
    sign: f64,
) -> f64 {
    let gamma = params.gamma;
    let (sp, cp) = (spectral.phi.sin(), spectral.phi.cos());
    let (s2, c2) = (sp * sp, cp * cp);
    let [d_sym, d_lo, d_hi] = spectral.beat_deltas();
    let constant = 1.0 + 0.25 * (3.0 + (4.0 * spectral.phi).cos());
    0.25
        * params.total_excitation()
        * (constant
            + damping_factor(d_sym, gamma, t) * c2 * s2
            + sign * damping_factor(d_lo, gamma, t) * c2
            + sign * damping_factor(d_hi, gamma, t) * s2)
}

/// Mean photon number of mode 3.
pub fn mean_n3(params: &SystemParams, spectral: &SpectralData, t: f64) -> f64 {
    let (sp, cp) = (spectral.phi.sin(), spectral.phi.cos());
    let prefactor = params.total_excitation() * cp * cp * sp * sp;
    let f = damping_factor(spectral.omega_lower - spectral.omega_upper, params.gamma, t);
    prefactor * (1.0 - 0.5 * f)
}

/// All three mean photon numbers at once.
pub fn mean_occupations(params: &SystemParams, spectral: &SpectralData, t: f64) -> [f64; 3] {
    [
        mean_n1(params, spectral, t),
        mean_n2(params, spectral, t),
        mean_n3(params, spectral, t),
    ]
}

/// Photon numbers of the k-th unitary kick `<psi_k| n_j |psi_k>`.
///
/// Summing these with Poisson weights `exp(-gamma t) (gamma t)^k / k!`
/// reproduces [`mean_occupations`]; the resummation identity is asserted in
/// tests.
pub fn per_k_expectations(
    params: &SystemParams,
    spectral: &SpectralData,
    k: u64,
) -> [f64; 3] {
    let (sp, cp) = (spectral.phi.sin(), spectral.phi.cos());
    let (s2, c2) = (sp * sp, cp * cp);
    let [d_sym, d_lo, d_hi] = spectral.beat_deltas();
    let kf = k as f64;
    let cos_sym = (kf * d_sym / params.gamma).cos();
    let cos_lo = (kf * d_lo / params.gamma).cos();
    let cos_hi = (kf * d_hi / params.gamma).cos();

    let total = params.total_excitation();
    let constant = 1.0 + c2 * c2 + s2 * s2;
    let shared = constant + 2.0 * s2 * c2 * cos_sym;
    let split = 2.0 * c2 * cos_lo + 2.0 * s2 * cos_hi;
    [
        0.25 * total * (shared + split),
        0.25 * total * (shared - split),
        total * c2 * s2 * (1.0 - cos_sym),
    ]
}

/// Long-time limit of `mean_n3`: `|alpha|^2 cos^2(phi) sin^2(phi)`.
pub fn steady_mean_n3(params: &SystemParams, spectral: &SpectralData) -> f64 {
    let (sp, cp) = (spectral.phi.sin(), spectral.phi.cos());
    params.total_excitation() * cp * cp * sp * sp
}

/// Time at which every decaying beat envelope has fallen below `exp(-50)`:
/// `gamma t = 50 / (1 - cos(delta_min / gamma))` for the smallest nonzero
/// beat. `None` when no beat decays (fully degenerate spectrum).
pub fn steady_time(params: &SystemParams, spectral: &SpectralData) -> Option<f64> {
    let delta_min = spectral.min_nonzero_beat()?;
    let drop = 1.0 - (delta_min / params.gamma).cos();
    if drop <= 0.0 {
        // delta/gamma on a 2 pi lattice: that beat never damps
        return None;
    }
    Some(50.0 / (drop * params.gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::effective_frequencies;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn params(omega: f64, lambda: f64, g: f64, gamma: f64, alpha: f64) -> SystemParams {
        SystemParams::new(omega, lambda, g, gamma, Complex64::new(alpha, 0.0)).unwrap()
    }

    fn fig_params(g: f64) -> SystemParams {
        params(4.0, 0.5, g, 10.0, 4.0)
    }

    #[test]
    fn rotated_amplitudes_no_mode3_coupling() {
        let p = fig_params(0.0);
        let s = effective_frequencies(&p);
        let triple = rotated_initial_amplitudes(&p, &s);
        assert_abs_diff_eq!(triple.beta1.re, 4.0 / SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(triple.beta2.re, 4.0 / SQRT_2, epsilon = 1e-14);
        assert_eq!(triple.beta3, Complex64::ZERO);
    }

    #[test]
    fn rotated_amplitudes_reference_value() {
        // beta3 = -4 sin(0.615480) / sqrt(2) = -4 / sqrt(6)
        let p = fig_params(0.5);
        let s = effective_frequencies(&p);
        let triple = rotated_initial_amplitudes(&p, &s);
        assert_abs_diff_eq!(triple.beta3.re, -4.0 / 6.0f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(triple.beta3.re, -1.632_993_161_855, epsilon = 1e-10);
    }

    #[test]
    fn rotated_amplitudes_conserve_excitation() {
        for g in [0.0, 0.1, 0.5, 1.0, -0.7] {
            let p = fig_params(g);
            let s = effective_frequencies(&p);
            let triple = rotated_initial_amplitudes(&p, &s);
            assert_abs_diff_eq!(triple.total(), 16.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn damping_factor_at_time_zero() {
        for delta in [0.0, 0.3, -1.5, 40.0] {
            assert_eq!(damping_factor(delta, 10.0, 0.0), 2.0);
        }
    }

    #[test]
    fn damping_factor_zero_beat() {
        for t in [0.0, 0.5, 3.0, 100.0] {
            assert_eq!(damping_factor(0.0, 10.0, t), 2.0);
        }
    }

    #[test]
    fn damping_factor_matches_complex_form() {
        // independent evaluation of exp(-gamma t) *
        // (exp(gamma t e^{i delta/gamma}) + exp(gamma t e^{-i delta/gamma}))
        let complex_form = |delta: f64, gamma: f64, t: f64| -> f64 {
            let u = Complex64::new(0.0, delta / gamma).exp();
            let total = (u * gamma * t).exp() + (u.conj() * gamma * t).exp();
            ((-gamma * t).exp() * total).re
        };
        for (delta, gamma, t) in
            [(1.5, 10.0, 1.0), (0.7, 3.0, 2.5), (-2.2, 50.0, 0.4), (4.0, 10.0, 3.0)]
        {
            let direct = complex_form(delta, gamma, t);
            assert_abs_diff_eq!(damping_factor(delta, gamma, t), direct, epsilon = 1e-13);
        }
    }

    #[test]
    fn mean_values_at_time_zero() {
        for g in [0.0, 0.1, 0.5, 1.0] {
            let p = fig_params(g);
            let s = effective_frequencies(&p);
            let [n1, n2, n3] = mean_occupations(&p, &s, 0.0);
            assert_abs_diff_eq!(n1, 16.0, epsilon = 1e-12);
            assert_abs_diff_eq!(n2, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(n3, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn mode3_reaches_steady_value() {
        let p = fig_params(0.5);
        let s = effective_frequencies(&p);
        let t_inf = steady_time(&p, &s).unwrap();
        let expected = steady_mean_n3(&p, &s);
        assert_abs_diff_eq!(mean_n3(&p, &s, t_inf), expected, epsilon = 1e-9);
        // and the value is approached, not crossed forever after
        assert_abs_diff_eq!(mean_n3(&p, &s, 1.5 * t_inf), expected, epsilon = 1e-9);
    }

    #[test]
    fn no_mode3_coupling_reduction() {
        // g = 0: mode 3 stays empty and modes 1-2 exchange at beat 2 lambda
        let p = params(4.0, 0.7, 0.0, 10.0, 2.0);
        let s = effective_frequencies(&p);
        assert_abs_diff_eq!(s.omega_minus - s.omega_upper, -1.4, epsilon = 1e-14);
        for i in 0..50 {
            let t = 0.1 * i as f64;
            assert_eq!(mean_n3(&p, &s, t), 0.0);
            let expected_n1 =
                0.25 * 4.0 * (2.0 + damping_factor(-1.4, p.gamma, t));
            assert_abs_diff_eq!(mean_n1(&p, &s, t), expected_n1, epsilon = 1e-12);
        }
    }

    #[test]
    fn per_k_initial_condition() {
        let p = fig_params(0.5);
        let s = effective_frequencies(&p);
        let [n1, n2, n3] = per_k_expectations(&p, &s, 0);
        assert_abs_diff_eq!(n1, 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n2, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n3, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn steady_time_none_when_fully_degenerate() {
        let p = params(4.0, 0.0, 0.0, 10.0, 1.0);
        let s = effective_frequencies(&p);
        assert_eq!(steady_time(&p, &s), None);
    }

    proptest! {
        #[test]
        fn conservation_identity(
            w in 0.5f64..10.0,
            l in -2.0f64..2.0,
            g in -2.0f64..2.0,
            gamma in 0.5f64..200.0,
            t in 0.0f64..40.0,
        ) {
            let p = params(w, l, g, gamma, 4.0);
            let s = effective_frequencies(&p);
            let [n1, n2, n3] = mean_occupations(&p, &s, t);
            prop_assert!((n1 + n2 + n3 - 16.0).abs() <= 1e-12);
        }

        #[test]
        fn per_k_conservation(
            w in 0.5f64..10.0,
            l in -2.0f64..2.0,
            g in -2.0f64..2.0,
            k in 0u64..4000,
        ) {
            let p = params(w, l, g, 10.0, 4.0);
            let s = effective_frequencies(&p);
            let [n1, n2, n3] = per_k_expectations(&p, &s, k);
            prop_assert!((n1 + n2 + n3 - 16.0).abs() <= 1e-12);
        }

        #[test]
        fn occupations_within_bounds(
            w in 0.5f64..10.0,
            l in -2.0f64..2.0,
            g in -2.0f64..2.0,
            gamma in 0.5f64..200.0,
            t in 0.0f64..40.0,
        ) {
            let p = params(w, l, g, gamma, 4.0);
            let s = effective_frequencies(&p);
            for n in mean_occupations(&p, &s, t) {
                prop_assert!(n >= -1e-12);
                prop_assert!(n <= 16.0 + 1e-12);
            }
        }

        #[test]
        fn damping_bounded_by_envelope(
            delta in -10.0f64..10.0,
            gamma in 0.5f64..200.0,
            t in 0.0f64..50.0,
        ) {
            let f = damping_factor(delta, gamma, t);
            prop_assert!(f.abs() <= 2.0 + 1e-15);
            prop_assert!(f.abs() <= damping_envelope(delta, gamma, t) + 1e-15);
        }

        #[test]
        fn rotated_amplitude_conservation(
            w in 0.5f64..10.0,
            l in -2.0f64..2.0,
            g in -2.0f64..2.0,
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
        ) {
            let p = SystemParams::new(w, l, g, 10.0, Complex64::new(re, im)).unwrap();
            let s = effective_frequencies(&p);
            let triple = rotated_initial_amplitudes(&p, &s);
            prop_assert!((triple.total() - p.total_excitation()).abs() <= 1e-12);
        }
    }
}
