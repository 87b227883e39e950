//! Coherent-amplitude reduction of the Milburn dynamics.
//!
//! The Hamiltonian is quadratic and number conserving, so a product of
//! coherent states stays a product of coherent states under every unitary
//! kick; the amplitudes just evolve by `exp(-i M k / gamma)` with `M` the
//! 3x3 single-particle matrix. Per-kick occupations are `|beta_j(k)|^2` and
//! the Milburn average is their Poisson-weighted sum. Nothing here touches
//! Fock space or the closed-form angles, which makes this engine the primary
//! cross-check for the `analytic` module.

use super::poisson::{poisson_kmax, poisson_weights};
use super::{validate_times, Engine, EvolveError, TimeSeries};
use crate::spectral::{single_particle_matrix, SystemParams};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

/// Guard on the number of series terms for this engine.
const MAX_TERMS: usize = 50_000_000;

/// Eigendecomposition of the single-particle matrix applied to the initial
/// amplitude vector `(alpha, 0, 0)`.
struct AmplitudeEvolution {
    frequencies: Vector3<f64>,
    modes: Matrix3<f64>,
    /// Initial amplitudes projected onto the eigenbasis.
    projection: Vector3<Complex64>,
}

impl AmplitudeEvolution {
    fn new(params: &SystemParams) -> Self {
        let eig = single_particle_matrix(params).symmetric_eigen();
        // (Q^T alpha e_1)_m = alpha Q_{0m}
        let projection =
            Vector3::from_fn(|m, _| params.alpha * eig.eigenvectors[(0, m)]);
        Self { frequencies: eig.eigenvalues, modes: eig.eigenvectors, projection }
    }

    /// Amplitudes `beta(t) = exp(-i M t) (alpha, 0, 0)`.
    fn amplitudes(&self, t: f64) -> Vector3<Complex64> {
        let phased = Vector3::from_fn(|m, _| {
            self.projection[m] * Complex64::new(0.0, -self.frequencies[m] * t).exp()
        });
        Vector3::from_fn(|j, _| {
            (0..3).map(|m| phased[m] * self.modes[(j, m)]).sum()
        })
    }

    fn occupations(&self, t: f64) -> [f64; 3] {
        let beta = self.amplitudes(t);
        [beta[0].norm_sqr(), beta[1].norm_sqr(), beta[2].norm_sqr()]
    }
}

/// Occupations `|beta_j(k/gamma)|^2` of the k-th unitary kick, for
/// `k = 0..=k_max`.
pub fn coherent_occupations_per_k(params: &SystemParams, k_max: usize) -> Vec<[f64; 3]> {
    let evolution = AmplitudeEvolution::new(params);
    (0..=k_max)
        .map(|k| evolution.occupations(k as f64 / params.gamma))
        .collect()
}

/// Mean photon numbers at time `t` from the Poisson-weighted kick series,
/// truncated so the neglected mass is below `tol`.
pub fn coherent_oracle(
    params: &SystemParams,
    t: f64,
    tol: f64,
) -> Result<[f64; 3], EvolveError> {
    validate_times(std::slice::from_ref(&t))?;
    let truncation = poisson_kmax(params.gamma * t, tol)?;
    if truncation.k_max > MAX_TERMS {
        return Err(EvolveError::SeriesTooLong { needed: truncation.k_max, cap: MAX_TERMS });
    }
    let table = coherent_occupations_per_k(params, truncation.k_max);
    let weights = poisson_weights(truncation.mean, truncation.k_max);
    Ok(weighted_occupations(&table, &weights))
}

/// Series evaluation over a whole grid, sharing one per-kick table.
pub fn coherent_series(
    params: &SystemParams,
    times: &[f64],
    tol: f64,
) -> Result<TimeSeries, EvolveError> {
    validate_times(times)?;
    let max_t = times.iter().copied().fold(0.0, f64::max);
    let truncation = poisson_kmax(params.gamma * max_t, tol)?;
    if truncation.k_max > MAX_TERMS {
        return Err(EvolveError::SeriesTooLong { needed: truncation.k_max, cap: MAX_TERMS });
    }
    let table = coherent_occupations_per_k(params, truncation.k_max);

    let mut n1 = Vec::with_capacity(times.len());
    let mut n2 = Vec::with_capacity(times.len());
    let mut n3 = Vec::with_capacity(times.len());
    for &t in times {
        let weights = poisson_weights(params.gamma * t, truncation.k_max);
        let [a, b, c] = weighted_occupations(&table, &weights);
        n1.push(a);
        n2.push(b);
        n3.push(c);
    }
    Ok(TimeSeries {
        engine: Engine::CoherentOracle,
        params: *params,
        times: times.to_vec(),
        n1,
        n2,
        n3,
    })
}

/// Pure Schrodinger occupations `|(exp(-i M t) (alpha, 0, 0))_j|^2`, the
/// unitary-limit oracle.
pub fn schrodinger_occupations(params: &SystemParams, t: f64) -> [f64; 3] {
    AmplitudeEvolution::new(params).occupations(t)
}

fn weighted_occupations(table: &[[f64; 3]], weights: &[f64]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (occ, w) in table.iter().zip(weights) {
        out[0] += w * occ[0];
        out[1] += w * occ[1];
        out[2] += w * occ[2];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::spectral::effective_frequencies;
    use approx::assert_abs_diff_eq;

    fn params(g: f64, gamma: f64, alpha: f64) -> SystemParams {
        SystemParams::new(4.0, 0.5, g, gamma, Complex64::new(alpha, 0.0)).unwrap()
    }

    #[test]
    fn initial_condition() {
        let [n1, n2, n3] = coherent_oracle(&params(0.5, 10.0, 4.0), 0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(n1, 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n2, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n3, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn uncoupled_occupations_are_static() {
        let p = SystemParams::new(4.0, 0.0, 0.0, 10.0, Complex64::new(2.0, 1.0)).unwrap();
        for t in [0.0, 0.7, 3.0, 12.0] {
            let [n1, n2, n3] = coherent_oracle(&p, t, 1e-12).unwrap();
            assert_abs_diff_eq!(n1, 5.0, epsilon = 1e-10);
            assert_abs_diff_eq!(n2, 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(n3, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn matches_analytic_at_reference_point() {
        let p = params(0.5, 10.0, 4.0);
        let s = effective_frequencies(&p);
        let oracle = coherent_oracle(&p, 2.0, 1e-12).unwrap();
        let closed = analytic::mean_occupations(&p, &s, 2.0);
        for (a, b) in oracle.iter().zip(closed) {
            assert_abs_diff_eq!(a, &b, epsilon = 1e-8);
        }
    }

    #[test]
    fn per_kick_table_matches_analytic_per_k() {
        let p = params(0.5, 10.0, 4.0);
        let s = effective_frequencies(&p);
        let table = coherent_occupations_per_k(&p, 10);
        for (k, occ) in table.iter().enumerate() {
            let expected = analytic::per_k_expectations(&p, &s, k as u64);
            for (a, b) in occ.iter().zip(expected) {
                assert_abs_diff_eq!(a, &b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn kick_occupations_match_rotated_amplitudes_at_t0() {
        // non-degenerate spectrum, so normal-mode weights are unambiguous
        let p = params(0.3, 10.0, 4.0);
        let s = effective_frequencies(&p);
        let triple = analytic::rotated_initial_amplitudes(&p, &s);
        // the eigenbasis projection redistributes |alpha|^2 exactly like the
        // two-rotation picture: sorted initial normal-mode weights agree
        let evolution = AmplitudeEvolution::new(&p);
        let mut from_eigen: Vec<f64> =
            evolution.projection.iter().map(|c| c.norm_sqr()).collect();
        let mut from_rotations: Vec<f64> = triple.occupations().to_vec();
        from_eigen.sort_by(f64::total_cmp);
        from_rotations.sort_by(f64::total_cmp);
        for (a, b) in from_eigen.iter().zip(from_rotations) {
            assert_abs_diff_eq!(a, &b, epsilon = 1e-10);
        }
    }

    #[test]
    fn schrodinger_conserves_total() {
        let p = params(1.0, 10.0, 4.0);
        for t in [0.0, 0.3, 1.7, 9.2] {
            let occ = schrodinger_occupations(&p, t);
            assert_abs_diff_eq!(occ.iter().sum::<f64>(), 16.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn series_matches_pointwise_oracle() {
        let p = params(1.0, 100.0, 4.0);
        let times: Vec<f64> = (0..20).map(|i| 0.15 * i as f64).collect();
        let series = coherent_series(&p, &times, 1e-12).unwrap();
        for (i, &t) in times.iter().enumerate() {
            let point = coherent_oracle(&p, t, 1e-12).unwrap();
            // pointwise evaluation truncates earlier; they differ by the
            // residual tail mass times |alpha|^2
            for (a, b) in series.occupations_at(i).iter().zip(point) {
                assert_abs_diff_eq!(a, &b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_times() {
        let p = params(0.5, 10.0, 4.0);
        assert!(matches!(
            coherent_oracle(&p, -1.0, 1e-12),
            Err(EvolveError::InvalidTime(_))
        ));
        assert!(matches!(
            coherent_series(&p, &[0.0, 2.0, 1.0], 1e-12),
            Err(EvolveError::InvalidTime(_))
        ));
    }
}
