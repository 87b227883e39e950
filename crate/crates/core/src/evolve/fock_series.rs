//! Exact Milburn series on the truncated Fock space.
//!
//! The solution is `rho(t) = exp(-gamma t) sum_k (gamma t)^k / k!
//! |psi_k><psi_k|` with `|psi_k> = U^k |psi_0>` and `U = exp(-i H / gamma)`.
//! The Hamiltonian is real symmetric in the Fock basis, so one Hermitian
//! eigendecomposition gives every kick state: in the eigenbasis a kick is a
//! diagonal phase. Observables are accumulated per kick without forming the
//! density matrix; the full matrix is materialized only on request.

use super::poisson::{poisson_kmax, poisson_weights};
use super::{validate_times, Engine, EvolveError, SeriesTruncation, TimeSeries};
use crate::fock::{
    coherent_state, hamiltonian_matrix_real, number_diagonal, DensityMatrix, FockDims,
    FockState,
};
use crate::spectral::SystemParams;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Guard on the number of kick states this engine will compute.
const MAX_TERMS: usize = 200_000;

/// Eigendecomposition of the Fock-space Hamiltonian together with the
/// initial state, shared by the series and Lindblad engines.
pub(crate) struct ModeSpace {
    pub dims: FockDims,
    /// Eigenvalues of H.
    pub energies: DVector<f64>,
    /// Orthogonal eigenvector matrix (columns are eigenvectors).
    pub vectors: DMatrix<f64>,
    /// Initial state in the eigenbasis, `V^T psi_0`.
    pub initial: DVector<Complex64>,
    /// Coherent-state probability mass lost to truncation.
    pub leakage: f64,
}

impl ModeSpace {
    pub fn new(
        params: &SystemParams,
        dims: FockDims,
        budget: f64,
    ) -> Result<Self, EvolveError> {
        let psi0 = coherent_state(dims, 1, params.alpha, budget)?;
        let eigen = hamiltonian_matrix_real(params, dims).symmetric_eigen();
        let initial = project_split(&eigen.eigenvectors.transpose(), &psi0.amplitudes);
        Ok(Self {
            dims,
            energies: eigen.eigenvalues,
            vectors: eigen.eigenvectors,
            initial,
            leakage: psi0.tail_mass,
        })
    }
}

/// Real matrix times complex vector via two real matrix-vector products.
fn project_split(m: &DMatrix<f64>, v: &DVector<Complex64>) -> DVector<Complex64> {
    let re = m * v.map(|c| c.re);
    let im = m * v.map(|c| c.im);
    DVector::from_fn(re.len(), |i, _| Complex64::new(re[i], im[i]))
}

/// Milburn-series engine with the eigendecomposition precomputed; reuse one
/// instance to evaluate several times or a whole grid.
pub struct FockSeriesEngine {
    params: SystemParams,
    space: ModeSpace,
    number_diags: [DVector<f64>; 3],
}

impl FockSeriesEngine {
    pub fn new(
        params: &SystemParams,
        dims: FockDims,
        budget: f64,
    ) -> Result<Self, EvolveError> {
        let space = ModeSpace::new(params, dims, budget)?;
        let number_diags = [
            number_diagonal(dims, 1)?,
            number_diagonal(dims, 2)?,
            number_diagonal(dims, 3)?,
        ];
        Ok(Self { params: *params, space, number_diags })
    }

    pub fn dims(&self) -> FockDims {
        self.space.dims
    }

    /// Probability mass the truncated initial state is missing.
    pub fn leakage(&self) -> f64 {
        self.space.leakage
    }

    /// Kick state `|psi_k> = exp(-i k H / gamma) |psi_0>` in the Fock basis.
    pub fn kick_state(&self, k: usize) -> FockState {
        let amplitudes = project_split(&self.space.vectors, &self.eigenbasis_kick(k));
        FockState {
            dims: self.space.dims,
            amplitudes,
            tail_mass: self.space.leakage,
        }
    }

    fn eigenbasis_kick(&self, k: usize) -> DVector<Complex64> {
        let scale = k as f64 / self.params.gamma;
        DVector::from_fn(self.space.initial.len(), |i, _| {
            self.space.initial[i] * Complex64::new(0.0, -self.space.energies[i] * scale).exp()
        })
    }

    /// Per-kick occupations `<psi_k| n_j |psi_k>` for `k = 0..=k_max`.
    pub fn occupations_per_k(&self, k_max: usize) -> Vec<[f64; 3]> {
        (0..=k_max)
            .map(|k| {
                let psi = self.kick_state(k);
                let mut occ = [0.0; 3];
                for (slot, diag) in occ.iter_mut().zip(&self.number_diags) {
                    *slot = psi
                        .amplitudes
                        .iter()
                        .zip(diag.iter())
                        .map(|(a, n)| n * a.norm_sqr())
                        .sum();
                }
                occ
            })
            .collect()
    }

    fn truncation(&self, t: f64, tol: f64) -> Result<SeriesTruncation, EvolveError> {
        let truncation = poisson_kmax(self.params.gamma * t, tol)?;
        if truncation.k_max > MAX_TERMS {
            return Err(EvolveError::SeriesTooLong {
                needed: truncation.k_max,
                cap: MAX_TERMS,
            });
        }
        Ok(truncation)
    }

    /// Mean photon numbers at one time, with the truncation actually used.
    pub fn occupations(
        &self,
        t: f64,
        tol: f64,
    ) -> Result<([f64; 3], SeriesTruncation), EvolveError> {
        validate_times(std::slice::from_ref(&t))?;
        let truncation = self.truncation(t, tol)?;
        let weights = poisson_weights(truncation.mean, truncation.k_max);
        let table = self.occupations_per_k(truncation.k_max);
        let mut out = [0.0; 3];
        for (occ, w) in table.iter().zip(&weights) {
            for (slot, value) in out.iter_mut().zip(occ) {
                *slot += w * value;
            }
        }
        Ok((out, truncation))
    }

    /// Series over a grid, sharing one per-kick table.
    pub fn series(&self, times: &[f64], tol: f64) -> Result<TimeSeries, EvolveError> {
        validate_times(times)?;
        let max_t = times.iter().copied().fold(0.0, f64::max);
        let truncation = self.truncation(max_t, tol)?;
        let table = self.occupations_per_k(truncation.k_max);

        let mut n = [const { Vec::new() }; 3];
        for &t in times {
            let weights = poisson_weights(self.params.gamma * t, truncation.k_max);
            let mut out = [0.0; 3];
            for (occ, w) in table.iter().zip(&weights) {
                for (slot, value) in out.iter_mut().zip(occ) {
                    *slot += w * value;
                }
            }
            for (series, value) in n.iter_mut().zip(out) {
                series.push(value);
            }
        }
        let [n1, n2, n3] = n;
        Ok(TimeSeries {
            engine: Engine::FockSeries,
            params: self.params,
            times: times.to_vec(),
            n1,
            n2,
            n3,
        })
    }

    /// The density matrix `rho(t)` itself, as the weighted sum of kick
    /// projectors. Its trace deficit is the Poisson tail plus leakage.
    pub fn density_matrix(&self, t: f64, tol: f64) -> Result<DensityMatrix, EvolveError> {
        validate_times(std::slice::from_ref(&t))?;
        let truncation = self.truncation(t, tol)?;
        let weights = poisson_weights(truncation.mean, truncation.k_max);
        let total = self.space.dims.total();
        let mut rho = DMatrix::<Complex64>::zeros(total, total);
        for (k, &w) in weights.iter().enumerate() {
            let psi = self.kick_state(k);
            rho.gerc(Complex64::new(w, 0.0), &psi.amplitudes, &psi.amplitudes, Complex64::ONE);
        }
        Ok(DensityMatrix { dims: self.space.dims, matrix: rho })
    }
}

/// One-shot evaluation of the Milburn series density matrix.
pub fn milburn_fock_series(
    params: &SystemParams,
    dims: FockDims,
    t: f64,
    tol: f64,
    budget: f64,
) -> Result<DensityMatrix, EvolveError> {
    FockSeriesEngine::new(params, dims, budget)?.density_matrix(t, tol)
}
