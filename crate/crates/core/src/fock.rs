//! Truncated three-mode Fock-space kinematics.
//!
//! Dense operators and states on a per-mode-truncated basis, used by the
//! brute-force evolution engines. The index layout is fixed: mode 1 is the
//! slowest index, mode 3 the fastest, so a flat index is
//! `(n1 * dims.n2 + n2) * dims.n3 + n3`.
//!
//! Truncated coherent states keep their untruncated normalization and simply
//! lose tail mass above the cutoff; the lost probability (`tail_mass`) is
//! reported, bounded by a leakage budget, and propagated into tolerance
//! accounting instead of being renormalized away.

use crate::spectral::SystemParams;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Default bound on the coherent-state probability mass lost to truncation.
pub const DEFAULT_LEAKAGE_BUDGET: f64 = 1e-8;

/// Largest per-mode dimension considered when searching for a cutoff that
/// meets a leakage budget.
const MAX_MODE_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("mode index must be 1, 2, or 3, got {0}")]
    InvalidMode(usize),
    #[error("per-mode Fock dimensions must all be at least 1")]
    EmptyDims,
    #[error("dimension mismatch: expected total dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(
        "coherent-state tail mass {tail:.3e} exceeds leakage budget {budget:.3e}; \
         mode {mode} needs dimension >= {required_dim}"
    )]
    TailMassExceedsBudget {
        tail: f64,
        budget: f64,
        mode: usize,
        required_dim: usize,
    },
}

/// Per-mode truncation dimensions of the three-mode Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockDims {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl FockDims {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self, FockError> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(FockError::EmptyDims);
        }
        Ok(Self { n1, n2, n3 })
    }

    /// Cubic truncation with the same dimension for every mode.
    pub fn cubic(n: usize) -> Result<Self, FockError> {
        Self::new(n, n, n)
    }

    /// Total dimension `n1 * n2 * n3`.
    pub fn total(&self) -> usize {
        self.n1 * self.n2 * self.n3
    }

    /// Dimension of one mode (1-based index).
    pub fn mode_dim(&self, mode: usize) -> Result<usize, FockError> {
        match mode {
            1 => Ok(self.n1),
            2 => Ok(self.n2),
            3 => Ok(self.n3),
            m => Err(FockError::InvalidMode(m)),
        }
    }

    /// Flat index of the basis state `|n1, n2, n3>`.
    pub fn flat_index(&self, n1: usize, n2: usize, n3: usize) -> usize {
        (n1 * self.n2 + n2) * self.n3 + n3
    }

    /// Occupation numbers of a flat basis index.
    pub fn occupations(&self, index: usize) -> (usize, usize, usize) {
        let n3 = index % self.n3;
        let rest = index / self.n3;
        (rest / self.n2, rest % self.n2, n3)
    }
}

/// Pure state on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub dims: FockDims,
    pub amplitudes: DVector<Complex64>,
    /// Probability mass lost above the truncation cutoff.
    pub tail_mass: f64,
}

impl FockState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Dense operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub dims: FockDims,
    pub matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn new(dims: FockDims, matrix: DMatrix<Complex64>) -> Result<Self, FockError> {
        if matrix.nrows() != dims.total() || matrix.ncols() != dims.total() {
            return Err(FockError::DimensionMismatch {
                expected: dims.total(),
                got: matrix.nrows(),
            });
        }
        Ok(Self { dims, matrix })
    }

    pub fn identity(dims: FockDims) -> Self {
        Self { dims, matrix: DMatrix::identity(dims.total(), dims.total()) }
    }

    pub fn dagger(&self) -> Self {
        Self { dims: self.dims, matrix: self.matrix.adjoint() }
    }

    /// Largest absolute deviation from Hermiticity.
    pub fn hermiticity_residual(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Hermitian, positive, trace-one operator on the truncated space.
///
/// Trace-one holds up to the truncation leakage plus any series tail, which
/// callers track explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dims: FockDims,
    pub matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &FockState) -> Self {
        let matrix = &state.amplitudes * state.amplitudes.adjoint();
        Self { dims: state.dims, matrix }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    /// `tr(rho^2)`; 1 for pure states, smaller for mixtures.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue; the positivity invariant requires it >= -1e-10.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `tr(rho A)`, returned as its real part.
    pub fn expectation(&self, observable: &FockOperator) -> Result<f64, FockError> {
        if observable.dims != self.dims {
            return Err(FockError::DimensionMismatch {
                expected: self.dims.total(),
                got: observable.dims.total(),
            });
        }
        // tr(rho A) = sum_ij rho_ij A_ji
        let mut acc = Complex64::ZERO;
        for j in 0..self.matrix.ncols() {
            for i in 0..self.matrix.nrows() {
                acc += self.matrix[(i, j)] * observable.matrix[(j, i)];
            }
        }
        Ok(acc.re)
    }

    /// Checks the Hermiticity and trace invariants.
    ///
    /// `trace_slack` is the allowed deficit below one (truncation leakage
    /// plus series tail). Positivity is a separate, more expensive check via
    /// [`Self::min_eigenvalue`].
    pub fn validate(&self, trace_slack: f64) -> Result<(), String> {
        let herm = self.hermiticity_residual();
        if herm > 1e-10 {
            return Err(format!("hermiticity residual {herm:.3e} > 1e-10"));
        }
        let trace = self.trace();
        if trace > 1.0 + 1e-12 {
            return Err(format!("trace {trace} exceeds 1 + 1e-12"));
        }
        if trace < 1.0 - trace_slack - 1e-12 {
            return Err(format!(
                "trace deficit {:.3e} exceeds allowed slack {trace_slack:.3e}",
                1.0 - trace
            ));
        }
        Ok(())
    }
}

/// Single-mode lowering matrix: `sqrt(n)` on the superdiagonal.
fn lowering_matrix(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// Annihilation operator of one mode, embedded in the three-mode space via
/// Kronecker products following the fixed index layout.
pub fn annihilation(dims: FockDims, mode: usize) -> Result<FockOperator, FockError> {
    let factor = |m: usize| -> DMatrix<f64> {
        if m == mode {
            lowering_matrix(dims.mode_dim(m).unwrap())
        } else {
            DMatrix::identity(dims.mode_dim(m).unwrap(), dims.mode_dim(m).unwrap())
        }
    };
    if !(1..=3).contains(&mode) {
        return Err(FockError::InvalidMode(mode));
    }
    let real = factor(1).kronecker(&factor(2)).kronecker(&factor(3));
    Ok(FockOperator { dims, matrix: real.map(|x| Complex64::new(x, 0.0)) })
}

/// Number operator `a^dag a` of one mode (diagonal in the Fock basis).
pub fn number_operator(dims: FockDims, mode: usize) -> Result<FockOperator, FockError> {
    let diag = number_diagonal(dims, mode)?;
    let matrix = DMatrix::from_diagonal(&diag.map(|x| Complex64::new(x, 0.0)));
    Ok(FockOperator { dims, matrix })
}

/// Diagonal of the number operator of one mode, as occupation counts per
/// flat basis index.
pub fn number_diagonal(dims: FockDims, mode: usize) -> Result<DVector<f64>, FockError> {
    if !(1..=3).contains(&mode) {
        return Err(FockError::InvalidMode(mode));
    }
    Ok(DVector::from_fn(dims.total(), |idx, _| {
        let (n1, n2, n3) = dims.occupations(idx);
        [n1, n2, n3][mode - 1] as f64
    }))
}

/// Poisson occupation probabilities `|c_n|^2` of a coherent state with the
/// given mean, up to (excluding) `dim`.
fn poisson_pmf(mean: f64, dim: usize) -> Vec<f64> {
    let mut pmf = Vec::with_capacity(dim);
    let mut p = (-mean).exp();
    for n in 0..dim {
        pmf.push(p);
        p *= mean / (n + 1) as f64;
    }
    pmf
}

/// Truncated coherent state `|alpha>` in one mode, vacuum in the others.
///
/// Amplitudes keep the untruncated normalization `exp(-|alpha|^2/2)
/// alpha^n / sqrt(n!)`; the state's norm is `1 - tail_mass`. Fails if the
/// tail mass above the cutoff exceeds `budget`, reporting the dimension that
/// would satisfy it.
pub fn coherent_state(
    dims: FockDims,
    mode: usize,
    alpha: Complex64,
    budget: f64,
) -> Result<FockState, FockError> {
    let dim = dims.mode_dim(mode)?;
    let mean = alpha.norm_sqr();

    let kept: f64 = poisson_pmf(mean, dim).iter().sum();
    let tail = (1.0 - kept).max(0.0);
    if tail > budget {
        // extend the sum until the tail fits to produce the hint
        let mut required = dim;
        let mut running = kept;
        let mut p = poisson_pmf(mean, dim + 1)[dim];
        while 1.0 - running > budget && required < MAX_MODE_DIM {
            running += p;
            p *= mean / (required + 1) as f64;
            required += 1;
        }
        return Err(FockError::TailMassExceedsBudget {
            tail,
            budget,
            mode,
            required_dim: required,
        });
    }

    // c_0 = exp(-|alpha|^2/2), c_n = c_{n-1} * alpha / sqrt(n)
    let mut coeffs = vec![Complex64::ZERO; dim];
    let mut c = Complex64::new((-0.5 * mean).exp(), 0.0);
    for (n, slot) in coeffs.iter_mut().enumerate() {
        *slot = c;
        c *= alpha / ((n + 1) as f64).sqrt();
    }

    let mut amplitudes = DVector::from_element(dims.total(), Complex64::ZERO);
    for (n, cn) in coeffs.iter().enumerate() {
        let idx = match mode {
            1 => dims.flat_index(n, 0, 0),
            2 => dims.flat_index(0, n, 0),
            _ => dims.flat_index(0, 0, n),
        };
        amplitudes[idx] = *cn;
    }
    Ok(FockState { dims, amplitudes, tail_mass: tail })
}

/// Three-mode Hamiltonian matrix in the real Fock basis.
///
/// Assembled entry-by-entry from the occupation numbers; both halves of each
/// hopping pair are written from the same product, so the matrix is
/// symmetric exactly. The couplings conserve total excitation number, which
/// makes the matrix block diagonal over total-occupation sectors.
pub(crate) fn hamiltonian_matrix_real(params: &SystemParams, dims: FockDims) -> DMatrix<f64> {
    let total = dims.total();
    let mut h = DMatrix::<f64>::zeros(total, total);
    for idx in 0..total {
        let (n1, n2, n3) = dims.occupations(idx);
        h[(idx, idx)] = params.omega * (n1 + n2 + n3) as f64;
        // lambda (a1^dag a2 + a2^dag a1): |n1, n2> -> |n1+1, n2-1>
        if n1 + 1 < dims.n1 && n2 >= 1 {
            let to = dims.flat_index(n1 + 1, n2 - 1, n3);
            let amp = params.lambda * ((n1 + 1) as f64 * n2 as f64).sqrt();
            h[(to, idx)] = amp;
            h[(idx, to)] = amp;
        }
        // g (a1^dag a3 + a3^dag a1): |n1, n3> -> |n1+1, n3-1>
        if n1 + 1 < dims.n1 && n3 >= 1 {
            let to = dims.flat_index(n1 + 1, n2, n3 - 1);
            let amp = params.g * ((n1 + 1) as f64 * n3 as f64).sqrt();
            h[(to, idx)] = amp;
            h[(idx, to)] = amp;
        }
        // g (a2^dag a3 + a3^dag a2): |n2, n3> -> |n2+1, n3-1>
        if n2 + 1 < dims.n2 && n3 >= 1 {
            let to = dims.flat_index(n1, n2 + 1, n3 - 1);
            let amp = params.g * ((n2 + 1) as f64 * n3 as f64).sqrt();
            h[(to, idx)] = amp;
            h[(idx, to)] = amp;
        }
    }
    h
}

/// Three-mode Hamiltonian as a Fock operator.
pub fn hamiltonian_fock(params: &SystemParams, dims: FockDims) -> FockOperator {
    FockOperator {
        dims,
        matrix: hamiltonian_matrix_real(params, dims).map(|x| Complex64::new(x, 0.0)),
    }
}

/// `<psi|A|psi>`, returned as its real part.
///
/// For Hermitian observables the imaginary residue is at rounding level;
/// tests assert it stays below 1e-10.
pub fn expectation(state: &FockState, observable: &FockOperator) -> Result<f64, FockError> {
    if observable.dims != state.dims {
        return Err(FockError::DimensionMismatch {
            expected: state.dims.total(),
            got: observable.dims.total(),
        });
    }
    Ok(state.amplitudes.dotc(&(&observable.matrix * &state.amplitudes)).re)
}
