//! Second-order (Lindblad-form) integrator.
//!
//! The generator is the second-order truncation of the decoherence map,
//!
//! ```text
//! rho_dot = -i [H, rho] - 1/(2 gamma) [H, [H, rho]]
//! ```
//!
//! integrated by classical fixed-step RK4 with step-halving verification.
//! The state is stepped in the eigenbasis of H, where both commutators are
//! elementwise in the matrix entries; RK4 applied to a linear system is a
//! polynomial in the generator, so this is step-for-step the same scheme as
//! stepping in the Fock basis, at O(d^2) per stage instead of O(d^3). The
//! equivalence of the two right-hand sides is asserted in tests.
//!
//! Trace renormalization is off: the drift is monitored and reported, never
//! hidden.

use super::fock_series::ModeSpace;
use super::{validate_times, Engine, EvolveError, TimeSeries};
use crate::fock::{number_diagonal, DensityMatrix, FockDims, FockOperator};
use crate::spectral::SystemParams;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Outputs must move by less than this when the step is halved.
const HALVING_TOL: f64 = 1e-6;

/// Right-hand side `-i [H, rho] - 1/(2 gamma) [H, [H, rho]]`.
///
/// The double-commutator coefficient is the Taylor coefficient of the
/// decoherence map at second order; some texts absorb the 1/2 into gamma.
/// The anti-Hermitian residue of the result is at rounding level and its
/// trace vanishes, both asserted in tests.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    hamiltonian: &FockOperator,
    gamma: f64,
) -> Result<DensityMatrix, EvolveError> {
    if rho.dims != hamiltonian.dims {
        return Err(crate::fock::FockError::DimensionMismatch {
            expected: rho.dims.total(),
            got: hamiltonian.dims.total(),
        }
        .into());
    }
    let h = &hamiltonian.matrix;
    let comm = h * &rho.matrix - &rho.matrix * h;
    let double = h * &comm - &comm * h;
    let minus_i = Complex64::new(0.0, -1.0);
    let matrix = comm.map(|c| minus_i * c) - double.map(|c| c / (2.0 * gamma));
    Ok(DensityMatrix { dims: rho.dims, matrix })
}

/// Result of [`integrate_lindblad`].
#[derive(Debug, Clone)]
pub struct LindbladRun {
    pub series: TimeSeries,
    /// Fine step actually used (half the requested step).
    pub step: f64,
    /// Largest output change between the requested step and its half.
    pub halving_delta: f64,
    /// Largest drift of `tr rho` from its initial value over the samples.
    pub max_trace_drift: f64,
}

/// Integrates the second-order equation over `times` with fixed step at most
/// `step`, then repeats at half the step and verifies the outputs moved by
/// less than 1e-6; the half-step run is returned. The density matrix is
/// re-symmetrized after every step.
pub fn integrate_lindblad(
    params: &SystemParams,
    dims: FockDims,
    times: &[f64],
    step: f64,
    budget: f64,
) -> Result<LindbladRun, EvolveError> {
    validate_times(times)?;
    if !step.is_finite() || step <= 0.0 {
        return Err(EvolveError::InvalidStep(step));
    }
    let space = ModeSpace::new(params, dims, budget)?;
    let numbers = transformed_numbers(&space)?;

    let coarse = run_fixed_step(&space, params.gamma, &numbers, times, step);
    let fine = run_fixed_step(&space, params.gamma, &numbers, times, step / 2.0);

    let mut halving_delta = 0.0f64;
    for (a, b) in coarse.occupations.iter().zip(&fine.occupations) {
        for (x, y) in a.iter().zip(b) {
            halving_delta = halving_delta.max((x - y).abs());
        }
    }
    if halving_delta > HALVING_TOL {
        return Err(EvolveError::StepNotConverged { delta: halving_delta, tol: HALVING_TOL });
    }

    let mut n = [const { Vec::new() }; 3];
    for occ in &fine.occupations {
        for (series, value) in n.iter_mut().zip(occ) {
            series.push(*value);
        }
    }
    let [n1, n2, n3] = n;
    Ok(LindbladRun {
        series: TimeSeries {
            engine: Engine::LindbladRk4,
            params: *params,
            times: times.to_vec(),
            n1,
            n2,
            n3,
        },
        step: step / 2.0,
        halving_delta,
        max_trace_drift: fine.max_trace_drift,
    })
}

/// Number operators conjugated into the eigenbasis, `V^T diag(n_j) V`.
fn transformed_numbers(space: &ModeSpace) -> Result<[DMatrix<f64>; 3], EvolveError> {
    let mut out = Vec::with_capacity(3);
    for mode in 1..=3 {
        let diag = number_diagonal(space.dims, mode)?;
        let mut scaled = space.vectors.clone();
        for (mut row, n) in scaled.row_iter_mut().zip(diag.iter()) {
            row *= *n;
        }
        out.push(space.vectors.transpose() * scaled);
    }
    Ok(out.try_into().expect("three modes"))
}

struct RawRun {
    occupations: Vec<[f64; 3]>,
    max_trace_drift: f64,
}

fn run_fixed_step(
    space: &ModeSpace,
    gamma: f64,
    numbers: &[DMatrix<f64>; 3],
    times: &[f64],
    step: f64,
) -> RawRun {
    let d = space.initial.len();

    // elementwise generator in the eigenbasis
    let mut generator = vec![Complex64::ZERO; d * d];
    for j in 0..d {
        for i in 0..d {
            let delta = space.energies[i] - space.energies[j];
            generator[j * d + i] = Complex64::new(-delta * delta / (2.0 * gamma), -delta);
        }
    }

    // rho(0) = |psi~0><psi~0|, column-major
    let mut rho = vec![Complex64::ZERO; d * d];
    for j in 0..d {
        for i in 0..d {
            rho[j * d + i] = space.initial[i] * space.initial[j].conj();
        }
    }
    let trace0: f64 = (0..d).map(|i| rho[i * d + i].re).sum();

    let mut stage = vec![Complex64::ZERO; d * d];
    let mut slope = vec![Complex64::ZERO; d * d];
    let mut accum = vec![Complex64::ZERO; d * d];

    let mut occupations = Vec::with_capacity(times.len());
    let mut max_trace_drift = 0.0f64;
    let mut now = 0.0;
    for &t in times {
        let span = t - now;
        if span > 0.0 {
            let count = (span / step).ceil() as usize;
            let h = span / count as f64;
            for _ in 0..count {
                rk4_step(&mut rho, &generator, h, &mut stage, &mut slope, &mut accum);
                resymmetrize(&mut rho, d);
            }
            now = t;
        }
        let trace: f64 = (0..d).map(|i| rho[i * d + i].re).sum();
        max_trace_drift = max_trace_drift.max((trace - trace0).abs());
        let mut occ = [0.0; 3];
        for (slot, matrix) in occ.iter_mut().zip(numbers) {
            *slot = rho
                .iter()
                .zip(matrix.as_slice())
                .map(|(r, n)| r.re * n)
                .sum();
        }
        occupations.push(occ);
    }
    RawRun { occupations, max_trace_drift }
}

fn rk4_step(
    rho: &mut [Complex64],
    generator: &[Complex64],
    h: f64,
    stage: &mut [Complex64],
    slope: &mut [Complex64],
    accum: &mut [Complex64],
) {
    let half = 0.5 * h;
    // k1
    for ((s, g), r) in slope.iter_mut().zip(generator).zip(rho.iter()) {
        *s = g * r;
    }
    accum.copy_from_slice(slope);
    for ((st, r), s) in stage.iter_mut().zip(rho.iter()).zip(slope.iter()) {
        *st = r + half * s;
    }
    // k2
    for ((s, g), st) in slope.iter_mut().zip(generator).zip(stage.iter()) {
        *s = g * st;
    }
    for (a, s) in accum.iter_mut().zip(slope.iter()) {
        *a += 2.0 * s;
    }
    for ((st, r), s) in stage.iter_mut().zip(rho.iter()).zip(slope.iter()) {
        *st = r + half * s;
    }
    // k3
    for ((s, g), st) in slope.iter_mut().zip(generator).zip(stage.iter()) {
        *s = g * st;
    }
    for (a, s) in accum.iter_mut().zip(slope.iter()) {
        *a += 2.0 * s;
    }
    for ((st, r), s) in stage.iter_mut().zip(rho.iter()).zip(slope.iter()) {
        *st = r + h * s;
    }
    // k4
    for ((s, g), st) in slope.iter_mut().zip(generator).zip(stage.iter()) {
        *s = g * st;
    }
    for (a, s) in accum.iter_mut().zip(slope.iter()) {
        *a += s;
    }
    let sixth = h / 6.0;
    for (r, a) in rho.iter_mut().zip(accum.iter()) {
        *r += sixth * a;
    }
}

fn resymmetrize(rho: &mut [Complex64], d: usize) {
    for j in 0..d {
        rho[j * d + j] = Complex64::new(rho[j * d + j].re, 0.0);
        for i in (j + 1)..d {
            let avg = 0.5 * (rho[j * d + i] + rho[i * d + j].conj());
            rho[j * d + i] = avg;
            rho[i * d + j] = avg.conj();
        }
    }
}
