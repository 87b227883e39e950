//! Benchmark-only crate; see the `benches/` directory.
//!
//! Shared helpers for constructing benchmark scenarios.

use num_complex::Complex64;
use triosc::SystemParams;

/// The middle figure-family parameter set, the workhorse benchmark case.
pub fn reference_params(gamma: f64, alpha: f64) -> SystemParams {
    SystemParams::new(4.0, 0.5, 0.5, gamma, Complex64::new(alpha, 0.0))
        .expect("valid benchmark parameters")
}

/// Uniform grid on `[0, t_max]`.
pub fn grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| t_max * i as f64 / (steps - 1) as f64)
        .collect()
}
