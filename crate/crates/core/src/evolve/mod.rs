//! Brute-force and approximate evolution engines.
//!
//! Three engines evaluate the same dynamics independently of the closed
//! forms in [`crate::analytic`]:
//!
//! - the coherent-amplitude oracle ([`coherent_oracle`]): the Hamiltonian is
//!   quadratic and number-conserving, so coherent states stay coherent and
//!   the whole Milburn series reduces to 3x3 linear algebra;
//! - the truncated-Fock Poisson series ([`FockSeriesEngine`]): the exact
//!   solution as a Poisson-weighted sum of unitary kicks on the full
//!   truncated space;
//! - the Lindblad integrator ([`integrate_lindblad`]): classical RK4 on the
//!   second-order truncation of the generator, for full-vs-approximate
//!   comparisons.
//!
//! All engines are deterministic: identical inputs yield identical outputs
//! within one build.

mod coherent;
mod fock_series;
mod lindblad;
mod poisson;

pub use coherent::{
    coherent_occupations_per_k, coherent_oracle, coherent_series, schrodinger_occupations,
};
pub use fock_series::{milburn_fock_series, FockSeriesEngine};
pub use lindblad::{integrate_lindblad, lindblad_rhs, LindbladRun};
pub use poisson::{poisson_kmax, poisson_weights, SeriesTruncation};

use crate::analytic;
use crate::fock::FockError;
use crate::spectral::{effective_frequencies, SystemParams};
use thiserror::Error;

/// Default bound on the neglected Poisson tail mass of a truncated series.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),
    #[error("times must be finite, non-negative and non-decreasing; got {0}")]
    InvalidTime(f64),
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("Poisson series needs {needed} terms, over the {cap}-term guard")]
    SeriesTooLong { needed: usize, cap: usize },
    #[error("step halving changed outputs by {delta:.3e} (tolerance {tol:.3e})")]
    StepNotConverged { delta: f64, tol: f64 },
}

/// Which engine produced a time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Analytic,
    CoherentOracle,
    FockSeries,
    LindbladRk4,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Analytic,
        Engine::CoherentOracle,
        Engine::FockSeries,
        Engine::LindbladRk4,
    ];

    /// Short name used in configs and CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::CoherentOracle => "coherent",
            Engine::FockSeries => "fock",
            Engine::LindbladRk4 => "lindblad",
        }
    }

    pub fn from_label(label: &str) -> Option<Engine> {
        Engine::ALL.into_iter().find(|e| e.label() == label)
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Sampled mean photon numbers over a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub engine: Engine,
    pub params: SystemParams,
    pub times: Vec<f64>,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    pub n3: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn occupations_at(&self, index: usize) -> [f64; 3] {
        [self.n1[index], self.n2[index], self.n3[index]]
    }

    /// Largest absolute difference in any mode against another series on the
    /// same time grid.
    pub fn max_abs_difference(&self, other: &TimeSeries) -> f64 {
        assert_eq!(self.len(), other.len(), "series length mismatch");
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for (a, b) in self.occupations_at(i).iter().zip(other.occupations_at(i)) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }

    /// Largest deviation of `n1 + n2 + n3` from `|alpha|^2` over the grid.
    pub fn conservation_residual(&self) -> f64 {
        let total = self.params.total_excitation();
        (0..self.len())
            .map(|i| (self.occupations_at(i).iter().sum::<f64>() - total).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluates the closed forms over a time grid.
pub fn analytic_series(params: &SystemParams, times: &[f64]) -> TimeSeries {
    let spectral = effective_frequencies(params);
    let mut n1 = Vec::with_capacity(times.len());
    let mut n2 = Vec::with_capacity(times.len());
    let mut n3 = Vec::with_capacity(times.len());
    for &t in times {
        let [a, b, c] = analytic::mean_occupations(params, &spectral, t);
        n1.push(a);
        n2.push(b);
        n3.push(c);
    }
    TimeSeries {
        engine: Engine::Analytic,
        params: *params,
        times: times.to_vec(),
        n1,
        n2,
        n3,
    }
}

pub(crate) fn validate_times(times: &[f64]) -> Result<(), EvolveError> {
    let mut prev = 0.0f64;
    for &t in times {
        if !t.is_finite() || t < 0.0 || t < prev {
            return Err(EvolveError::InvalidTime(t));
        }
        prev = t;
    }
    Ok(())
}
