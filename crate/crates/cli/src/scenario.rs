//! Executes the selected engines over a scenario's time grid.

use crate::config::{ConfigError, ScenarioConfig};
use thiserror::Error;
use triosc::evolve::{
    analytic_series, coherent_series, integrate_lindblad, FockSeriesEngine,
};
use triosc::{Engine, EvolveError, FockError, TimeSeries};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] EvolveError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl ScenarioError {
    /// Process exit code: 2 config error, 4 truncation budget exceeded,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) => 2,
            ScenarioError::Engine(EvolveError::Fock(
                FockError::TailMassExceedsBudget { .. },
            )) => 4,
            _ => 1,
        }
    }
}

/// Largest pairwise deviation between two engines' series.
#[derive(Debug, Clone)]
pub struct PairDeviation {
    pub first: Engine,
    pub second: Engine,
    pub max_abs: f64,
    pub worst_t: f64,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub series: Vec<TimeSeries>,
    pub pair_deviations: Vec<PairDeviation>,
    /// Coherent-state truncation leakage, when a Fock-space engine ran.
    pub fock_leakage: Option<f64>,
    /// Diagnostics from the Lindblad integrator, when it ran.
    pub lindblad_step: Option<f64>,
    pub lindblad_halving_delta: Option<f64>,
    pub lindblad_trace_drift: Option<f64>,
}

/// Runs every selected engine over the scenario grid and cross-compares.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput, ScenarioError> {
    let times = config.time_grid();
    let mut output = ScenarioOutput {
        series: Vec::new(),
        pair_deviations: Vec::new(),
        fock_leakage: None,
        lindblad_step: None,
        lindblad_halving_delta: None,
        lindblad_trace_drift: None,
    };

    for engine in &config.engines {
        let series = match engine {
            Engine::Analytic => analytic_series(&config.params, &times),
            Engine::CoherentOracle => coherent_series(&config.params, &times, config.tol)?,
            Engine::FockSeries => {
                let dims = config.dims.expect("validated: fock requires dims");
                let engine =
                    FockSeriesEngine::new(&config.params, dims, config.leakage_budget)?;
                output.fock_leakage = Some(engine.leakage());
                engine.series(&times, config.tol)?
            }
            Engine::LindbladRk4 => {
                let dims = config.dims.expect("validated: lindblad requires dims");
                let run = integrate_lindblad(
                    &config.params,
                    dims,
                    &times,
                    config.lindblad_step,
                    config.leakage_budget,
                )?;
                output.lindblad_step = Some(run.step);
                output.lindblad_halving_delta = Some(run.halving_delta);
                output.lindblad_trace_drift = Some(run.max_trace_drift);
                run.series
            }
        };
        output.series.push(series);
    }

    for i in 0..output.series.len() {
        for j in i + 1..output.series.len() {
            let (a, b) = (&output.series[i], &output.series[j]);
            let mut max_abs = 0.0f64;
            let mut worst_t = 0.0f64;
            for k in 0..a.len() {
                for (x, y) in a.occupations_at(k).iter().zip(b.occupations_at(k)) {
                    let d = (x - y).abs();
                    if d > max_abs {
                        max_abs = d;
                        worst_t = a.times[k];
                    }
                }
            }
            output.pair_deviations.push(PairDeviation {
                first: a.engine,
                second: b.engine,
                max_abs,
                worst_t,
            });
        }
    }
    Ok(output)
}
