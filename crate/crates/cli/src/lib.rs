//! Scenario runner for the three-oscillator intrinsic-decoherence model:
//! config and preset handling, engine execution over a time grid, CSV
//! emission and cross-engine validation reports.

pub mod config;
pub mod csv;
pub mod presets;
pub mod scenario;
pub mod validate;

pub use config::{ConfigError, ScenarioConfig, ScenarioOverrides};
pub use presets::{preset, presets, Preset};
pub use scenario::{run_scenario, ScenarioError, ScenarioOutput};
pub use validate::{validate_scenario, CheckResult, FaultInjection, ValidationReport};

/// Uniform grid of `steps` points covering `[0, t_max]`, endpoints included.
pub fn time_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| t_max * i as f64 / (steps - 1) as f64)
        .collect()
}
