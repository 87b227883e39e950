//! Cross-engine validation: invariant checks with measured maxima.
//!
//! Failures are report content, not errors — the caller decides the exit
//! code. A fault-injection mode deliberately corrupts the effective
//! frequency used for the mode-3 analytic curve, as a negative control that
//! the conservation check actually bites.

use crate::config::ScenarioConfig;
use crate::scenario::ScenarioError;
use triosc::analytic;
use triosc::evolve::{coherent_series, integrate_lindblad, FockSeriesEngine};
use triosc::spectral::{effective_frequencies, single_particle_matrix};
use triosc::{Engine, TimeSeries};

/// Deliberate corruption applied inside the validation pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaultInjection {
    #[default]
    None,
    /// Shifts the lower symmetric-sector frequency by 1e-3, but only in the
    /// mode-3 curve, so conservation must break.
    SkewOmegaLower,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status}  {:<38} measured {:>12.4e}  threshold {:>9.1e}{}\n",
                check.name,
                check.measured,
                check.threshold,
                if check.detail.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", check.detail)
                }
            ));
        }
        let summary = if self.all_passed() { "all checks passed" } else { "CHECKS FAILED" };
        out.push_str(&format!("{summary}\n"));
        out
    }

    fn push(&mut self, name: &str, measured: f64, threshold: f64, detail: String) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: measured <= threshold,
            measured,
            threshold,
            detail,
        });
    }
}

fn max_deviation(a: &TimeSeries, b: &TimeSeries) -> (f64, f64) {
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
    (max_abs, worst_t)
}

fn bounds_excess(series: &TimeSeries, budget: f64) -> f64 {
    let cap = series.params.total_excitation() + budget;
    let mut excess = 0.0f64;
    for i in 0..series.len() {
        for n in series.occupations_at(i) {
            excess = excess.max(-n).max(n - cap);
        }
    }
    excess.max(0.0)
}

/// Runs the invariant and engine-equivalence suite for one scenario.
pub fn validate_scenario(
    config: &ScenarioConfig,
    fault: FaultInjection,
) -> Result<ValidationReport, ScenarioError> {
    let mut report = ValidationReport::default();
    let params = &config.params;
    let times = config.time_grid();
    let spectral = effective_frequencies(params);

    // eigenvalue equivalence of the two spectral routes
    let eig = single_particle_matrix(params).symmetric_eigen();
    let mut numeric: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    numeric.sort_by(f64::total_cmp);
    let mut formula = [spectral.omega_minus, spectral.omega_lower, spectral.omega_upper];
    formula.sort_by(f64::total_cmp);
    let eig_dev = formula
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.push("spectral eigenvalue equivalence", eig_dev, 1e-10, String::new());

    // analytic curves, with the fault applied to the mode-3 path only
    let mut skewed = spectral;
    if fault == FaultInjection::SkewOmegaLower {
        skewed.omega_lower += 1e-3;
    }
    let mut analytic_curves = TimeSeries {
        engine: Engine::Analytic,
        params: *params,
        times: times.clone(),
        n1: Vec::with_capacity(times.len()),
        n2: Vec::with_capacity(times.len()),
        n3: Vec::with_capacity(times.len()),
    };
    for &t in &times {
        analytic_curves.n1.push(analytic::mean_n1(params, &spectral, t));
        analytic_curves.n2.push(analytic::mean_n2(params, &spectral, t));
        analytic_curves.n3.push(analytic::mean_n3(params, &skewed, t));
    }
    report.push(
        "conservation (analytic)",
        analytic_curves.conservation_residual(),
        1e-12,
        String::new(),
    );
    report.push(
        "bounds (analytic)",
        bounds_excess(&analytic_curves, config.leakage_budget),
        1e-9,
        String::new(),
    );

    if config.engines.contains(&Engine::CoherentOracle) {
        let coherent = coherent_series(params, &times, config.tol)?;
        report.push(
            "conservation (coherent oracle)",
            coherent.conservation_residual(),
            1e-8,
            String::new(),
        );
        report.push(
            "bounds (coherent oracle)",
            bounds_excess(&coherent, config.leakage_budget),
            1e-9,
            String::new(),
        );
        let (dev, worst_t) = max_deviation(&analytic_curves, &coherent);
        report.push(
            "engine agreement analytic/coherent",
            dev,
            1e-8,
            format!("worst t = {worst_t:.4}"),
        );
    }

    if config.engines.contains(&Engine::FockSeries) {
        let dims = config.dims.expect("validated: fock requires dims");
        let engine = FockSeriesEngine::new(params, dims, config.leakage_budget)?;
        let fock = engine.series(&times, config.tol)?;
        let leakage = engine.leakage();
        // the truncated state starts short of |alpha|^2 by at most the
        // leaked mean, bounded by the largest representable total quanta
        let quanta_cap = (dims.n1 + dims.n2 + dims.n3 - 3) as f64;
        report.push(
            "conservation (fock series)",
            fock.conservation_residual(),
            1e-8 + quanta_cap * leakage,
            format!("leakage {leakage:.2e}"),
        );
        let (dev, worst_t) = max_deviation(&analytic_curves, &fock);
        report.push(
            "engine agreement analytic/fock",
            dev,
            1e-6 + params.total_excitation() * leakage,
            format!("worst t = {worst_t:.4}, leakage {leakage:.2e}"),
        );
    }

    if config.engines.contains(&Engine::LindbladRk4) {
        let dims = config.dims.expect("validated: lindblad requires dims");
        let run = integrate_lindblad(
            params,
            dims,
            &times,
            config.lindblad_step,
            config.leakage_budget,
        )?;
        let quanta_cap = (dims.n1 + dims.n2 + dims.n3 - 3) as f64;
        report.push(
            "conservation (lindblad rk4)",
            run.series.conservation_residual(),
            1e-6 + quanta_cap * config.leakage_budget,
            format!("trace drift {:.2e}", run.max_trace_drift),
        );
        report.push(
            "step convergence (lindblad rk4)",
            run.halving_delta,
            1e-6,
            format!("fine step {:.2e}", run.step),
        );
    }

    Ok(report)
}
