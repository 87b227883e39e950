//! Built-in scenarios reproducing the two figure families.
//!
//! All six share omega = 4, lambda = 0.5, alpha = 4 and sweep the mode-3
//! coupling g over {0.1, 0.5, 1}; the `fig1` family has gamma = 10, `fig2`
//! gamma = 100. Time grid: 1500 points on [0, 30], enough to display
//! several beat periods at these parameters.

use crate::config::{scenario, ScenarioConfig};

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ScenarioConfig,
}

/// The six built-in presets, fig1{a,b,c} then fig2{a,b,c}.
pub fn presets() -> Vec<Preset> {
    let entry = |name, description, g, gamma| Preset {
        name,
        description,
        config: scenario(4.0, 0.5, g, gamma, 4.0),
    };
    vec![
        entry("fig1a", "gamma = 10, weak mode-3 coupling g = 0.1", 0.1, 10.0),
        entry("fig1b", "gamma = 10, g = 0.5 (modes 2 and 3 overlap)", 0.5, 10.0),
        entry("fig1c", "gamma = 10, strong mode-3 coupling g = 1", 1.0, 10.0),
        entry("fig2a", "gamma = 100, weak mode-3 coupling g = 0.1", 0.1, 100.0),
        entry("fig2b", "gamma = 100, g = 0.5 (modes 2 and 3 overlap)", 0.5, 100.0),
        entry("fig2c", "gamma = 100, strong mode-3 coupling g = 1", 1.0, 100.0),
    ]
}

/// Looks up one preset by name.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    presets().into_iter().find(|p| p.name == name).map(|p| p.config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_presets() {
        assert_eq!(presets().len(), 6);
    }

    #[test]
    fn caption_parameters() {
        for p in presets() {
            assert_eq!(p.config.params.omega, 4.0);
            assert_eq!(p.config.params.lambda, 0.5);
            assert_eq!(p.config.params.alpha.re, 4.0);
            assert_eq!(p.config.params.alpha.im, 0.0);
            assert_eq!(p.config.steps, 1500);
            assert_eq!(p.config.t_max, 30.0);
        }
        let by_name = |n| preset(n).unwrap();
        assert_eq!(by_name("fig1a").params.g, 0.1);
        assert_eq!(by_name("fig1b").params.g, 0.5);
        assert_eq!(by_name("fig1c").params.g, 1.0);
        for name in ["fig1a", "fig1b", "fig1c"] {
            assert_eq!(by_name(name).params.gamma, 10.0);
        }
        for name in ["fig2a", "fig2b", "fig2c"] {
            assert_eq!(by_name(name).params.gamma, 100.0);
        }
        assert_eq!(by_name("fig2b").params.g, 0.5);
        assert!(preset("fig3a").is_none());
    }
}
