use std::path::Path;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    GenAlpha,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Initial {
    Zero,
    Steady,
}

/// Settings shared by the commands, read from a TOML file. Command-line
/// flags override individual values.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Target asymptotic error of the periodic state.
    pub tolerance: f64,
    /// Time step; when absent the period is split into `steps_per_cycle`.
    pub dt: Option<f64>,
    pub steps_per_cycle: usize,
    /// Number of simulated cycles.
    pub cycles: usize,
    /// Spectral radius at infinity of the generalized-α method.
    pub rho_inf: f64,
    /// Errors below this are left out of the time-constant fit.
    pub error_floor: f64,
    pub solver: Solver,
    pub initial: Initial,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: 0.01,
            dt: None,
            steps_per_cycle: 1000,
            cycles: 30,
            rho_inf: 0.5,
            error_floor: 1e-6,
            solver: Solver::GenAlpha,
            initial: Initial::Zero,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(vascinit::Error::from)?;
                toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => Self::default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        for (name, v) in [("tolerance", self.tolerance), ("error_floor", self.error_floor)] {
            if !(v > 0.0 && v < 1.0) {
                return bad(format!("{name} = {v} must lie in (0, 1)"));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("dt = {dt} must be positive"));
            }
        }
        if self.steps_per_cycle < 2 || self.cycles == 0 {
            return bad("steps_per_cycle must be at least 2 and cycles at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.rho_inf) {
            return bad(format!("rho_inf = {} must lie in [0, 1]", self.rho_inf));
        }
        Ok(())
    }

    pub fn dt_for(&self, period: f64) -> f64 {
        self.dt.unwrap_or(period / self.steps_per_cycle as f64)
    }
}
