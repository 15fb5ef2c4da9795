//! Experiment configuration: JSON documents and flag overrides.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use onecorr_core::quantum::{Direction, LocalEvolution, PureState};

use crate::error::{CliError, Result};

/// Which estimator evaluates the correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `A(t_i) * B(t_j)` over all pairs from two independent grids.
    Standard,
    /// Ordered pairs `t_j > t_i`, with `B` allowed to see the earlier time.
    General,
}

/// The initial two-qubit state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    Singlet,
    ProductUp,
    /// Eight reals: interleaved real/imaginary parts of the four amplitudes.
    Custom(Vec<f64>),
}

impl StateSpec {
    /// Builds the state; custom amplitudes must be normalized to within
    /// 1e-9 and are renormalized on load, with a warning when the drift is
    /// larger than float dust.
    pub fn build(&self) -> Result<(PureState, Option<String>)> {
        match self {
            StateSpec::Singlet => Ok((PureState::singlet(), None)),
            StateSpec::ProductUp => Ok((PureState::product_up(), None)),
            StateSpec::Custom(values) => {
                if values.len() != 8 {
                    return Err(CliError::config(format!(
                        "custom state needs 8 reals (interleaved re/im), got {}",
                        values.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::config("custom state amplitudes must be finite"));
                }
                let amp = [
                    Complex64::new(values[0], values[1]),
                    Complex64::new(values[2], values[3]),
                    Complex64::new(values[4], values[5]),
                    Complex64::new(values[6], values[7]),
                ];
                let norm_sq: f64 = amp.iter().map(|c| c.norm_sqr()).sum();
                if (norm_sq.sqrt() - 1.0).abs() > 1e-9 {
                    return Err(CliError::config(format!(
                        "custom state amplitudes must be normalized to within 1e-9, |psi| = {}",
                        norm_sq.sqrt()
                    )));
                }
                let warning = if (norm_sq.sqrt() - 1.0).abs() > 1e-12 {
                    Some(format!(
                        "custom state renormalized from |psi| = {:.15}",
                        norm_sq.sqrt()
                    ))
                } else {
                    None
                };
                let state = PureState::normalized(amp).map_err(CliError::from)?;
                Ok((state, warning))
            }
        }
    }
}

/// Free-evolution parameters: one fixed-axis rotation rate per particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionSpec {
    pub omega1: f64,
    pub axis1: Direction,
    pub omega2: f64,
    pub axis2: Direction,
}

impl Default for EvolutionSpec {
    fn default() -> Self {
        Self {
            omega1: 0.0,
            axis1: Direction::z_axis(),
            omega2: 0.0,
            axis2: Direction::z_axis(),
        }
    }
}

impl EvolutionSpec {
    pub fn build(&self) -> LocalEvolution {
        LocalEvolution::new(self.omega1, self.axis1, self.omega2, self.axis2)
    }
}

/// One experiment: model, state, directions, grids, and sampling sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model_name: String,
    pub model_params: BTreeMap<String, f64>,
    pub state: StateSpec,
    pub a: Direction,
    pub b: Direction,
    pub n_times: usize,
    pub horizon: f64,
    pub m_lambda: usize,
    pub seed: u64,
    pub variant: Variant,
    pub evolution: EvolutionSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model_name: "paper_constrained".to_string(),
            model_params: BTreeMap::new(),
            state: StateSpec::Singlet,
            a: Direction::z_axis(),
            b: Direction::z_axis(),
            n_times: 1000,
            horizon: 1.0,
            m_lambda: 10_000,
            seed: 42,
            variant: Variant::Standard,
            evolution: EvolutionSpec::default(),
        }
    }
}

impl ExperimentConfig {
    /// The canonical contradiction configuration: singlet state, balanced
    /// paper-constrained model, both axes along z, `N = 10^4` times and
    /// `10^5` lambda samples.
    pub fn canonical_demo(seed: u64) -> Self {
        Self {
            n_times: 10_000,
            m_lambda: 100_000,
            seed,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| CliError::config(format!("invalid config document: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Checks every numeric range before any work starts; each failure has
    /// its own message.
    pub fn validate(&self) -> Result<()> {
        if self.n_times < 2 {
            return Err(CliError::config(format!(
                "n_times must be at least 2, got {}",
                self.n_times
            )));
        }
        if self.m_lambda < 2 {
            return Err(CliError::config(format!(
                "m_lambda must be at least 2, got {}",
                self.m_lambda
            )));
        }
        if !self.horizon.is_finite() || self.horizon <= 0.0 {
            return Err(CliError::config(format!(
                "horizon must be a positive finite number, got {}",
                self.horizon
            )));
        }
        if !self.evolution.omega1.is_finite() || !self.evolution.omega2.is_finite() {
            return Err(CliError::config(
                "evolution frequencies must be finite".to_string(),
            ));
        }
        self.state.build().map(|_| ())
    }
}

/// Parses `x,y,z` into a measurement direction.
pub fn parse_direction(text: &str) -> Result<Direction> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::config(format!(
            "direction must be three comma-separated reals, got `{text}`"
        )));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = f64::from_str(part.trim())
            .map_err(|_| CliError::config(format!("invalid direction component `{part}`")))?;
    }
    Direction::new(v[0], v[1], v[2]).map_err(CliError::from)
}

/// Parses `singlet`, `product_up`, or eight comma-separated reals.
pub fn parse_state(text: &str) -> Result<StateSpec> {
    match text {
        "singlet" => Ok(StateSpec::Singlet),
        "product_up" => Ok(StateSpec::ProductUp),
        other => {
            let values: std::result::Result<Vec<f64>, _> =
                other.split(',').map(|p| f64::from_str(p.trim())).collect();
            match values {
                Ok(v) if v.len() == 8 => Ok(StateSpec::Custom(v)),
                _ => Err(CliError::config(format!(
                    "state must be `singlet`, `product_up`, or 8 comma-separated reals, \
                     got `{other}`"
                ))),
            }
        }
    }
}
