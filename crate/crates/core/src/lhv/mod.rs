//! Realistic hidden-variable models with time-labeled outcome functions.
//!
//! A model owns a distribution over a hidden variable `lambda` and two
//! deterministic outcome functions: `A(lambda, a; b, t_i)` for station 1 and
//! `B(lambda, b; a, t_j)` for station 2. Each station sees its own
//! measurement time but not the partner's; a model may optionally provide a
//! generalized `B` that also peeks at the earlier time `t_i`.

pub mod models;

pub use models::{
    BellSphereModel, CheatingNonlocalModel, ConstantModel, DiscreteTableModel,
    PaperConstrainedModel, TimeDriftModel,
};

use std::collections::BTreeMap;
use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::quantum::{Direction, Outcome, PureState};

/// A hidden-variable value. Discrete models use integer indices; continuous
/// models use fixed-length real tuples or raw seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    /// Index into a finite support.
    Index(usize),
    /// A phase in `[0, 2*pi)`.
    Phase(f64),
    /// A point on the unit sphere.
    UnitVector([f64; 3]),
    /// Raw seeds for per-station deterministic sequences.
    Seeds([u64; 2]),
    /// A uniform draw in `[0, 1)`.
    Uniform(f64),
}

/// Which postulates a model claims to respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Postulates {
    /// `A` depends on its own time `t_i` only, never on `t_j`.
    pub time_local_a: bool,
    /// `B` depends on its own time `t_j` only, never on `t_i`.
    pub time_local_b: bool,
    /// Per-lambda time averages of the outcomes match lambda-independent
    /// probabilities.
    pub lambda_independent_time_averages: bool,
    /// `A` uses the partner direction `b` (or `B` uses `a`).
    pub superdeterministic_directions: bool,
}

impl fmt::Display for Postulates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "time_local_A={} time_local_B={} lambda_independent_time_averages={} \
             superdeterministic_directions={}",
            self.time_local_a,
            self.time_local_b,
            self.lambda_independent_time_averages,
            self.superdeterministic_directions
        )
    }
}

/// A realistic hidden-variable model: a lambda sampler plus deterministic
/// outcome functions for both stations.
///
/// Outcome functions must be pure: the same arguments always produce the
/// same outcome. All randomness lives in `sample_lambda`.
pub trait LhvModel: Send + Sync {
    fn name(&self) -> &str;

    /// Draws one hidden-variable value from the model distribution.
    fn sample_lambda(&self, rng: &mut dyn RngCore) -> Lambda;

    /// Station-1 outcome for measurement direction `a` at time `t_i`.
    fn outcome_a(&self, lambda: &Lambda, a: Direction, b: Direction, t_i: f64) -> Outcome;

    /// Station-2 outcome for measurement direction `b` at time `t_j`.
    fn outcome_b(&self, lambda: &Lambda, b: Direction, a: Direction, t_j: f64) -> Outcome;

    /// Generalized station-2 outcome that may also depend on the earlier
    /// time `t_i`. Falls back to `outcome_b` when the model declares no
    /// genuine `t_i` dependence.
    fn outcome_b_general(
        &self,
        lambda: &Lambda,
        b: Direction,
        a: Direction,
        t_j: f64,
        t_i: f64,
    ) -> Outcome {
        let _ = t_i;
        self.outcome_b(lambda, b, a, t_j)
    }

    /// Whether `outcome_b_general` genuinely depends on `t_i`.
    fn has_general_outcome_b(&self) -> bool {
        false
    }

    /// Finite `(lambda, weight)` support for exact enumeration, if any.
    fn discrete_support(&self) -> Option<&[(Lambda, f64)]> {
        None
    }

    fn postulates(&self) -> Postulates;

    /// Time average `(1/N) sum_i A(lambda, a; b, t_i)` over a grid.
    fn average_a(&self, lambda: &Lambda, a: Direction, b: Direction, times: &[f64]) -> f64 {
        let mut sum = 0.0;
        for &t in times {
            sum += self.outcome_a(lambda, a, b, t).value();
        }
        sum / times.len() as f64
    }

    /// Time average `(1/N) sum_j B(lambda, b; a, t_j)` over a grid.
    fn average_b(&self, lambda: &Lambda, b: Direction, a: Direction, times: &[f64]) -> f64 {
        let mut sum = 0.0;
        for &t in times {
            sum += self.outcome_b(lambda, b, a, t).value();
        }
        sum / times.len() as f64
    }

    /// Time average of the generalized `B` at fixed earlier time `t_i`.
    fn average_b_general(
        &self,
        lambda: &Lambda,
        b: Direction,
        a: Direction,
        times_j: &[f64],
        t_i: f64,
    ) -> f64 {
        let mut sum = 0.0;
        for &t in times_j {
            sum += self.outcome_b_general(lambda, b, a, t, t_i).value();
        }
        sum / times_j.len() as f64
    }
}

/// Names accepted by [`build_model`].
pub const MODEL_NAMES: [&str; 5] = [
    "bell_sphere",
    "time_drift",
    "paper_constrained",
    "cheating_nonlocal",
    "constant",
];

struct ParamReader<'a> {
    model: &'static str,
    map: &'a BTreeMap<String, f64>,
    used: Vec<&'a str>,
}

impl<'a> ParamReader<'a> {
    fn new(model: &'static str, map: &'a BTreeMap<String, f64>) -> Self {
        Self { model, map, used: Vec::new() }
    }

    fn get(&mut self, key: &'static str, default: f64) -> f64 {
        match self.map.get_key_value(key) {
            Some((k, &v)) => {
                self.used.push(k.as_str());
                v
            }
            None => default,
        }
    }

    fn finish(self) -> Result<()> {
        for key in self.map.keys() {
            if !self.used.contains(&key.as_str()) {
                return Err(Error::UnknownParameter {
                    model: self.model,
                    name: key.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Builds a cataloged model by name.
///
/// `params` supplies per-model numeric parameters; unknown keys are
/// rejected. `psi` is used only by models that need the quantum state.
pub fn build_model(
    name: &str,
    params: &BTreeMap<String, f64>,
    psi: &PureState,
) -> Result<Box<dyn LhvModel>> {
    match name {
        "bell_sphere" => {
            ParamReader::new("bell_sphere", params).finish()?;
            Ok(Box::new(BellSphereModel::new()))
        }
        "time_drift" => {
            let mut p = ParamReader::new("time_drift", params);
            let omega = p.get("omega", std::f64::consts::TAU);
            let symmetric = p.get("symmetric", 1.0) != 0.0;
            p.finish()?;
            Ok(Box::new(TimeDriftModel::new(omega, symmetric)?))
        }
        "paper_constrained" => {
            let mut p = ParamReader::new("paper_constrained", params);
            let p_plus_a = p.get("p_plus_a", 0.5);
            let p_plus_b = p.get("p_plus_b", 0.5);
            p.finish()?;
            Ok(Box::new(PaperConstrainedModel::new(p_plus_a, p_plus_b)?))
        }
        "cheating_nonlocal" => {
            ParamReader::new("cheating_nonlocal", params).finish()?;
            Ok(Box::new(CheatingNonlocalModel::new(psi.clone())))
        }
        "constant" => {
            let mut p = ParamReader::new("constant", params);
            let a = Outcome::sign_of(p.get("a_value", 1.0));
            let b = Outcome::sign_of(p.get("b_value", -1.0));
            p.finish()?;
            Ok(Box::new(ConstantModel::new(a, b)))
        }
        _ => Err(Error::UnknownModel { name: name.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_knows_every_cataloged_name() {
        let psi = PureState::singlet();
        let params = BTreeMap::new();
        for name in MODEL_NAMES {
            let model = build_model(name, &params, &psi).unwrap();
            assert_eq!(model.name(), name);
        }
    }

    #[test]
    fn registry_rejects_unknown_model() {
        let psi = PureState::singlet();
        let err = build_model("telepathy", &BTreeMap::new(), &psi).err().unwrap();
        assert_eq!(err, Error::UnknownModel { name: "telepathy".into() });
    }

    #[test]
    fn registry_rejects_unknown_parameter() {
        let psi = PureState::singlet();
        let mut params = BTreeMap::new();
        params.insert("gamma".to_string(), 1.0);
        let err = build_model("time_drift", &params, &psi).err().unwrap();
        assert_eq!(
            err,
            Error::UnknownParameter { model: "time_drift", name: "gamma".into() }
        );
    }

    #[test]
    fn registry_applies_parameters() {
        let psi = PureState::singlet();
        let mut params = BTreeMap::new();
        params.insert("p_plus_a".to_string(), 1.5);
        assert!(build_model("paper_constrained", &params, &psi).is_err());
    }
}
