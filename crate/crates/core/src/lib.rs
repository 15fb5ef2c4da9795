//! Exact two-qubit quantum predictions versus time-labeled realistic
//! hidden-variable models, compared through a single correlation function.
//!
//! The library has three layers:
//!
//! * [`quantum`] — states, spin observables, exact correlations and
//!   marginals, and sequential sampled measurements with collapse and free
//!   evolution;
//! * [`lhv`] — the hidden-variable model interface (deterministic,
//!   time-labeled outcome functions) and a catalog of concrete models;
//! * [`estimator`] — seeded, data-parallel Monte Carlo estimation of the
//!   model correlation over random measurement-time pairs, per-lambda time
//!   statistics, exact enumeration for finite-support models, and the gap
//!   between the quantum correlation and the factorized model prediction.

pub mod error;
pub mod estimator;
pub mod lhv;
pub mod quantum;
pub mod stream;

pub use error::{Error, Result};
pub use estimator::{
    estimate_correlation, estimate_correlation_general, exact_correlation,
    factorization_check, gap_report, gap_report_general, per_lambda_stats,
    CorrelationEstimate, GapReport, PerLambdaStats, TimeGrid,
};
pub use lhv::{build_model, Lambda, LhvModel, Postulates, MODEL_NAMES};
pub use quantum::{
    evolve, joint_distribution, qm_correlation, qm_marginal, sequential_measure,
    spin_observable, Direction, LocalEvolution, Outcome, Particle, PureState,
};
