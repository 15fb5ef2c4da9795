//! Monte Carlo and exact evaluation of the two-station correlation.
//!
//! The main estimator averages, over sampled hidden variables, the product
//! of per-station time averages taken over `N x N` time pairs. The double
//! sum over pairs factorizes exactly into a product of single sums for
//! models whose outcome functions are time-local, which keeps the per-lambda
//! work linear in `N`; the explicit quadratic double loop is kept in
//! [`factorization_check`] and [`exact_correlation`] as its own verifier.
//!
//! Every lambda sample draws from an independent substream keyed by
//! `(seed, sample index)` and the per-lambda contributions are reduced in
//! index order, so estimates are bit-identical for any thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lhv::{Lambda, LhvModel};
use crate::quantum::{qm_correlation, Direction, Outcome, PureState};
use crate::stream::{substream, AUX_STREAM};

/// A finite set of measurement times inside `[0, horizon]`.
///
/// Times are kept in draw order and may repeat.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    times: Vec<f64>,
    horizon: f64,
}

impl TimeGrid {
    /// `n` independent uniform draws on `[0, horizon]`.
    pub fn sample<R: Rng + ?Sized>(n: usize, horizon: f64, rng: &mut R) -> Result<Self> {
        Self::check(n, horizon)?;
        let times = (0..n).map(|_| horizon * rng.gen::<f64>()).collect();
        Ok(Self { times, horizon })
    }

    /// `n` uniform draws on the lower half `[0, horizon/2]`, leaving the
    /// upper half free for a strictly later companion grid.
    pub fn sample_lower_half<R: Rng + ?Sized>(
        n: usize,
        horizon: f64,
        rng: &mut R,
    ) -> Result<Self> {
        Self::check(n, horizon)?;
        let times = (0..n).map(|_| 0.5 * horizon * rng.gen::<f64>()).collect();
        Ok(Self { times, horizon })
    }

    /// Wraps explicit times, validating the count and the range.
    pub fn from_times(times: Vec<f64>, horizon: f64) -> Result<Self> {
        Self::check(times.len(), horizon)?;
        for &t in &times {
            if !t.is_finite() {
                return Err(Error::NonFinite { what: "measurement time" });
            }
            if t < 0.0 || t > horizon {
                return Err(Error::TimeOutOfRange { t, horizon });
            }
        }
        Ok(Self { times, horizon })
    }

    /// A companion grid of the same size whose every time lies strictly
    /// above every time of `self`, uniform on `(max(self), horizon]`.
    pub fn sample_later<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Self> {
        let t_max = self.max_time();
        if t_max >= self.horizon {
            return Err(Error::OrderingUnsatisfiable { t_max, horizon: self.horizon });
        }
        let span = self.horizon - t_max;
        let times = (0..self.len())
            .map(|_| loop {
                let t = t_max + span * (1.0 - rng.gen::<f64>());
                if t > t_max {
                    break t;
                }
            })
            .collect();
        Ok(Self { times, horizon: self.horizon })
    }

    fn check(n: usize, horizon: f64) -> Result<()> {
        if n < 2 {
            return Err(Error::TooFewTimes { n });
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::NonPositiveHorizon { horizon });
        }
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn max_time(&self) -> f64 {
        self.times.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Time statistics of one station at a fixed hidden variable.
#[derive(Debug, Clone, PartialEq)]
pub struct PerLambdaStats {
    pub lambda: Lambda,
    pub avg_a: f64,
    pub avg_b: f64,
    pub pi_a_plus: f64,
    pub pi_a_minus: f64,
}

/// A Monte Carlo mean with its standard error over lambda samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_lambda: usize,
    pub n_times: usize,
    pub seed: u64,
}

/// Everything needed to quantify the mismatch between the quantum
/// correlation and the factorized hidden-variable prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub e_qm: f64,
    pub e_model: CorrelationEstimate,
    pub avg_a_model: CorrelationEstimate,
    pub avg_b_model: CorrelationEstimate,
    /// `|e_qm + <a><b>|`: zero iff the factorized prediction can match
    /// quantum mechanics.
    pub gap_eq8: f64,
    /// Sample standard deviation across lambda of the per-lambda time
    /// average of `A`; zero means the averages are lambda-independent.
    pub lambda_dependence_score: f64,
}

#[derive(Debug, Clone, Copy)]
struct LambdaAverages {
    avg_a: f64,
    avg_b: f64,
}

fn check_lambda_count(m_lambda: usize) -> Result<()> {
    if m_lambda < 2 {
        return Err(Error::TooFewLambdas { m: m_lambda });
    }
    Ok(())
}

fn check_equal_grids(grid_i: &TimeGrid, grid_j: &TimeGrid) -> Result<()> {
    if grid_i.len() != grid_j.len() {
        return Err(Error::GridLengthMismatch { n_a: grid_i.len(), n_b: grid_j.len() });
    }
    Ok(())
}

/// One independent lambda draw and both station averages per sample index.
fn sweep(
    model: &dyn LhvModel,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    grid_j: &TimeGrid,
    m_lambda: usize,
    seed: u64,
) -> Vec<LambdaAverages> {
    (0..m_lambda)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let lambda = model.sample_lambda(&mut rng);
            LambdaAverages {
                avg_a: model.average_a(&lambda, a, b, grid_i.times()),
                avg_b: model.average_b(&lambda, b, a, grid_j.times()),
            }
        })
        .collect()
}

fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    let m = values.len();
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (m - 1) as f64).sqrt()
}

fn estimate_from(values: &[f64], n_times: usize, seed: u64) -> CorrelationEstimate {
    let mean = mean_of(values);
    let stderr = sample_std(values, mean) / (values.len() as f64).sqrt();
    CorrelationEstimate {
        mean,
        stderr,
        n_lambda: values.len(),
        n_times,
        seed,
    }
}

/// Monte Carlo correlation over `m_lambda` hidden-variable draws and the
/// `N^2` time pairs formed from the two grids, evaluated in the factorized
/// form `(avg of A over grid_i) * (avg of B over grid_j)` per lambda.
pub fn estimate_correlation(
    model: &dyn LhvModel,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    grid_j: &TimeGrid,
    m_lambda: usize,
    seed: u64,
) -> Result<CorrelationEstimate> {
    check_lambda_count(m_lambda)?;
    check_equal_grids(grid_i, grid_j)?;
    let points = sweep(model, a, b, grid_i, grid_j, m_lambda, seed);
    let products: Vec<f64> = points.iter().map(|p| p.avg_a * p.avg_b).collect();
    Ok(estimate_from(&products, grid_i.len(), seed))
}

/// Per-station time statistics at one fixed hidden variable.
pub fn per_lambda_stats(
    model: &dyn LhvModel,
    lambda: &Lambda,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    grid_j: &TimeGrid,
) -> PerLambdaStats {
    let n = grid_i.len() as f64;
    let mut sum_a = 0.0;
    let mut n_plus = 0usize;
    for &t in grid_i.times() {
        let outcome = model.outcome_a(lambda, a, b, t);
        sum_a += outcome.value();
        if outcome == Outcome::Plus {
            n_plus += 1;
        }
    }
    let mut sum_b = 0.0;
    for &t in grid_j.times() {
        sum_b += model.outcome_b(lambda, b, a, t).value();
    }
    let pi_a_plus = n_plus as f64 / n;
    PerLambdaStats {
        lambda: *lambda,
        avg_a: sum_a / n,
        avg_b: sum_b / grid_j.len() as f64,
        pi_a_plus,
        pi_a_minus: 1.0 - pi_a_plus,
    }
}

/// Evaluates the correlation at one lambda both ways: the explicit double
/// sum over all time pairs and the product of single-station averages.
/// Distributivity makes the two equal up to float rounding.
pub fn factorization_check(
    model: &dyn LhvModel,
    lambda: &Lambda,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    grid_j: &TimeGrid,
) -> (f64, f64) {
    let n_i = grid_i.len() as f64;
    let n_j = grid_j.len() as f64;

    let mut double_sum = 0.0;
    for &t_i in grid_i.times() {
        let s_a = model.outcome_a(lambda, a, b, t_i).value();
        for &t_j in grid_j.times() {
            double_sum += s_a * model.outcome_b(lambda, b, a, t_j).value();
        }
    }
    double_sum /= n_i * n_j;

    let mut sum_a = 0.0;
    for &t in grid_i.times() {
        sum_a += model.outcome_a(lambda, a, b, t).value();
    }
    let mut sum_b = 0.0;
    for &t in grid_j.times() {
        sum_b += model.outcome_b(lambda, b, a, t).value();
    }
    let product_of_sums = (sum_a / n_i) * (sum_b / n_j);

    (double_sum, product_of_sums)
}

/// Ground-truth correlation for models with finite support: exhaustive
/// enumeration of every `(lambda, weight)` pair and every time pair via the
/// explicit double loop, with no sampling anywhere.
pub fn exact_correlation(
    model: &dyn LhvModel,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    grid_j: &TimeGrid,
) -> Result<f64> {
    let support = model
        .discrete_support()
        .ok_or_else(|| Error::NoDiscreteSupport { name: model.name().to_string() })?;
    let pairs = (grid_i.len() * grid_j.len()) as f64;
    let mut total = 0.0;
    for (lambda, weight) in support {
        let mut double_sum = 0.0;
        for &t_i in grid_i.times() {
            let s_a = model.outcome_a(lambda, a, b, t_i).value();
            for &t_j in grid_j.times() {
                double_sum += s_a * model.outcome_b(lambda, b, a, t_j).value();
            }
        }
        total += weight * double_sum / pairs;
    }
    Ok(total)
}

fn gap_from_points(
    psi: &PureState,
    a: Direction,
    b: Direction,
    points: &[LambdaAverages],
    products: &[f64],
    n_times: usize,
    seed: u64,
) -> GapReport {
    let avg_as: Vec<f64> = points.iter().map(|p| p.avg_a).collect();
    let avg_bs: Vec<f64> = points.iter().map(|p| p.avg_b).collect();
    let e_model = estimate_from(products, n_times, seed);
    let avg_a_model = estimate_from(&avg_as, n_times, seed);
    let avg_b_model = estimate_from(&avg_bs, n_times, seed);
    let e_qm = qm_correlation(psi, a, b);
    GapReport {
        e_qm,
        gap_eq8: (e_qm + avg_a_model.mean * avg_b_model.mean).abs(),
        lambda_dependence_score: sample_std(&avg_as, avg_a_model.mean),
        e_model,
        avg_a_model,
        avg_b_model,
    }
}

/// Full comparison of the quantum prediction with a model: correlation
/// estimate, station marginals, the `|e_qm + <a><b>|` gap, and the
/// lambda-dependence diagnostic, all from one lambda sweep.
#[allow(clippy::too_many_arguments)]
pub fn gap_report(
    psi: &PureState,
    model: &dyn LhvModel,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    grid_j: &TimeGrid,
    m_lambda: usize,
    seed: u64,
) -> Result<GapReport> {
    check_lambda_count(m_lambda)?;
    check_equal_grids(grid_i, grid_j)?;
    let points = sweep(model, a, b, grid_i, grid_j, m_lambda, seed);
    let products: Vec<f64> = points.iter().map(|p| p.avg_a * p.avg_b).collect();
    Ok(gap_from_points(psi, a, b, &points, &products, grid_i.len(), seed))
}

fn general_sweep(
    model: &dyn LhvModel,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    grid_j: &TimeGrid,
    m_lambda: usize,
    seed: u64,
) -> (Vec<LambdaAverages>, Vec<f64>) {
    let n_i = grid_i.len() as f64;
    let both: Vec<(LambdaAverages, f64)> = (0..m_lambda)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let lambda = model.sample_lambda(&mut rng);
            let mut sum_a = 0.0;
            let mut sum_b_bar = 0.0;
            let mut contribution = 0.0;
            for &t_i in grid_i.times() {
                let s_a = model.outcome_a(&lambda, a, b, t_i).value();
                let b_bar = model.average_b_general(&lambda, b, a, grid_j.times(), t_i);
                sum_a += s_a;
                sum_b_bar += b_bar;
                contribution += s_a * b_bar;
            }
            (
                LambdaAverages { avg_a: sum_a / n_i, avg_b: sum_b_bar / n_i },
                contribution / n_i,
            )
        })
        .collect();
    both.into_iter().unzip()
}

/// Correlation under the generalized outcome functions where `B` may also
/// depend on the earlier time.
///
/// The companion grid for station 2 is drawn uniformly on
/// `(max(grid_i), horizon]`, so every formed pair satisfies `t_j > t_i`
/// strictly; station 1 never sees the later time. Models without a genuine
/// generalized `B` take exactly the standard factorized path on the same
/// grids and seed.
pub fn estimate_correlation_general(
    model: &dyn LhvModel,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    m_lambda: usize,
    seed: u64,
) -> Result<CorrelationEstimate> {
    let grid_j = grid_i.sample_later(&mut substream(seed, AUX_STREAM))?;
    if !model.has_general_outcome_b() {
        return estimate_correlation(model, a, b, grid_i, &grid_j, m_lambda, seed);
    }
    check_lambda_count(m_lambda)?;
    let (_, contributions) = general_sweep(model, a, b, grid_i, &grid_j, m_lambda, seed);
    Ok(estimate_from(&contributions, grid_i.len(), seed))
}

/// [`gap_report`] for the generalized variant, with the same ordered-pair
/// sampling and fallback behavior as [`estimate_correlation_general`].
pub fn gap_report_general(
    psi: &PureState,
    model: &dyn LhvModel,
    a: Direction,
    b: Direction,
    grid_i: &TimeGrid,
    m_lambda: usize,
    seed: u64,
) -> Result<GapReport> {
    let grid_j = grid_i.sample_later(&mut substream(seed, AUX_STREAM))?;
    if !model.has_general_outcome_b() {
        return gap_report(psi, model, a, b, grid_i, &grid_j, m_lambda, seed);
    }
    check_lambda_count(m_lambda)?;
    let (points, contributions) = general_sweep(model, a, b, grid_i, &grid_j, m_lambda, seed);
    Ok(gap_from_points(psi, a, b, &points, &contributions, grid_i.len(), seed))
}
