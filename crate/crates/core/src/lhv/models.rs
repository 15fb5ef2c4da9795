//! The built-in model catalog.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::lhv::{Lambda, LhvModel, Postulates};
use crate::quantum::{joint_distribution, Direction, Outcome, PureState};

/// Deterministic time-independent model: lambda is a uniform point on the
/// unit sphere, `A = sign(lambda . a)`, `B = -sign(lambda . b)`.
///
/// Reproduces the quantum correlation only at parallel or antiparallel
/// axes; its per-lambda time averages are +-1 and therefore maximally
/// lambda-dependent.
#[derive(Debug, Clone, Copy, Default)]
pub struct BellSphereModel;

impl BellSphereModel {
    pub fn new() -> Self {
        Self
    }
}

fn unit_vector(lambda: &Lambda, model: &str) -> [f64; 3] {
    match lambda {
        Lambda::UnitVector(v) => *v,
        other => panic!("{model} expects a unit-vector lambda, got {other:?}"),
    }
}

impl LhvModel for BellSphereModel {
    fn name(&self) -> &str {
        "bell_sphere"
    }

    fn sample_lambda(&self, rng: &mut dyn RngCore) -> Lambda {
        let d = Direction::random(rng);
        Lambda::UnitVector([d.x(), d.y(), d.z()])
    }

    fn outcome_a(&self, lambda: &Lambda, a: Direction, _b: Direction, _t_i: f64) -> Outcome {
        let v = unit_vector(lambda, self.name());
        Outcome::sign_of(a.dot_components(v[0], v[1], v[2]))
    }

    fn outcome_b(&self, lambda: &Lambda, b: Direction, _a: Direction, _t_j: f64) -> Outcome {
        let v = unit_vector(lambda, self.name());
        Outcome::sign_of(b.dot_components(v[0], v[1], v[2])).flipped()
    }

    fn postulates(&self) -> Postulates {
        Postulates {
            time_local_a: true,
            time_local_b: true,
            lambda_independent_time_averages: false,
            superdeterministic_directions: false,
        }
    }

    // Outcomes ignore time, so grid averages collapse to a single call.
    fn average_a(&self, lambda: &Lambda, a: Direction, b: Direction, times: &[f64]) -> f64 {
        self.outcome_a(lambda, a, b, times[0]).value()
    }

    fn average_b(&self, lambda: &Lambda, b: Direction, a: Direction, times: &[f64]) -> f64 {
        self.outcome_b(lambda, b, a, times[0]).value()
    }
}

/// Station outcomes drift with a shared hidden phase: `A = sign(sin(omega *
/// t_i + phi))`. With `symmetric` set, station 2 drifts the same way (up to
/// the overall sign); otherwise only station 1 is time-dependent and `B`
/// freezes at `-sign(sin(phi))`.
#[derive(Debug, Clone, Copy)]
pub struct TimeDriftModel {
    omega: f64,
    symmetric: bool,
}

impl TimeDriftModel {
    pub fn new(omega: f64, symmetric: bool) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::NonPositiveParameter { name: "omega", value: omega });
        }
        Ok(Self { omega, symmetric })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

fn phase(lambda: &Lambda, model: &str) -> f64 {
    match lambda {
        Lambda::Phase(phi) => *phi,
        other => panic!("{model} expects a phase lambda, got {other:?}"),
    }
}

impl LhvModel for TimeDriftModel {
    fn name(&self) -> &str {
        "time_drift"
    }

    fn sample_lambda(&self, rng: &mut dyn RngCore) -> Lambda {
        Lambda::Phase(std::f64::consts::TAU * rng.gen::<f64>())
    }

    fn outcome_a(&self, lambda: &Lambda, _a: Direction, _b: Direction, t_i: f64) -> Outcome {
        let phi = phase(lambda, self.name());
        Outcome::sign_of((self.omega * t_i + phi).sin())
    }

    fn outcome_b(&self, lambda: &Lambda, _b: Direction, _a: Direction, t_j: f64) -> Outcome {
        let phi = phase(lambda, self.name());
        let arg = if self.symmetric { self.omega * t_j + phi } else { phi };
        Outcome::sign_of(arg.sin()).flipped()
    }

    fn postulates(&self) -> Postulates {
        Postulates {
            time_local_a: true,
            time_local_b: true,
            lambda_independent_time_averages: self.symmetric,
            superdeterministic_directions: false,
        }
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer over the station seed and the time's bit pattern.
fn unit_draw(seed: u64, t: f64) -> f64 {
    let bits = if t == 0.0 { 0 } else { t.to_bits() };
    let mut z = seed ^ bits.wrapping_mul(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Model whose per-lambda time averages are lambda-independent by
/// construction: each station outputs `+1` with a fixed frequency at any
/// sampled time, realized as a deterministic draw keyed by the hidden seed
/// and the time value.
///
/// With both frequencies at 1/2 the time averages vanish for every lambda,
/// which is the singlet configuration.
#[derive(Debug, Clone, Copy)]
pub struct PaperConstrainedModel {
    p_plus_a: f64,
    p_plus_b: f64,
}

impl PaperConstrainedModel {
    pub fn new(p_plus_a: f64, p_plus_b: f64) -> Result<Self> {
        for (name, value) in [("p_plus_a", p_plus_a), ("p_plus_b", p_plus_b)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ProbabilityOutOfRange { name, value });
            }
        }
        Ok(Self { p_plus_a, p_plus_b })
    }

    /// The singlet configuration: both stations balanced at 1/2.
    pub fn balanced() -> Self {
        Self { p_plus_a: 0.5, p_plus_b: 0.5 }
    }
}

fn seeds(lambda: &Lambda, model: &str) -> [u64; 2] {
    match lambda {
        Lambda::Seeds(s) => *s,
        other => panic!("{model} expects a seed-pair lambda, got {other:?}"),
    }
}

impl LhvModel for PaperConstrainedModel {
    fn name(&self) -> &str {
        "paper_constrained"
    }

    fn sample_lambda(&self, rng: &mut dyn RngCore) -> Lambda {
        Lambda::Seeds([rng.next_u64(), rng.next_u64()])
    }

    fn outcome_a(&self, lambda: &Lambda, _a: Direction, _b: Direction, t_i: f64) -> Outcome {
        let s = seeds(lambda, self.name());
        if unit_draw(s[0], t_i) < self.p_plus_a {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    fn outcome_b(&self, lambda: &Lambda, _b: Direction, _a: Direction, t_j: f64) -> Outcome {
        let s = seeds(lambda, self.name());
        if unit_draw(s[1], t_j) < self.p_plus_b {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    fn postulates(&self) -> Postulates {
        Postulates {
            time_local_a: true,
            time_local_b: true,
            lambda_independent_time_averages: true,
            superdeterministic_directions: false,
        }
    }
}

/// Control model that reproduces the full quantum statistics by cheating:
/// both stations reconstruct the same jointly sampled outcome pair from the
/// shared lambda and both directions, so station 2 effectively reads the
/// partner outcome channel. Declared as violating time-locality for `B`.
#[derive(Debug, Clone)]
pub struct CheatingNonlocalModel {
    psi: PureState,
}

impl CheatingNonlocalModel {
    pub fn new(psi: PureState) -> Self {
        Self { psi }
    }

    /// Joint outcome pair for the fraction `u` of the Born distribution,
    /// walking the outcomes in the fixed order `(+,+), (+,-), (-,+), (-,-)`.
    fn joint_pair(&self, u: f64, a: Direction, b: Direction) -> (Outcome, Outcome) {
        let probs = joint_distribution(&self.psi, a, b);
        let pairs = [
            (Outcome::Plus, Outcome::Plus),
            (Outcome::Plus, Outcome::Minus),
            (Outcome::Minus, Outcome::Plus),
            (Outcome::Minus, Outcome::Minus),
        ];
        let mut acc = 0.0;
        for (p, pair) in probs.iter().zip(pairs) {
            acc += p;
            if u < acc {
                return pair;
            }
        }
        pairs[3]
    }
}

fn uniform(lambda: &Lambda, model: &str) -> f64 {
    match lambda {
        Lambda::Uniform(u) => *u,
        other => panic!("{model} expects a uniform lambda, got {other:?}"),
    }
}

impl LhvModel for CheatingNonlocalModel {
    fn name(&self) -> &str {
        "cheating_nonlocal"
    }

    fn sample_lambda(&self, rng: &mut dyn RngCore) -> Lambda {
        Lambda::Uniform(rng.gen::<f64>())
    }

    fn outcome_a(&self, lambda: &Lambda, a: Direction, b: Direction, _t_i: f64) -> Outcome {
        self.joint_pair(uniform(lambda, self.name()), a, b).0
    }

    fn outcome_b(&self, lambda: &Lambda, b: Direction, a: Direction, _t_j: f64) -> Outcome {
        self.joint_pair(uniform(lambda, self.name()), a, b).1
    }

    fn postulates(&self) -> Postulates {
        Postulates {
            time_local_a: true,
            time_local_b: false,
            lambda_independent_time_averages: false,
            superdeterministic_directions: true,
        }
    }

    fn average_a(&self, lambda: &Lambda, a: Direction, b: Direction, times: &[f64]) -> f64 {
        self.outcome_a(lambda, a, b, times[0]).value()
    }

    fn average_b(&self, lambda: &Lambda, b: Direction, a: Direction, times: &[f64]) -> f64 {
        self.outcome_b(lambda, b, a, times[0]).value()
    }
}

/// Fixed outcomes for both stations; single-point discrete support.
#[derive(Debug, Clone)]
pub struct ConstantModel {
    value_a: Outcome,
    value_b: Outcome,
    support: [(Lambda, f64); 1],
}

impl ConstantModel {
    pub fn new(value_a: Outcome, value_b: Outcome) -> Self {
        Self {
            value_a,
            value_b,
            support: [(Lambda::Index(0), 1.0)],
        }
    }
}

impl LhvModel for ConstantModel {
    fn name(&self) -> &str {
        "constant"
    }

    fn sample_lambda(&self, _rng: &mut dyn RngCore) -> Lambda {
        Lambda::Index(0)
    }

    fn outcome_a(&self, _lambda: &Lambda, _a: Direction, _b: Direction, _t_i: f64) -> Outcome {
        self.value_a
    }

    fn outcome_b(&self, _lambda: &Lambda, _b: Direction, _a: Direction, _t_j: f64) -> Outcome {
        self.value_b
    }

    fn discrete_support(&self) -> Option<&[(Lambda, f64)]> {
        Some(&self.support)
    }

    fn postulates(&self) -> Postulates {
        Postulates {
            time_local_a: true,
            time_local_b: true,
            lambda_independent_time_averages: true,
            superdeterministic_directions: false,
        }
    }
}

/// Finite-lambda model with tabulated time-bucketed outcomes; the workhorse
/// for comparing the Monte Carlo estimator against exact enumeration.
#[derive(Debug, Clone)]
pub struct DiscreteTableModel {
    support: Vec<(Lambda, f64)>,
    cumulative: Vec<f64>,
    table_a: Vec<Vec<Outcome>>,
    table_b: Vec<Vec<Outcome>>,
    horizon: f64,
}

impl DiscreteTableModel {
    pub fn new(
        weights: Vec<f64>,
        table_a: Vec<Vec<Outcome>>,
        table_b: Vec<Vec<Outcome>>,
        horizon: f64,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySupport);
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::NonPositiveHorizon { horizon });
        }
        for &w in &weights {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::NonPositiveWeight { value: w });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::WeightsNotNormalized { sum });
        }
        let n_buckets = table_a.first().map_or(0, Vec::len);
        if n_buckets == 0 {
            return Err(Error::TableShapeMismatch { index: 0, got: 0, expected: 1 });
        }
        for (index, row) in table_a.iter().chain(table_b.iter()).enumerate() {
            if row.len() != n_buckets {
                return Err(Error::TableShapeMismatch {
                    index: index % weights.len(),
                    got: row.len(),
                    expected: n_buckets,
                });
            }
        }
        if table_a.len() != weights.len() || table_b.len() != weights.len() {
            return Err(Error::TableShapeMismatch {
                index: 0,
                got: table_a.len().min(table_b.len()),
                expected: weights.len(),
            });
        }

        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        let support = weights
            .iter()
            .enumerate()
            .map(|(k, &w)| (Lambda::Index(k), w))
            .collect();
        Ok(Self { support, cumulative, table_a, table_b, horizon })
    }

    /// Uniformly weighted support of `k` lambdas with random outcome tables.
    pub fn random<R: Rng + ?Sized>(
        k: usize,
        n_buckets: usize,
        horizon: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let weights = vec![1.0 / k as f64; k];
        let random_table = |rng: &mut R| -> Vec<Vec<Outcome>> {
            (0..k)
                .map(|_| {
                    (0..n_buckets)
                        .map(|_| {
                            if rng.gen::<bool>() {
                                Outcome::Plus
                            } else {
                                Outcome::Minus
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let table_a = random_table(rng);
        let table_b = random_table(rng);
        // Uniform 1/k weights can miss 1.0 by float dust; renormalize the sum.
        let sum: f64 = weights.iter().sum();
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Self::new(weights, table_a, table_b, horizon)
    }

    fn bucket(&self, t: f64) -> usize {
        let n = self.table_a[0].len();
        (((t / self.horizon) * n as f64).floor() as usize).min(n - 1)
    }

    fn index(&self, lambda: &Lambda) -> usize {
        match lambda {
            Lambda::Index(k) if *k < self.support.len() => *k,
            other => panic!("discrete_table expects an in-range index lambda, got {other:?}"),
        }
    }
}

impl LhvModel for DiscreteTableModel {
    fn name(&self) -> &str {
        "discrete_table"
    }

    fn sample_lambda(&self, rng: &mut dyn RngCore) -> Lambda {
        let u = rng.gen::<f64>();
        let k = self.cumulative.partition_point(|&c| c <= u);
        Lambda::Index(k.min(self.support.len() - 1))
    }

    fn outcome_a(&self, lambda: &Lambda, _a: Direction, _b: Direction, t_i: f64) -> Outcome {
        self.table_a[self.index(lambda)][self.bucket(t_i)]
    }

    fn outcome_b(&self, lambda: &Lambda, _b: Direction, _a: Direction, t_j: f64) -> Outcome {
        self.table_b[self.index(lambda)][self.bucket(t_j)]
    }

    fn discrete_support(&self) -> Option<&[(Lambda, f64)]> {
        Some(&self.support)
    }

    fn postulates(&self) -> Postulates {
        Postulates {
            time_local_a: true,
            time_local_b: true,
            lambda_independent_time_averages: false,
            superdeterministic_directions: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::qm_correlation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn random_args(r: &mut ChaCha8Rng) -> (Direction, Direction, f64) {
        (Direction::random(r), Direction::random(r), r.gen::<f64>())
    }

    #[test]
    fn outcome_functions_are_deterministic() {
        let mut r = rng(3);
        let psi = PureState::singlet();
        let models: Vec<Box<dyn LhvModel>> = vec![
            Box::new(BellSphereModel::new()),
            Box::new(TimeDriftModel::new(5.0, true).unwrap()),
            Box::new(TimeDriftModel::new(5.0, false).unwrap()),
            Box::new(PaperConstrainedModel::balanced()),
            Box::new(CheatingNonlocalModel::new(psi)),
            Box::new(ConstantModel::new(Outcome::Plus, Outcome::Minus)),
            Box::new(DiscreteTableModel::random(4, 8, 1.0, &mut r).unwrap()),
        ];
        for model in &models {
            for _ in 0..200 {
                let lambda = model.sample_lambda(&mut r);
                let (a, b, t) = random_args(&mut r);
                assert_eq!(
                    model.outcome_a(&lambda, a, b, t),
                    model.outcome_a(&lambda, a, b, t),
                    "A of {} is not deterministic",
                    model.name()
                );
                assert_eq!(
                    model.outcome_b(&lambda, b, a, t),
                    model.outcome_b(&lambda, b, a, t),
                    "B of {} is not deterministic",
                    model.name()
                );
                let t_i = 0.5 * t;
                assert_eq!(
                    model.outcome_b_general(&lambda, b, a, t, t_i),
                    model.outcome_b_general(&lambda, b, a, t, t_i),
                );
            }
        }
    }

    #[test]
    fn bell_sphere_anticorrelates_parallel_axes() {
        let model = BellSphereModel::new();
        let mut r = rng(7);
        let a = Direction::random(&mut r);
        for _ in 0..500 {
            let lambda = model.sample_lambda(&mut r);
            let s_a = model.outcome_a(&lambda, a, a, 0.0);
            let s_b = model.outcome_b(&lambda, a, a, 0.0);
            assert_eq!(s_a.value() * s_b.value(), -1.0);
        }
    }

    #[test]
    fn bell_sphere_marginal_is_balanced() {
        let model = BellSphereModel::new();
        let mut r = rng(11);
        let a = Direction::z_axis();
        let draws = 100_000;
        let mut sum = 0.0;
        for _ in 0..draws {
            let lambda = model.sample_lambda(&mut r);
            sum += model.outcome_a(&lambda, a, a, 0.0).value();
        }
        let sigma = 1.0 / (draws as f64).sqrt();
        assert!((sum / draws as f64).abs() < 4.0 * sigma);
    }

    #[test]
    fn time_drift_same_phase_same_time_anticorrelates() {
        let model = TimeDriftModel::new(3.0, true).unwrap();
        let mut r = rng(13);
        let d = Direction::z_axis();
        for _ in 0..200 {
            let lambda = model.sample_lambda(&mut r);
            let t = 10.0 * r.gen::<f64>();
            let s_a = model.outcome_a(&lambda, d, d, t);
            let s_b = model.outcome_b(&lambda, d, d, t);
            assert_eq!(s_a, s_b.flipped());
        }
    }

    #[test]
    fn time_drift_average_over_full_period_vanishes() {
        // Direct summation over a uniform grid covering one full period.
        let omega = std::f64::consts::TAU;
        let model = TimeDriftModel::new(omega, true).unwrap();
        let mut r = rng(17);
        let d = Direction::z_axis();
        let n = 10_000;
        for _ in 0..20 {
            let lambda = model.sample_lambda(&mut r);
            let mut sum = 0.0;
            for i in 0..n {
                let t = (i as f64 + r.gen::<f64>()) / n as f64;
                sum += model.outcome_a(&lambda, d, d, t).value();
            }
            let avg = sum / n as f64;
            assert!(avg.abs() <= 4.0 / (n as f64).sqrt(), "avg = {avg}");
        }
    }

    #[test]
    fn time_drift_declares_postulates_by_symmetry() {
        assert!(TimeDriftModel::new(1.0, true)
            .unwrap()
            .postulates()
            .lambda_independent_time_averages);
        assert!(!TimeDriftModel::new(1.0, false)
            .unwrap()
            .postulates()
            .lambda_independent_time_averages);
    }

    #[test]
    fn paper_constrained_rejects_bad_probability() {
        assert!(matches!(
            PaperConstrainedModel::new(1.5, 0.5),
            Err(Error::ProbabilityOutOfRange { name: "p_plus_a", .. })
        ));
        assert!(matches!(
            PaperConstrainedModel::new(0.5, -0.1),
            Err(Error::ProbabilityOutOfRange { name: "p_plus_b", .. })
        ));
    }

    #[test]
    fn paper_constrained_saturated_frequency_is_constant() {
        let model = PaperConstrainedModel::new(1.0, 0.0).unwrap();
        let mut r = rng(19);
        let d = Direction::z_axis();
        for _ in 0..50 {
            let lambda = model.sample_lambda(&mut r);
            let t = r.gen::<f64>();
            assert_eq!(model.outcome_a(&lambda, d, d, t), Outcome::Plus);
            assert_eq!(model.outcome_b(&lambda, d, d, t), Outcome::Minus);
        }
    }

    #[test]
    fn paper_constrained_time_average_is_tight() {
        // Per-lambda average of a balanced station over 10^4 sampled times.
        let model = PaperConstrainedModel::balanced();
        let mut r = rng(23);
        let d = Direction::z_axis();
        let n = 10_000;
        for _ in 0..100 {
            let lambda = model.sample_lambda(&mut r);
            let mut sum = 0.0;
            for _ in 0..n {
                sum += model.outcome_a(&lambda, d, d, r.gen::<f64>()).value();
            }
            let avg = sum / n as f64;
            assert!((-0.05..=0.05).contains(&avg), "avg = {avg}");
        }
    }

    #[test]
    fn cheating_model_reproduces_singlet_anticorrelation() {
        let model = CheatingNonlocalModel::new(PureState::singlet());
        let mut r = rng(29);
        let a = Direction::random(&mut r);
        for _ in 0..500 {
            let lambda = model.sample_lambda(&mut r);
            let s_a = model.outcome_a(&lambda, a, a, 0.0);
            let s_b = model.outcome_b(&lambda, a, a, 0.0);
            assert_eq!(s_a.value() * s_b.value(), -1.0);
        }
    }

    #[test]
    fn cheating_model_matches_quantum_correlation() {
        let psi = PureState::singlet();
        let model = CheatingNonlocalModel::new(psi.clone());
        let mut r = rng(31);
        let draws = 200_000;
        for _ in 0..5 {
            let a = Direction::random(&mut r);
            let b = Direction::random(&mut r);
            let mut sum = 0.0;
            for _ in 0..draws {
                let lambda = model.sample_lambda(&mut r);
                sum += model.outcome_a(&lambda, a, b, 0.0).value()
                    * model.outcome_b(&lambda, b, a, 0.0).value();
            }
            let mean = sum / draws as f64;
            let exact = qm_correlation(&psi, a, b);
            assert!(
                (mean - exact).abs() <= 4.0 / (draws as f64).sqrt(),
                "mean {mean} vs exact {exact}"
            );
        }
    }

    #[test]
    fn cheating_model_is_flagged_nonlocal() {
        let model = CheatingNonlocalModel::new(PureState::singlet());
        assert!(!model.postulates().time_local_b);
        assert!(model.postulates().superdeterministic_directions);
    }

    #[test]
    fn discrete_table_validates_weights() {
        let t = vec![vec![Outcome::Plus]];
        assert!(matches!(
            DiscreteTableModel::new(vec![0.5, 0.6], t.clone(), t.clone(), 1.0),
            Err(Error::TableShapeMismatch { .. }) | Err(Error::WeightsNotNormalized { .. })
        ));
        assert!(matches!(
            DiscreteTableModel::new(vec![1.0, 0.0], t.clone(), t, 1.0),
            Err(Error::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn discrete_table_sampler_matches_weights() {
        let mut r = rng(37);
        let weights = vec![0.5, 0.25, 0.125, 0.125];
        let table = |r: &mut ChaCha8Rng| {
            (0..4)
                .map(|_| {
                    (0..4)
                        .map(|_| Outcome::sign_of(r.gen::<f64>() - 0.5))
                        .collect()
                })
                .collect()
        };
        let model =
            DiscreteTableModel::new(weights.clone(), table(&mut r), table(&mut r), 1.0).unwrap();
        let draws = 1_000_000;
        let mut counts = [0u64; 4];
        for _ in 0..draws {
            match model.sample_lambda(&mut r) {
                Lambda::Index(k) => counts[k] += 1,
                other => panic!("unexpected lambda {other:?}"),
            }
        }
        for (k, &w) in weights.iter().enumerate() {
            let freq = counts[k] as f64 / draws as f64;
            let sigma = (w * (1.0 - w) / draws as f64).sqrt();
            assert!(
                (freq - w).abs() <= 4.0 * sigma,
                "lambda {k}: freq {freq} vs weight {w}"
            );
        }
    }

    #[test]
    fn average_overrides_match_generic_loop() {
        let mut r = rng(41);
        let psi = PureState::singlet();
        let times: Vec<f64> = (0..64).map(|_| r.gen::<f64>()).collect();
        let models: Vec<Box<dyn LhvModel>> = vec![
            Box::new(BellSphereModel::new()),
            Box::new(CheatingNonlocalModel::new(psi)),
        ];
        for model in &models {
            for _ in 0..50 {
                let lambda = model.sample_lambda(&mut r);
                let (a, b, _) = random_args(&mut r);
                let mut sum_a = 0.0;
                let mut sum_b = 0.0;
                for &t in &times {
                    sum_a += model.outcome_a(&lambda, a, b, t).value();
                    sum_b += model.outcome_b(&lambda, b, a, t).value();
                }
                assert_eq!(model.average_a(&lambda, a, b, &times), sum_a / 64.0);
                assert_eq!(model.average_b(&lambda, b, a, &times), sum_b / 64.0);
            }
        }
    }
}
