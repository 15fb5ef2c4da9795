//! Exact two-qubit quantum mechanics.
//!
//! States live in the fixed product basis `{|uu>, |ud>, |du>, |dd>}` with
//! particle 1 as the left factor. Everything here is small dense linear
//! algebra over `Complex<f64>`; identities are expected to hold to 1e-12.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Operator2 = Matrix2<Complex64>;
pub type Operator4 = Matrix4<Complex64>;
pub type Amplitudes = Vector4<Complex64>;

/// Tolerance for exact linear-algebra identities (normalization, unitarity).
pub const ALGEBRA_TOL: f64 = 1e-12;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Unit 3-vector measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    /// Normalizes the given components; rejects the zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite { what: "direction" });
        }
        if norm == 0.0 {
            return Err(Error::ZeroDirection);
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn x_axis() -> Self {
        Self { x: 1.0, y: 0.0, z: 0.0 }
    }

    pub fn y_axis() -> Self {
        Self { x: 0.0, y: 1.0, z: 0.0 }
    }

    pub fn z_axis() -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0 }
    }

    /// Direction at polar angle `theta` from +z inside the x-z plane.
    pub fn in_xz_plane(theta: f64) -> Self {
        Self {
            x: theta.sin(),
            y: 0.0,
            z: theta.cos(),
        }
    }

    /// Uniformly distributed point on the unit sphere (Marsaglia's method).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let u = 2.0 * rng.gen::<f64>() - 1.0;
            let v = 2.0 * rng.gen::<f64>() - 1.0;
            let s = u * u + v * v;
            if s >= 1.0 || s == 0.0 {
                continue;
            }
            let f = 2.0 * (1.0 - s).sqrt();
            return Self {
                x: u * f,
                y: v * f,
                z: 1.0 - 2.0 * s,
            };
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn dot_components(&self, x: f64, y: f64, z: f64) -> f64 {
        self.x * x + self.y * y + self.z * z
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Direction::new(v[0], v[1], v[2])
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        [d.x, d.y, d.z]
    }
}

/// A single +-1 measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    /// Sign convention: `sign(0) = +1`.
    pub fn sign_of(x: f64) -> Self {
        if x >= 0.0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// Which particle of the pair an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Particle {
    One,
    Two,
}

/// Normalized two-qubit state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amp: Amplitudes,
}

impl PureState {
    /// Builds a state from amplitudes already normalized to within 1e-12.
    pub fn new(amp: [Complex64; 4]) -> Result<Self> {
        let v = Amplitudes::new(amp[0], amp[1], amp[2], amp[3]);
        let norm_sq = v.norm_squared();
        if (norm_sq - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amp: v })
    }

    /// Builds a state from arbitrary nonzero amplitudes, renormalizing.
    pub fn normalized(amp: [Complex64; 4]) -> Result<Self> {
        let v = Amplitudes::new(amp[0], amp[1], amp[2], amp[3]);
        let norm = v.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite { what: "state amplitudes" });
        }
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            amp: v.map(|c| c / re(norm)),
        })
    }

    fn from_vector(amp: Amplitudes) -> Self {
        debug_assert!((amp.norm_squared() - 1.0).abs() <= 1e-9);
        Self { amp }
    }

    /// The singlet state `(|ud> - |du>) / sqrt(2)`.
    pub fn singlet() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amp: Amplitudes::new(re(0.0), re(a), re(-a), re(0.0)),
        }
    }

    /// The product state `|uu>` with both spins up along z.
    pub fn product_up() -> Self {
        Self {
            amp: Amplitudes::new(re(1.0), re(0.0), re(0.0), re(0.0)),
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amp[0], self.amp[1], self.amp[2], self.amp[3]]
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    /// Rayleigh quotient `<psi|op|psi> / <psi|psi>`; the denominator cancels
    /// the representation error of amplitudes like `1/sqrt(2)`, keeping
    /// exact identities exact.
    fn expectation(&self, op: &Operator4) -> f64 {
        let value = (self.amp.adjoint() * op * self.amp)[(0, 0)];
        debug_assert!(value.im.abs() < ALGEBRA_TOL);
        value.re / self.amp.norm_squared()
    }
}

pub fn identity2() -> Operator2 {
    Operator2::identity()
}

pub fn sigma_x() -> Operator2 {
    Operator2::new(re(0.0), re(1.0), re(1.0), re(0.0))
}

pub fn sigma_y() -> Operator2 {
    Operator2::new(re(0.0), im(-1.0), im(1.0), re(0.0))
}

pub fn sigma_z() -> Operator2 {
    Operator2::new(re(1.0), re(0.0), re(0.0), re(-1.0))
}

/// The spin observable `d . sigma` along `d`: Hermitian, traceless,
/// eigenvalues +-1.
pub fn spin_observable(d: Direction) -> Operator2 {
    sigma_x() * re(d.x()) + sigma_y() * re(d.y()) + sigma_z() * re(d.z())
}

/// Projector onto the `outcome` eigenspace of `d . sigma`.
pub fn spin_projector(d: Direction, outcome: Outcome) -> Operator2 {
    (identity2() + spin_observable(d) * re(outcome.value())) * re(0.5)
}

fn embed(op: &Operator2, particle: Particle) -> Operator4 {
    match particle {
        Particle::One => op.kronecker(&identity2()),
        Particle::Two => identity2().kronecker(op),
    }
}

/// Quantum correlation `<psi| (a.sigma) (x) (b.sigma) |psi>`.
pub fn qm_correlation(psi: &PureState, a: Direction, b: Direction) -> f64 {
    let op = spin_observable(a).kronecker(&spin_observable(b));
    psi.expectation(&op)
}

/// Single-station expectation `<psi| d.sigma |psi>` on the given particle.
pub fn qm_marginal(psi: &PureState, d: Direction, particle: Particle) -> f64 {
    let op = embed(&spin_observable(d), particle);
    psi.expectation(&op)
}

/// Joint Born probabilities for measuring `a.sigma` on particle 1 and
/// `b.sigma` on particle 2, in outcome order `[(+,+), (+,-), (-,+), (-,-)]`.
pub fn joint_distribution(psi: &PureState, a: Direction, b: Direction) -> [f64; 4] {
    let mut probs = [0.0; 4];
    let outcomes = [Outcome::Plus, Outcome::Minus];
    for (i, &s1) in outcomes.iter().enumerate() {
        for (j, &s2) in outcomes.iter().enumerate() {
            let op = spin_projector(a, s1).kronecker(&spin_projector(b, s2));
            probs[2 * i + j] = psi.expectation(&op).clamp(0.0, 1.0);
        }
    }
    probs
}

/// Free local evolution: fixed-axis rotations on each particle.
///
/// `U_k(t)` rotates spin `k` by angle `omega_k * t` about `axis_k`. Both
/// frequencies default to zero, which makes the evolution the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalEvolution {
    pub omega1: f64,
    pub axis1: Direction,
    pub omega2: f64,
    pub axis2: Direction,
}

impl LocalEvolution {
    pub fn new(omega1: f64, axis1: Direction, omega2: f64, axis2: Direction) -> Self {
        Self { omega1, axis1, omega2, axis2 }
    }

    /// No evolution at all.
    pub fn frozen() -> Self {
        Self {
            omega1: 0.0,
            axis1: Direction::z_axis(),
            omega2: 0.0,
            axis2: Direction::z_axis(),
        }
    }

    pub fn is_frozen(&self) -> bool {
        self.omega1 == 0.0 && self.omega2 == 0.0
    }

    /// The single-particle rotation `exp(-i * omega * t * (axis.sigma) / 2)`.
    pub fn factor(&self, particle: Particle, t: f64) -> Operator2 {
        let (omega, axis) = match particle {
            Particle::One => (self.omega1, self.axis1),
            Particle::Two => (self.omega2, self.axis2),
        };
        let half = 0.5 * omega * t;
        identity2() * re(half.cos()) - spin_observable(axis) * im(half.sin())
    }

    /// The full product unitary `U_1(t) (x) U_2(t)`.
    pub fn product_unitary(&self, t: f64) -> Operator4 {
        self.factor(Particle::One, t)
            .kronecker(&self.factor(Particle::Two, t))
    }
}

impl Default for LocalEvolution {
    fn default() -> Self {
        Self::frozen()
    }
}

/// Evolves `psi` freely for a duration `t`.
pub fn evolve(psi: &PureState, ev: &LocalEvolution, t: f64) -> PureState {
    if ev.is_frozen() {
        return psi.clone();
    }
    PureState::from_vector(ev.product_unitary(t) * psi.amp)
}

/// Projective measurement of `d . sigma` on one particle: samples the Born
/// rule, collapses, and renormalizes.
pub fn measure_particle<R: Rng + ?Sized>(
    psi: &PureState,
    d: Direction,
    particle: Particle,
    rng: &mut R,
) -> (Outcome, PureState) {
    let plus = embed(&spin_projector(d, Outcome::Plus), particle);
    let p_plus = psi.expectation(&plus).clamp(0.0, 1.0);
    let outcome = if rng.gen::<f64>() < p_plus {
        Outcome::Plus
    } else {
        Outcome::Minus
    };
    let projector = match outcome {
        Outcome::Plus => plus,
        Outcome::Minus => embed(&spin_projector(d, Outcome::Minus), particle),
    };
    let collapsed = projector * psi.amp;
    let norm = collapsed.norm();
    (outcome, PureState::from_vector(collapsed.map(|c| c / re(norm))))
}

/// Samples one measurement pair: `a . sigma` on particle 1 at `t_i` and
/// `b . sigma` on particle 2 at `t_j`.
///
/// The earlier measurement happens first (ties measure particle 1 first);
/// the state evolves freely before the first measurement and again between
/// the collapse and the second measurement. Returns the outcomes ordered as
/// `(particle 1, particle 2)` regardless of measurement order.
pub fn sequential_measure<R: Rng + ?Sized>(
    psi: &PureState,
    a: Direction,
    t_i: f64,
    b: Direction,
    t_j: f64,
    ev: &LocalEvolution,
    rng: &mut R,
) -> (Outcome, Outcome) {
    let first_is_particle_one = t_i <= t_j;
    let (d1, t1, p1, d2, t2, p2) = if first_is_particle_one {
        (a, t_i, Particle::One, b, t_j, Particle::Two)
    } else {
        (b, t_j, Particle::Two, a, t_i, Particle::One)
    };

    let evolved = evolve(psi, ev, t1);
    let (first, collapsed) = measure_particle(&evolved, d1, p1, rng);
    let evolved = evolve(&collapsed, ev, t2 - t1);
    let (second, _) = measure_particle(&evolved, d2, p2, rng);

    if first_is_particle_one {
        (first, second)
    } else {
        (second, first)
    }
}
