//! Shared fixtures for the benchmark targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use onecorr_core::estimator::TimeGrid;
use onecorr_core::quantum::Direction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn direction_pair(seed: u64) -> (Direction, Direction) {
    let mut r = rng(seed);
    (Direction::random(&mut r), Direction::random(&mut r))
}

pub fn grid(n: usize, seed: u64) -> TimeGrid {
    TimeGrid::sample(n, 1.0, &mut rng(seed)).expect("valid grid")
}
