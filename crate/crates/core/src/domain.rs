//! Shared domain types: the coin, travel directions, trial records and the
//! seeded random stream every scenario draws from.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A coin with a configurable heads probability.
///
/// Simulators accept any bias in (0, 1). Closed-form calculators call
/// [`Coin::require_fair`] and refuse anything but exactly one half.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coin {
    heads_probability: f64,
}

impl Default for Coin {
    fn default() -> Self {
        Coin::fair()
    }
}

impl Coin {
    pub const fn fair() -> Self {
        Coin {
            heads_probability: 0.5,
        }
    }

    pub fn new(heads_probability: f64) -> Result<Self> {
        if heads_probability > 0.0 && heads_probability < 1.0 {
            Ok(Coin { heads_probability })
        } else {
            Err(Error::InvalidProbability(heads_probability))
        }
    }

    pub fn heads_probability(&self) -> f64 {
        self.heads_probability
    }

    pub fn is_fair(&self) -> bool {
        self.heads_probability == 0.5
    }

    pub fn require_fair(&self) -> Result<()> {
        if self.is_fair() {
            Ok(())
        } else {
            Err(Error::UnfairCoin(self.heads_probability))
        }
    }

    /// Flips the coin, consuming exactly one uniform draw.
    pub fn flip(&self, rng: &mut RngStream) -> CoinOutcome {
        if rng.uniform() < self.heads_probability {
            CoinOutcome::Heads
        } else {
            CoinOutcome::Tails
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoinOutcome {
    Heads,
    Tails,
}

impl CoinOutcome {
    pub fn other(self) -> Self {
        match self {
            CoinOutcome::Heads => CoinOutcome::Tails,
            CoinOutcome::Tails => CoinOutcome::Heads,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Linear,
    Circular,
}

/// Direction of travel. East/West belong to the linear track, CW/CCW to the
/// circular one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    East,
    West,
    #[serde(rename = "CW")]
    Clockwise,
    #[serde(rename = "CCW")]
    CounterClockwise,
}

impl Direction {
    pub fn geometry(self) -> Geometry {
        match self {
            Direction::East | Direction::West => Geometry::Linear,
            Direction::Clockwise | Direction::CounterClockwise => Geometry::Circular,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            Direction::East => Direction::West,
            Direction::West => Direction::East,
            Direction::Clockwise => Direction::CounterClockwise,
            Direction::CounterClockwise => Direction::Clockwise,
        }
    }

    /// The coin outcome that sends the train this way.
    pub fn outcome(self) -> CoinOutcome {
        match self {
            Direction::East | Direction::Clockwise => CoinOutcome::Heads,
            Direction::West | Direction::CounterClockwise => CoinOutcome::Tails,
        }
    }
}

/// Heads moves the train east (linear) or clockwise (circular).
pub fn direction_of(outcome: CoinOutcome, geometry: Geometry) -> Direction {
    match (outcome, geometry) {
        (CoinOutcome::Heads, Geometry::Linear) => Direction::East,
        (CoinOutcome::Tails, Geometry::Linear) => Direction::West,
        (CoinOutcome::Heads, Geometry::Circular) => Direction::Clockwise,
        (CoinOutcome::Tails, Geometry::Circular) => Direction::CounterClockwise,
    }
}

/// Whether the guess is made after the coin has been tossed, or before it
/// under one of the two generative framings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialMode {
    Postdiction,
    PredictionDestinationFirst,
    PredictionOriginFirst,
}

/// One guess, and whether it was right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub scenario: &'static str,
    pub coin_outcome: CoinOutcome,
    pub actual_direction: Direction,
    pub guessed_direction: Direction,
    pub correct: bool,
    pub mode: TrialMode,
    pub seed_index: u64,
}

impl TrialRecord {
    pub(crate) fn new(
        scenario: &'static str,
        actual: Direction,
        guessed: Direction,
        mode: TrialMode,
        rng: &RngStream,
    ) -> Self {
        TrialRecord {
            scenario,
            coin_outcome: actual.outcome(),
            actual_direction: actual,
            guessed_direction: guessed,
            correct: actual == guessed,
            mode,
            seed_index: rng.stream_id(),
        }
    }
}

/// A reproducible random stream addressed by `(master_seed, stream_id)`.
///
/// Backed by ChaCha8 with the stream id mapped onto the cipher's stream
/// counter, so distinct ids under one seed are independent sequences.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform on (0, 1); zero is redrawn.
    pub fn open_uniform(&mut self) -> f64 {
        loop {
            let u = self.uniform();
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform on `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

/// Flips `coin` on `rng`.
pub fn flip(coin: &Coin, rng: &mut RngStream) -> CoinOutcome {
    coin.flip(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heads_fraction(coin: Coin, n: u64) -> f64 {
        let mut rng = RngStream::new(7, 0);
        let heads = (0..n)
            .filter(|_| flip(&coin, &mut rng) == CoinOutcome::Heads)
            .count();
        heads as f64 / n as f64
    }

    #[test]
    fn fair_coin_is_balanced() {
        assert!((heads_fraction(Coin::fair(), 1_000_000) - 0.5).abs() < 0.002);
    }

    #[test]
    fn biased_coin_matches_its_bias() {
        let coin = Coin::new(0.7).unwrap();
        let n = 1_000_000;
        let frac = heads_fraction(coin, n);
        let k = (frac * n as f64).round() as u64;
        let (lo, hi) = crate::stats::wilson_interval(k, n, 0.999).unwrap();
        assert!(lo <= 0.7 && 0.7 <= hi);
        assert!((frac - 0.7).abs() < 0.002);
    }

    #[test]
    fn near_certain_coin_is_simulable_but_not_calculable() {
        let coin = Coin::new(1.0 - 1e-9).unwrap();
        assert!(coin.require_fair().is_err());
        let mut rng = RngStream::new(1, 1);
        let _ = coin.flip(&mut rng);
    }

    #[test]
    fn rejects_degenerate_coins() {
        assert!(Coin::new(0.0).is_err());
        assert!(Coin::new(1.0).is_err());
        assert!(Coin::new(f64::NAN).is_err());
    }

    #[test]
    fn flip_consumes_one_draw() {
        let mut a = RngStream::new(3, 4);
        let mut b = RngStream::new(3, 4);
        Coin::fair().flip(&mut a);
        b.uniform();
        assert_eq!(a.uniform(), b.uniform());
    }

    #[test]
    fn heads_maps_east_and_clockwise() {
        assert_eq!(
            direction_of(CoinOutcome::Heads, Geometry::Linear),
            Direction::East
        );
        assert_eq!(
            direction_of(CoinOutcome::Tails, Geometry::Linear),
            Direction::West
        );
        assert_eq!(
            direction_of(CoinOutcome::Heads, Geometry::Circular),
            Direction::Clockwise
        );
        assert_eq!(
            direction_of(CoinOutcome::Tails, Geometry::Circular),
            Direction::CounterClockwise
        );
        for g in [Geometry::Linear, Geometry::Circular] {
            for o in [CoinOutcome::Heads, CoinOutcome::Tails] {
                assert_eq!(direction_of(o, g).outcome(), o);
                assert_eq!(direction_of(o, g).geometry(), g);
            }
        }
    }

    #[test]
    fn same_stream_same_sequence() {
        let mut a = RngStream::new(42, 9);
        let mut b = RngStream::new(42, 9);
        for _ in 0..1000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn streams_are_uncorrelated() {
        let n = 100_000;
        let mut s0 = RngStream::new(2024, 0);
        let mut s1 = RngStream::new(2024, 1);
        let pairs: Vec<(f64, f64)> = (0..n).map(|_| (s0.uniform(), s1.uniform())).collect();
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n as f64;
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / n as f64;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in &pairs {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let corr = sxy / (sxx * syy).sqrt();
        assert!(corr.abs() < 0.01, "correlation {corr}");
    }
}
