//! Blackwell's bet: two envelopes with different amounts, one opened at
//! random, and an independent pointer deciding whether to switch.
//!
//! The player switches iff the pointer exceeds the observed amount. With `p`
//! the chance the pointer falls below the lesser amount and `q` the chance it
//! falls above the greater one, the player ends up holding the greater amount
//! with probability `1 - (p + q) / 2`.

use serde::Serialize;

use crate::domain::{direction_of, Coin, CoinOutcome, Geometry, RngStream, TrialMode, TrialRecord};
use crate::error::{Error, Result};
use crate::pointer::ContinuousPointer;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopePair {
    lesser: f64,
    greater: f64,
}

impl EnvelopePair {
    pub fn new(lesser: f64, greater: f64) -> Result<Self> {
        if lesser.is_finite() && greater.is_finite() && 0.0 < lesser && lesser < greater {
            Ok(EnvelopePair { lesser, greater })
        } else {
            Err(Error::InvalidEnvelopePair { lesser, greater })
        }
    }

    pub fn lesser(&self) -> f64 {
        self.lesser
    }

    pub fn greater(&self) -> f64 {
        self.greater
    }
}

/// Probability that the pointer rule ends on the greater amount.
pub fn analytic_success(dist: &ContinuousPointer, pair: &EnvelopePair) -> f64 {
    let gaps = dist
        .gap_probabilities(pair.lesser, pair.greater)
        .expect("EnvelopePair guarantees lesser < greater");
    1.0 - 0.5 * (gaps.p + gaps.q)
}

/// The switching rule on an opened amount.
fn switches(dist: &ContinuousPointer, observed: f64, rng: &mut RngStream) -> bool {
    dist.sample_avoiding(rng, &[observed]) > observed
}

/// One round of the game. The greater amount goes into a uniformly chosen
/// envelope; envelopes are labelled heads/tails so the record can report the
/// held envelope as a direction.
pub fn play_round(
    pair: &EnvelopePair,
    dist: &ContinuousPointer,
    rng: &mut RngStream,
) -> TrialRecord {
    let greater_label = if rng.bernoulli(0.5) {
        CoinOutcome::Heads
    } else {
        CoinOutcome::Tails
    };
    play_labelled(
        pair,
        dist,
        greater_label,
        TrialMode::Postdiction,
        "envelope",
        rng,
    )
}

/// Postdiction of a coin toss: the greater amount goes into the envelope
/// labelled with the toss outcome, and the label of the envelope the player
/// ends up holding is the guess.
pub fn play_postdiction_round(
    pair: &EnvelopePair,
    dist: &ContinuousPointer,
    coin: &Coin,
    rng: &mut RngStream,
) -> TrialRecord {
    let outcome = coin.flip(rng);
    play_labelled(
        pair,
        dist,
        outcome,
        TrialMode::Postdiction,
        "envelope-postdiction",
        rng,
    )
}

fn play_labelled(
    pair: &EnvelopePair,
    dist: &ContinuousPointer,
    greater_label: CoinOutcome,
    mode: TrialMode,
    scenario: &'static str,
    rng: &mut RngStream,
) -> TrialRecord {
    let opened = if rng.bernoulli(0.5) {
        CoinOutcome::Heads
    } else {
        CoinOutcome::Tails
    };
    let observed = if opened == greater_label {
        pair.greater
    } else {
        pair.lesser
    };
    let held = if switches(dist, observed, rng) {
        opened.other()
    } else {
        opened
    };
    TrialRecord::new(
        scenario,
        direction_of(greater_label, Geometry::Linear),
        direction_of(held, Geometry::Linear),
        mode,
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rate(n: u64, mut f: impl FnMut(&mut RngStream) -> TrialRecord) -> f64 {
        let mut rng = RngStream::new(99, 0);
        (0..n).filter(|_| f(&mut rng).correct).count() as f64 / n as f64
    }

    #[test]
    fn analytic_examples() {
        let pair = EnvelopePair::new(1.0, 2.0).unwrap();
        let u03 = ContinuousPointer::uniform(0.0, 3.0).unwrap();
        assert!((analytic_success(&u03, &pair) - 2.0 / 3.0).abs() < 1e-15);
        let outside = ContinuousPointer::uniform(5.0, 9.0).unwrap();
        assert_eq!(analytic_success(&outside, &pair), 0.5);
        let inside = ContinuousPointer::uniform(1.0, 2.0).unwrap();
        assert_eq!(analytic_success(&inside, &pair), 1.0);
    }

    #[test]
    fn scale_invariance() {
        for c in [0.001, 0.5, 1.0, 7.0, 1e6] {
            let pair = EnvelopePair::new(c, 2.0 * c).unwrap();
            let dist = ContinuousPointer::uniform(0.0, 3.0 * c).unwrap();
            assert!((analytic_success(&dist, &pair) - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(EnvelopePair::new(2.0, 1.0).is_err());
        assert!(EnvelopePair::new(1.0, 1.0).is_err());
        assert!(EnvelopePair::new(0.0, 1.0).is_err());
        assert!(EnvelopePair::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn pointer_always_below_degenerates_to_half() {
        let pair = EnvelopePair::new(1.0, 2.0).unwrap();
        let low = ContinuousPointer::uniform(0.0, 0.5).unwrap();
        let r = rate(200_000, |rng| play_round(&pair, &low, rng));
        assert!((r - 0.5).abs() < 0.005, "{r}");
    }

    #[test]
    fn pointer_in_gap_always_wins() {
        let pair = EnvelopePair::new(1.0, 2.0).unwrap();
        let gap = ContinuousPointer::uniform(1.0, 2.0).unwrap();
        assert_eq!(rate(50_000, |rng| play_round(&pair, &gap, rng)), 1.0);
        assert_eq!(
            rate(50_000, |rng| play_postdiction_round(
                &pair,
                &gap,
                &Coin::fair(),
                rng
            )),
            1.0
        );
    }

    #[test]
    fn postdiction_labels_are_total_and_consistent() {
        let pair = EnvelopePair::new(1.0, 2.0).unwrap();
        let dist = ContinuousPointer::uniform(0.0, 3.0).unwrap();
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            let rec = play_postdiction_round(&pair, &dist, &Coin::fair(), &mut rng);
            assert_eq!(rec.actual_direction.geometry(), Geometry::Linear);
            assert_eq!(rec.guessed_direction.geometry(), Geometry::Linear);
            assert_eq!(rec.correct, rec.actual_direction == rec.guessed_direction);
            assert_eq!(rec.actual_direction.outcome(), rec.coin_outcome);
        }
    }
}
