//! Pointer-based guessing strategies for a fair coin toss.
//!
//! A player who draws an independent random *pointer* and compares it with
//! what they can see can pick the larger of two envelopes, or the direction a
//! randomly moving train came from, with probability above one half. This
//! crate simulates each such mechanism and pairs it with its closed-form
//! success probability and, where the state space is finite, an exact
//! enumeration:
//!
//! - [`envelope`]: the two-envelope game and its heads/tails postdiction;
//! - [`railroad`]: a straight track, with named stations, a known-station
//!   control, and the two ways of framing a prediction made before the toss;
//! - [`circular`]: a loop of stations with a reference-station guess rule;
//! - [`markov`]: a finite line with reflecting ends and its stationary law;
//! - [`stats`]: the seeded batch runner and Wilson intervals;
//! - [`cli`]: the `blackwell` command line and the cross-scenario report.
//!
//! Every simulation draws from an [`RngStream`] addressed by a master seed
//! and a trial index, so results are reproducible and independent of how
//! trials are spread over threads.

pub mod circular;
pub mod cli;
pub mod domain;
pub mod envelope;
pub mod error;
pub mod markov;
pub mod pointer;
pub mod railroad;
pub mod stats;

pub use domain::{
    direction_of, flip, Coin, CoinOutcome, Direction, Geometry, RngStream, TrialMode, TrialRecord,
};
pub use error::{Error, Result};
pub use pointer::{ArcWeights, ContinuousPointer, GapProbabilities, Weight};
pub use stats::{run_trials, SuccessEstimate, TrialRunner};
