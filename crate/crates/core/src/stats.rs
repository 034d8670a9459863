//! Batch trial runner, Wilson score intervals and the one-sided test against
//! a success rate of one half.

use std::num::NonZeroUsize;
use std::thread;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::domain::{RngStream, TrialRecord};
use crate::error::{Error, Result};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Minimum sample size for [`exceeds_half_test`].
pub const MIN_TEST_TRIALS: u64 = 30;

/// Anything a trial can return that counts as a success or a failure.
pub trait Outcome {
    fn is_success(&self) -> bool;
}

impl Outcome for bool {
    fn is_success(&self) -> bool {
        *self
    }
}

impl Outcome for TrialRecord {
    fn is_success(&self) -> bool {
        self.correct
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ContainsTarget,
    MissesTarget,
    NoTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessEstimate {
    pub trials: u64,
    pub successes: u64,
    pub point_estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub target: Option<f64>,
    pub verdict: Verdict,
}

impl SuccessEstimate {
    pub fn from_counts(successes: u64, trials: u64, confidence: f64) -> Result<Self> {
        if successes > trials {
            return Err(Error::config(
                "successes",
                format!("{successes} successes out of {trials} trials"),
            ));
        }
        let (ci_low, ci_high) = wilson_interval(successes, trials, confidence)?;
        Ok(SuccessEstimate {
            trials,
            successes,
            point_estimate: successes as f64 / trials as f64,
            ci_low,
            ci_high,
            confidence,
            target: None,
            verdict: Verdict::NoTarget,
        })
    }

    /// Records a target and whether the interval covers it.
    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self.verdict = if self.ci_low <= target && target <= self.ci_high {
            Verdict::ContainsTarget
        } else {
            Verdict::MissesTarget
        };
        self
    }
}

fn unit_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal is valid")
}

/// Two-sided normal critical value for `confidence`.
pub fn z_critical(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidConfidence(confidence));
    }
    Ok(unit_normal().inverse_cdf(0.5 + confidence / 2.0))
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if successes > trials {
        return Err(Error::config(
            "successes",
            format!("{successes} successes out of {trials} trials"),
        ));
    }
    let z = z_critical(confidence)?;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = p + z2 / (2.0 * n);
    let margin = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let mut low = ((centre - margin) / denom).clamp(0.0, 1.0);
    let mut high = ((centre + margin) / denom).clamp(0.0, 1.0);
    // Rounding can nudge an endpoint past the point estimate at k = 0 or k = n.
    if successes == 0 {
        low = 0.0;
    }
    if successes == trials {
        high = 1.0;
    }
    Ok((low.min(p), high.max(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfTest {
    pub z: f64,
    pub p_value: f64,
    pub level: f64,
    pub significant: bool,
}

/// One-sided z-test of `p = 1/2` against `p > 1/2`, at the estimate's
/// confidence level.
pub fn exceeds_half_test(estimate: &SuccessEstimate) -> Result<HalfTest> {
    if estimate.trials < MIN_TEST_TRIALS {
        return Err(Error::SampleTooSmall {
            min: MIN_TEST_TRIALS,
            got: estimate.trials,
        });
    }
    if !(estimate.confidence > 0.0 && estimate.confidence < 1.0) {
        return Err(Error::InvalidConfidence(estimate.confidence));
    }
    let n = estimate.trials as f64;
    let z = (estimate.point_estimate - 0.5) / (0.25 / n).sqrt();
    let normal = unit_normal();
    let p_value = 1.0 - normal.cdf(z);
    let critical = normal.inverse_cdf(estimate.confidence);
    Ok(HalfTest {
        z,
        p_value,
        level: 1.0 - estimate.confidence,
        significant: z > critical,
    })
}

/// Seeded batch runner. Trial `i` always draws from stream `i` of the master
/// seed, so counts do not depend on how the trials are split across workers.
#[derive(Debug, Clone, Copy)]
pub struct TrialRunner {
    master_seed: u64,
    confidence: f64,
    workers: usize,
}

impl TrialRunner {
    pub fn new(master_seed: u64) -> Self {
        TrialRunner {
            master_seed,
            confidence: DEFAULT_CONFIDENCE,
            workers: thread::available_parallelism().map_or(1, NonZeroUsize::get),
        }
    }

    pub fn confidence(mut self, confidence: f64) -> Self {
        self.confidence = confidence;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Counts successes over `trials` trials.
    pub fn count<T, F>(&self, trials: u64, experiment: F) -> u64
    where
        T: Outcome,
        F: Fn(&mut RngStream) -> T + Sync,
    {
        let workers = (self.workers as u64).clamp(1, trials.max(1));
        let chunk = trials.div_ceil(workers);
        let seed = self.master_seed;
        let experiment = &experiment;
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let start = w * chunk;
                    let end = ((w + 1) * chunk).min(trials);
                    scope.spawn(move || {
                        (start..end)
                            .filter(|&i| experiment(&mut RngStream::new(seed, i)).is_success())
                            .count() as u64
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("trial worker panicked"))
                .sum()
        })
    }

    pub fn run<T, F>(&self, trials: u64, experiment: F) -> Result<SuccessEstimate>
    where
        T: Outcome,
        F: Fn(&mut RngStream) -> T + Sync,
    {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        z_critical(self.confidence)?;
        let successes = self.count(trials, experiment);
        SuccessEstimate::from_counts(successes, trials, self.confidence)
    }

    /// Every trial's output, in trial order.
    pub fn collect<T, F>(&self, trials: u64, experiment: F) -> Vec<T>
    where
        F: Fn(&mut RngStream) -> T,
    {
        (0..trials)
            .map(|i| experiment(&mut RngStream::new(self.master_seed, i)))
            .collect()
    }
}

/// Runs `trials` trials at the default confidence on all available cores.
pub fn run_trials<T, F>(experiment: F, trials: u64, master_seed: u64) -> Result<SuccessEstimate>
where
    T: Outcome,
    F: Fn(&mut RngStream) -> T + Sync,
{
    TrialRunner::new(master_seed).run(trials, experiment)
}
