//! The cross-scenario report: every claim with its closed-form value, its
//! exact (enumeration) value and a Monte Carlo estimate.
//!
//! A row FAILS when the Monte Carlo estimate disagrees with its reference
//! (the exact value when there is one, else the closed form), or when an
//! exact identity does not hold. A row is a FINDING when the simulation
//! agrees with the exact value but the closed form does not.

use std::io::{self, Write};

use num_rational::BigRational;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::run::{circular_values, markov_values, runner};
use crate::circular::{CircularTrack, RsPolicy};
use crate::domain::{Coin, RngStream};
use crate::envelope::{analytic_success, play_postdiction_round, play_round, EnvelopePair};
use crate::error::Result;
use crate::markov::{ReflectingChain, DEFAULT_MIN_END_DISTANCE};
use crate::pointer::{ArcWeights, ContinuousPointer, Weight};
use crate::railroad::{
    analytic_linear_success, enumerate_known_station, enumerate_linear, shared_pointer_equivalence,
    simulate_known_station, simulate_trial, LinearScenario, NamedTrack,
};
use crate::stats::{
    exceeds_half_test, wilson_interval, SuccessEstimate, TrialRunner, DEFAULT_CONFIDENCE,
};

/// Confidence of the interval a simulation must put around its reference.
pub const AGREEMENT_CONFIDENCE: f64 = 0.9999;

/// Closed form and exact value count as equal within this.
pub const EXACT_TOLERANCE: f64 = 1e-12;

const SHARED_POINTER_TRIALS: u64 = 10_000;
const RENAMING_TRIALS: u64 = 10_000;
const RANDOM_TRACKS: usize = 50;
const RANDOM_POINTERS: usize = 10;
const COVERAGE_REPLICATIONS: u64 = 1000;
const COVERAGE_TRIALS: u64 = 1000;
const COVERAGE_FLOOR: u64 = 930;

/// Seed of the randomly drawn tracks and pointers. It is fixed so that the
/// exact columns do not move with `--seed`.
const STRUCTURE_SEED: u64 = 0x5eed_7ac5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClaimStatus {
    Agree,
    Finding,
    Failure,
}

impl ClaimStatus {
    fn label(self) -> &'static str {
        match self {
            ClaimStatus::Agree => "AGREE",
            ClaimStatus::Finding => "FINDING",
            ClaimStatus::Failure => "FAILURE",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimRow {
    pub id: &'static str,
    pub claim: &'static str,
    /// Closed-form value; `None` where no formula is claimed.
    pub formula: Option<f64>,
    /// Exact enumeration or linear-solve value; `None` where the closed form
    /// itself is the only exact route.
    pub oracle: Option<f64>,
    pub estimate: Option<SuccessEstimate>,
    pub status: ClaimStatus,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub trials_per_claim: u64,
    pub rows: Vec<ClaimRow>,
    pub failures: usize,
    pub findings: usize,
}

struct Claim {
    id: &'static str,
    claim: &'static str,
    formula: Option<f64>,
    oracle: Option<f64>,
    estimate: Option<SuccessEstimate>,
    identity_holds: Option<bool>,
    note: String,
}

impl Claim {
    fn new(id: &'static str, claim: &'static str) -> Self {
        Claim {
            id,
            claim,
            formula: None,
            oracle: None,
            estimate: None,
            identity_holds: None,
            note: String::new(),
        }
    }

    fn formula(mut self, v: f64) -> Self {
        self.formula = Some(v);
        self
    }

    fn formula_opt(mut self, v: Option<f64>) -> Self {
        self.formula = v;
        self
    }

    fn oracle(mut self, v: f64) -> Self {
        self.oracle = Some(v);
        self
    }

    fn oracle_opt(mut self, v: Option<f64>) -> Self {
        self.oracle = v;
        self
    }

    fn estimate(mut self, e: SuccessEstimate) -> Self {
        self.estimate = Some(e);
        self
    }

    fn identity(mut self, holds: bool) -> Self {
        self.identity_holds = Some(holds);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn finish(self) -> ClaimRow {
        let reference = self.oracle.or(self.formula);
        let simulation_ok = match (self.estimate, reference) {
            (Some(e), Some(r)) => agrees(&e, r),
            _ => true,
        };
        let closed_form_differs = matches!(
            (self.formula, self.oracle),
            (Some(p), Some(o)) if (p - o).abs() > EXACT_TOLERANCE
        );
        let status = if !simulation_ok || self.identity_holds == Some(false) {
            ClaimStatus::Failure
        } else if closed_form_differs {
            ClaimStatus::Finding
        } else {
            ClaimStatus::Agree
        };
        let estimate = match (self.estimate, reference) {
            (Some(e), Some(r)) => Some(e.with_target(r)),
            (e, _) => e,
        };
        ClaimRow {
            id: self.id,
            claim: self.claim,
            formula: self.formula,
            oracle: self.oracle,
            estimate,
            status,
            note: self.note,
        }
    }
}

/// Whether `target` lies inside the estimate's Wilson interval at
/// [`AGREEMENT_CONFIDENCE`].
pub fn agrees(estimate: &SuccessEstimate, target: f64) -> bool {
    match wilson_interval(estimate.successes, estimate.trials, AGREEMENT_CONFIDENCE) {
        Ok((lo, hi)) => lo - EXACT_TOLERANCE <= target && target <= hi + EXACT_TOLERANCE,
        Err(_) => false,
    }
}

fn verify_track() -> CircularTrack<BigRational> {
    let weights = (1..=10)
        .map(|i| BigRational::new(i.into(), 55.into()))
        .collect();
    CircularTrack::new(ArcWeights::new(weights).expect("weights i/55 sum to one"))
        .expect("ten stations")
}

fn verify_named_track() -> NamedTrack {
    NamedTrack::new([
        "Pixley",
        "Hooterville",
        "Willoughby",
        "Clarksville",
        "Mayberry",
        "Bedford Falls",
        "Grover's Corners",
        "Springfield",
        "Twin Peaks",
        "Lake Wobegon",
    ])
    .expect("distinct names")
}

/// Runs the whole claim suite at `config.trials` trials per simulated claim.
pub fn verify_all(config: &ExperimentConfig) -> Result<VerificationReport> {
    let runner = runner(config);
    let n = config.trials;
    let mut rows = Vec::new();
    rows.extend(envelope_claims(&runner, n)?);
    rows.extend(rail_claims(&runner, n, config.seed)?);
    rows.extend(circular_claims(&runner, n)?);
    rows.extend(markov_claims(&runner, n)?);
    rows.extend(structural_claims(config.seed, n)?);
    let rows: Vec<ClaimRow> = rows.into_iter().map(Claim::finish).collect();
    Ok(VerificationReport {
        seed: config.seed,
        trials_per_claim: n,
        failures: rows
            .iter()
            .filter(|r| r.status == ClaimStatus::Failure)
            .count(),
        findings: rows
            .iter()
            .filter(|r| r.status == ClaimStatus::Finding)
            .count(),
        rows,
    })
}

fn envelope_claims(runner: &TrialRunner, n: u64) -> Result<Vec<Claim>> {
    let pair = EnvelopePair::new(1.0, 2.0)?;
    let dist = ContinuousPointer::uniform(0.0, 3.0)?;
    let target = analytic_success(&dist, &pair);
    let coin = Coin::fair();
    Ok(vec![
        Claim::new(
            "envelope.switch",
            "pointer switching rule wins with probability 1 - (p+q)/2",
        )
        .formula(target)
        .estimate(runner.run(n, |rng| play_round(&pair, &dist, rng))?)
        .note("uniform:0,3, L=1, G=2; no finite enumeration, the closed form is the oracle"),
        Claim::new(
            "envelope.postdiction",
            "heads/tails-labelled envelopes postdict the toss at the same rate",
        )
        .formula(target)
        .estimate(runner.run(n, |rng| play_postdiction_round(&pair, &dist, &coin, rng))?)
        .note("greater amount placed in the envelope named by the toss"),
    ])
}

fn rail_claims(runner: &TrialRunner, n: u64, seed: u64) -> Result<Vec<Claim>> {
    let dist = ContinuousPointer::uniform(0.0, 10.0)?;
    let gap_rule = analytic_linear_success(&dist, 4);
    let post = LinearScenario::postdiction(4, dist);
    let dest_first = LinearScenario::destination_first(4, dist);
    let origin_first = LinearScenario::origin_first(3, dist);
    let coin = Coin::fair();

    let control = runner.run(n, |rng| simulate_known_station(5, &dist, &coin, rng))?;
    let control_test = exceeds_half_test(&SuccessEstimate {
        confidence: AGREEMENT_CONFIDENCE,
        ..control
    })?;

    let named = verify_named_track();
    let protocol = named.postdiction()?;
    let shared = shared_pointer_equivalence(SHARED_POINTER_TRIALS, &dest_first, seed);

    Ok(vec![
        Claim::new(
            "rail.postdiction",
            "equiprobable origins give success (1 + r)/2",
        )
        .formula(gap_rule)
        .oracle(enumerate_linear(&post).as_f64())
        .estimate(runner.run(n, |rng| simulate_trial(&post, rng))?)
        .note("uniform:0,10, destination 4, r = 0.2"),
        Claim::new(
            "rail.control",
            "a passenger who knows the station gains nothing",
        )
        .formula(0.5)
        .oracle(enumerate_known_station(5, &dist, &coin).as_f64())
        .estimate(control)
        .identity(!control_test.significant)
        .note(format!(
            "origin 5; one-sided z = {:.3}, significant = {}",
            control_test.z, control_test.significant
        )),
        Claim::new(
            "rail.predict_dest_first",
            "pointer drawn before the toss, destination-first framing",
        )
        .formula(gap_rule)
        .oracle(enumerate_linear(&dest_first).as_f64())
        .estimate(runner.run(n, |rng| simulate_trial(&dest_first, rng))?)
        .note("same law as postdiction"),
        Claim::new(
            "rail.predict_origin_first",
            "the second passenger predicts a toss from a known origin",
        )
        .formula(gap_rule)
        .oracle(enumerate_linear(&origin_first).as_f64())
        .estimate(runner.run(n, |rng| simulate_trial(&origin_first, rng))?)
        .note("origin 3, coin tossed forward: the pointer is independent of the toss"),
        Claim::new(
            "rail.shared_pointer",
            "both passengers make the same guess from one pointer",
        )
        .formula(1.0)
        .oracle(if shared { 1.0 } else { 0.0 })
        .identity(shared)
        .note(format!(
            "exact per-trial equality over {SHARED_POINTER_TRIALS} trials"
        )),
        Claim::new(
            "rail.named",
            "named stations and a one-bit east/west oracle",
        )
        .oracle(protocol.enumerate_exact().as_f64())
        .estimate(runner.run(n, |rng| protocol.trial(rng))?)
        .note(format!(
            "{} stations, uniform probe; brute force over (destination, origin, probe)",
            named.len()
        )),
    ])
}

fn circular_claims(runner: &TrialRunner, n: u64) -> Result<Vec<Claim>> {
    let track = verify_track();
    let k = 4;
    let fixed = RsPolicy::FixedStation(0);
    let opposite = RsPolicy::OppositePassenger;

    let (cond_fixed, formula_fixed, oracle_fixed) =
        circular_values(runner, n, &track, fixed, Some(k))?;
    let (cond_opp, formula_opp, oracle_opp) =
        circular_values(runner, n, &track, opposite, Some(k))?;
    let (avg_opp, formula_avg, oracle_avg_opp) =
        circular_values(runner, n, &track, opposite, None)?;
    let (avg_fixed, _, oracle_avg_fixed) = circular_values(runner, n, &track, fixed, None)?;

    let m = track.station_count();
    let mut total_ok = true;
    for policy in [fixed, opposite] {
        let by_destination = (0..m)
            .map(|d| track.conditional_success_given_destination(d, policy))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(BigRational::from_integer(0.into()), |acc, v| acc + v)
            / BigRational::from_integer(m.into());
        total_ok &= by_destination == track.enumerate_exact(policy)?;
    }

    Ok(vec![
        Claim::new(
            "circular.destination.fixed_rs",
            "known destination k: success (1 + p_k + p_{k+1})/2",
        )
        .formula_opt(formula_fixed)
        .oracle_opt(oracle_fixed)
        .estimate(cond_fixed)
        .note("10 stations, arcs i/55, RS fixed at station 0, k = 4"),
        Claim::new(
            "circular.destination.opposite_rs",
            "same formula with the RS opposite the passenger",
        )
        .formula_opt(formula_opp)
        .oracle_opt(oracle_opp)
        .estimate(cond_opp)
        .note("the RS moves with the origin: exact value (1 + p_k + p_{k+1} - p_{k+5} - p_{k+6})/2, which is 1/2 at k = 4"),
        Claim::new(
            "circular.average.opposite_rs",
            "uniform origin: success 1/2 + 1/(N+1)",
        )
        .formula_opt(formula_avg)
        .oracle_opt(oracle_avg_opp)
        .estimate(avg_opp)
        .note("forward model: the guess never sees the coin"),
        Claim::new(
            "circular.average.fixed_rs",
            "uniform origin with the RS fixed at station 0",
        )
        .formula_opt(formula_avg)
        .oracle_opt(oracle_avg_fixed)
        .estimate(avg_fixed)
        .note("destinations next to the RS fall below 1/2 and cancel the gain"),
        Claim::new(
            "circular.total_probability",
            "destination-weighted conditionals equal the forward total",
        )
        .oracle(oracle_avg_opp.unwrap_or(f64::NAN))
        .identity(total_ok)
        .note("exact rational arithmetic, both RS policies"),
    ])
}

fn markov_claims(runner: &TrialRunner, n: u64) -> Result<Vec<Claim>> {
    let mut worst_error: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for count in 3..=50 {
        let chain = ReflectingChain::new(count)?;
        let pi = chain.stationary_distribution();
        let closed = chain.closed_form_stationary();
        for (a, b) in pi.iter().zip(&closed) {
            worst_error = worst_error.max((a - b).abs());
        }
        worst_residual = worst_residual.max(chain.balance_residual(&pi));
    }
    let chain = ReflectingChain::new(10)?;
    let eligible = chain.wake_filter(DEFAULT_MIN_END_DISTANCE)?;
    let (post_eligible, formula_eligible, west_eligible) =
        markov_values(runner, n, &chain, 4, &eligible)?;
    let (post_edge, _, west_edge) = markov_values(runner, n, &chain, 2, &eligible)?;

    Ok(vec![
        Claim::new("markov.stationary", "reflecting line: ends 1/(2N-2), interior 1/(N-1)")
            .formula(chain.closed_form_stationary()[0])
            .oracle(chain.stationary_distribution()[0])
            .identity(worst_error <= 1e-10 && worst_residual <= 1e-10)
            .note(format!(
                "values shown for station 1 of N = 10; over N = 3..50 max |pi - closed form| = {worst_error:.1e}, max |pi P - pi| = {worst_residual:.1e}"
            )),
        Claim::new("markov.posterior.wake_eligible", "waking 3+ stations from an end restores equiprobable origins")
            .formula_opt(formula_eligible)
            .oracle(west_eligible)
            .estimate(post_eligible)
            .note(format!("N = 10, destination 4, eligible {eligible:?}; estimate is P(origin west)")),
        Claim::new("markov.posterior.interior", "next to an end the origins are already equiprobable")
            .oracle(west_edge)
            .estimate(post_edge)
            .note("N = 10, destination 2: the wake rule is sufficient but stricter than necessary"),
    ])
}

/// Tracks with 5 to 16 stations and random positive rational arcs.
pub fn random_rational_tracks(count: usize, seed: u64) -> Vec<CircularTrack<BigRational>> {
    let mut rng = RngStream::new(seed, 0);
    (0..count)
        .map(|_| {
            let m = 5 + rng.index(12);
            let raw: Vec<u64> = (0..m).map(|_| 1 + rng.index(99) as u64).collect();
            let total: u64 = raw.iter().sum();
            let weights = raw
                .iter()
                .map(|&w| BigRational::new(w.into(), total.into()))
                .collect();
            CircularTrack::new(ArcWeights::new(weights).expect("positive weights normalised"))
                .expect("at least five stations")
        })
        .collect()
}

fn random_pointers(count: usize, seed: u64) -> Vec<ContinuousPointer> {
    let mut rng = RngStream::new(seed, 1);
    (0..count)
        .map(|i| {
            let a = rng.uniform() * 8.0 - 2.0;
            let b = rng.uniform() * 5.0 + 0.1;
            match i % 3 {
                0 => ContinuousPointer::uniform(a, a + b),
                1 => ContinuousPointer::exponential(b),
                _ => ContinuousPointer::gaussian(a, b),
            }
            .expect("positive scale")
        })
        .collect()
}

fn structural_claims(seed: u64, n: u64) -> Result<Vec<Claim>> {
    let half = BigRational::new(1.into(), 2.into());
    let tracks = random_rational_tracks(RANDOM_TRACKS, STRUCTURE_SEED);

    let pointers = random_pointers(RANDOM_POINTERS, STRUCTURE_SEED);
    let origin_halves = pointers
        .iter()
        .zip(-3..)
        .filter(|(p, o)| enumerate_linear(&LinearScenario::origin_first(*o, **p)) == half)
        .count();

    let mut rng = RngStream::new(STRUCTURE_SEED, 2);
    let mut formula_pairs = 0;
    let mut formula_mismatches = 0;
    let mut forward_halves = 0;
    let mut total_mismatches = 0;
    for track in &tracks {
        let m = track.station_count();
        let rs = rng.index(m);
        for k in track.valid_destinations(rs) {
            formula_pairs += 1;
            if track.conditional_success_given_destination(k, RsPolicy::FixedStation(rs))?
                != track.paper_conditional_success(k, rs)?
            {
                formula_mismatches += 1;
            }
        }
        if track.enumerate_exact(RsPolicy::OppositePassenger)? == half {
            forward_halves += 1;
        }
        for policy in [RsPolicy::OppositePassenger, RsPolicy::FixedStation(rs)] {
            let weighted = (0..m)
                .map(|k| track.conditional_success_given_destination(k, policy))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(BigRational::from_integer(0.into()), |acc, v| acc + v)
                / BigRational::from_integer(m.into());
            if weighted != track.enumerate_exact(policy)? {
                total_mismatches += 1;
            }
        }
    }

    let covered = (0..COVERAGE_REPLICATIONS)
        .filter(|&rep| {
            TrialRunner::new(seed.wrapping_add(rep))
                .workers(1)
                .run(COVERAGE_TRIALS, |rng| rng.bernoulli(0.6))
                .is_ok_and(|e| e.ci_low <= 0.6 && 0.6 <= e.ci_high)
        })
        .count() as u64;
    let coverage =
        SuccessEstimate::from_counts(covered, COVERAGE_REPLICATIONS, DEFAULT_CONFIDENCE)?;

    let scenario = LinearScenario::postdiction(4, ContinuousPointer::exponential(0.3)?);
    let budget = n.min(100_000);
    let counts: Vec<u64> = [1, 2, 8]
        .iter()
        .map(|&w| {
            TrialRunner::new(seed)
                .workers(w)
                .count(budget, |rng| simulate_trial(&scenario, rng))
        })
        .collect();
    let invariant = counts.windows(2).all(|w| w[0] == w[1]);

    let named = verify_named_track();
    let outcomes = |track: &NamedTrack| -> Result<Vec<bool>> {
        let protocol = track.postdiction()?;
        Ok(TrialRunner::new(seed).collect(RENAMING_TRIALS, |rng| protocol.trial(rng).correct))
    };
    let base = outcomes(&named)?;
    let mut renamings_equal = 0;
    for _ in 0..5 {
        let mut renamed = named.names().to_vec();
        for i in (1..renamed.len()).rev() {
            renamed.swap(i, rng.index(i + 1));
        }
        if outcomes(&NamedTrack::new(renamed)?)? == base {
            renamings_equal += 1;
        }
    }

    Ok(vec![
        Claim::new("rail.origin_first.any_pointer", "origin-first prediction is exactly 1/2 for any pointer")
            .oracle(0.5)
            .identity(origin_halves == pointers.len())
            .note(format!("{origin_halves}/{} random pointers enumerate to exactly 1/2", pointers.len())),
        Claim::new("circular.destination.random_tracks", "conditional enumeration equals (1 + p_k + p_{k+1})/2")
            .identity(formula_mismatches == 0)
            .note(format!(
                "{formula_mismatches} mismatches over {formula_pairs} (track, k) pairs, {RANDOM_TRACKS} random rational tracks, fixed RS"
            )),
        Claim::new("circular.average.random_tracks", "the forward model is exactly 1/2 on every track")
            .oracle(0.5)
            .identity(forward_halves == tracks.len())
            .note(format!("{forward_halves}/{} random rational tracks, RS opposite", tracks.len())),
        Claim::new("circular.total_probability.random_tracks", "law of total probability on random tracks")
            .identity(total_mismatches == 0)
            .note(format!("{total_mismatches} mismatches over {} (track, policy) pairs", 2 * tracks.len())),
        Claim::new("stats.wilson_coverage", "95% Wilson intervals cover p = 0.6 at n = 1000")
            .estimate(coverage)
            .identity(covered >= COVERAGE_FLOOR)
            .note(format!("{covered}/{COVERAGE_REPLICATIONS} replications covered; at least {COVERAGE_FLOOR} required")),
        Claim::new("stats.worker_invariance", "counts do not depend on the number of workers")
            .identity(invariant)
            .note(format!("{budget} trials, workers 1/2/8 counted {counts:?}")),
        Claim::new("rail.named.renaming", "renaming the stations leaves every outcome unchanged")
            .identity(renamings_equal == 5)
            .note(format!("{renamings_equal}/5 permutations reproduce all {RENAMING_TRIALS} outcomes")),
    ])
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_owned(), |x| format!("{x:.6}"))
}

impl VerificationReport {
    pub fn write_table(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(
            w,
            "verification report: seed {}, {} trials per simulated claim",
            self.seed, self.trials_per_claim
        )?;
        writeln!(
            w,
            "{:<8} {:<41} {:>9} {:>9} {:>9}  {:<21}  note",
            "status", "claim", "formula", "exact", "p_hat", "ci"
        )?;
        for row in &self.rows {
            let (p_hat, ci) = match &row.estimate {
                Some(e) => (
                    format!("{:.6}", e.point_estimate),
                    format!("[{:.6}, {:.6}]", e.ci_low, e.ci_high),
                ),
                None => ("n/a".to_owned(), "n/a".to_owned()),
            };
            writeln!(
                w,
                "{:<8} {:<41} {:>9} {:>9} {:>9}  {:<21}  {}",
                row.status.label(),
                row.id,
                fmt_opt(row.formula),
                fmt_opt(row.oracle),
                p_hat,
                ci,
                row.note
            )?;
        }
        writeln!(
            w,
            "{} claims, {} findings, {} failures",
            self.rows.len(),
            self.findings,
            self.failures
        )
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "id", "claim", "status", "formula", "oracle", "n", "k", "p_hat", "ci_low", "ci_high",
            "note",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.rows {
            let e = row.estimate.as_ref();
            csv.write_record([
                row.id.to_owned(),
                row.claim.to_owned(),
                row.status.label().to_owned(),
                opt(row.formula),
                opt(row.oracle),
                e.map(|e| e.trials.to_string()).unwrap_or_default(),
                e.map(|e| e.successes.to_string()).unwrap_or_default(),
                opt(e.map(|e| e.point_estimate)),
                opt(e.map(|e| e.ci_low)),
                opt(e.map(|e| e.ci_high)),
                row.note.clone(),
            ])?;
        }
        csv.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn estimate(k: u64, n: u64) -> SuccessEstimate {
        SuccessEstimate::from_counts(k, n, 0.95).unwrap()
    }

    #[test]
    fn classification() {
        let agree = Claim::new("a", "a")
            .formula(0.6)
            .oracle(0.6)
            .estimate(estimate(6000, 10_000))
            .finish();
        assert_eq!(agree.status, ClaimStatus::Agree);
        let finding = Claim::new("f", "f")
            .formula(0.6)
            .oracle(0.5)
            .estimate(estimate(5000, 10_000))
            .finish();
        assert_eq!(finding.status, ClaimStatus::Finding);
        let failure = Claim::new("x", "x")
            .formula(0.6)
            .oracle(0.6)
            .estimate(estimate(5000, 10_000))
            .finish();
        assert_eq!(failure.status, ClaimStatus::Failure);
        let broken = Claim::new("i", "i").oracle(0.5).identity(false).finish();
        assert_eq!(broken.status, ClaimStatus::Failure);
        let formula_only = Claim::new("e", "e")
            .formula(2.0 / 3.0)
            .estimate(estimate(6667, 10_000))
            .finish();
        assert_eq!(formula_only.status, ClaimStatus::Agree);
    }
}
