use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, RailSetup, ScenarioConfig};
use super::verify::{verify_all, VerificationReport};
use super::{OutputFormat, EXIT_DISAGREEMENT, EXIT_OK};
use crate::circular::{destination_formula, CircularTrack, RsPolicy};
use crate::envelope::{analytic_success, play_postdiction_round, play_round};
use crate::error::Result;
use crate::markov::ReflectingChain;
use crate::pointer::Weight;
use crate::railroad::{
    enumerate_known_station, enumerate_linear, simulate_known_station, simulate_trial,
};
use crate::stats::{SuccessEstimate, TrialRunner, Verdict};

/// One scenario run. Field order is the output schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub scenario: &'static str,
    pub params: Value,
    pub n: u64,
    pub k: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub analytic: Option<f64>,
    pub oracle: Option<f64>,
    pub verdict: Verdict,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl RunRecord {
    fn new(
        config: &ExperimentConfig,
        estimate: SuccessEstimate,
        analytic: Option<f64>,
        oracle: Option<f64>,
    ) -> Self {
        let estimate = match oracle.or(analytic) {
            Some(target) => estimate.with_target(target),
            None => estimate,
        };
        RunRecord {
            scenario: config.scenario.name(),
            params: config.scenario.params(),
            n: estimate.trials,
            k: estimate.successes,
            p_hat: estimate.point_estimate,
            ci_low: estimate.ci_low,
            ci_high: estimate.ci_high,
            analytic,
            oracle,
            verdict: estimate.verdict,
            seed: config.seed,
            details: None,
        }
    }

    pub fn estimate(&self, confidence: f64) -> SuccessEstimate {
        SuccessEstimate {
            trials: self.n,
            successes: self.k,
            point_estimate: self.p_hat,
            ci_low: self.ci_low,
            ci_high: self.ci_high,
            confidence,
            target: self.oracle.or(self.analytic),
            verdict: self.verdict,
        }
    }

    fn csv_fields(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let verdict = serde_json::to_value(self.verdict)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        let mut fields = vec![
            ("scenario", self.scenario.to_owned()),
            ("params", self.params.to_string()),
            ("n", self.n.to_string()),
            ("k", self.k.to_string()),
            ("p_hat", self.p_hat.to_string()),
            ("ci_low", self.ci_low.to_string()),
            ("ci_high", self.ci_high.to_string()),
            ("analytic", opt(self.analytic)),
            ("oracle", opt(self.oracle)),
            ("verdict", verdict),
            ("seed", self.seed.to_string()),
        ];
        if let Some(d) = &self.details {
            fields.push(("details", d.to_string()));
        }
        fields
    }
}

#[derive(Debug, Clone)]
pub enum RunOutput {
    Record(RunRecord),
    Report(VerificationReport),
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunOutput::Report(r) if r.failures > 0 => EXIT_DISAGREEMENT,
            _ => EXIT_OK,
        }
    }

    /// Writes to `--out` when given, otherwise to `stdout`.
    pub fn emit(&self, config: &ExperimentConfig, stdout: &mut dyn Write) -> io::Result<()> {
        match &config.out {
            Some(path) => {
                let mut f = File::create(path)?;
                self.write(config, &mut f)
            }
            None => self.write(config, stdout),
        }
    }

    pub fn write(&self, config: &ExperimentConfig, w: &mut dyn Write) -> io::Result<()> {
        match self {
            RunOutput::Record(r) => match config.format {
                OutputFormat::Json => write_json(r, w),
                OutputFormat::Csv => {
                    let fields = r.csv_fields();
                    let mut csv = csv::Writer::from_writer(w);
                    csv.write_record(fields.iter().map(|(k, _)| *k))?;
                    csv.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
                    csv.flush()
                }
            },
            RunOutput::Report(report) => match (config.format_explicit, config.format) {
                (true, OutputFormat::Json) => write_json(report, w),
                (true, OutputFormat::Csv) => report.write_csv(w),
                (false, _) => report.write_table(w),
            },
        }
    }
}

fn write_json<T: Serialize>(value: &T, w: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

pub(crate) fn runner(config: &ExperimentConfig) -> TrialRunner {
    let r = TrialRunner::new(config.seed).confidence(config.confidence);
    match config.workers {
        Some(w) => r.workers(w),
        None => r,
    }
}

/// Runs a validated experiment.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let runner = runner(config);
    let n = config.trials;
    let record = match &config.scenario {
        ScenarioConfig::Envelope {
            pointer,
            pair,
            postdiction,
            coin,
        } => {
            let estimate = if *postdiction {
                runner.run(n, |rng| play_postdiction_round(pair, pointer, coin, rng))?
            } else {
                runner.run(n, |rng| play_round(pair, pointer, rng))?
            };
            let analytic = coin.is_fair().then(|| analytic_success(pointer, pair));
            RunRecord::new(config, estimate, analytic, None)
        }
        ScenarioConfig::Rail(RailSetup::Linear(s)) => {
            let estimate = runner.run(n, |rng| simulate_trial(s, rng))?;
            RunRecord::new(
                config,
                estimate,
                s.analytic_success().ok(),
                Some(enumerate_linear(s).as_f64()),
            )
        }
        ScenarioConfig::Rail(RailSetup::Control {
            origin,
            pointer,
            coin,
        }) => {
            let estimate =
                runner.run(n, |rng| simulate_known_station(*origin, pointer, coin, rng))?;
            let oracle = enumerate_known_station(*origin, pointer, coin).as_f64();
            RunRecord::new(
                config,
                estimate,
                coin.is_fair().then_some(0.5),
                Some(oracle),
            )
        }
        ScenarioConfig::Rail(RailSetup::Named { track, .. }) => {
            let protocol = track.postdiction()?;
            let estimate = runner.run(n, |rng| protocol.trial(rng))?;
            RunRecord::new(
                config,
                estimate,
                None,
                Some(protocol.enumerate_exact().as_f64()),
            )
        }
        ScenarioConfig::CircularExact {
            track,
            policy,
            destination,
            ..
        } => circular_record(config, &runner, track, *policy, *destination)?,
        ScenarioConfig::CircularFloat {
            track,
            policy,
            destination,
            ..
        } => circular_record(config, &runner, track, *policy, *destination)?,
        ScenarioConfig::Markov {
            chain,
            destination,
            eligible,
            ..
        } => markov_record(config, &runner, chain, *destination, eligible)?,
        ScenarioConfig::Verify => return Ok(RunOutput::Report(verify_all(config)?)),
    };
    Ok(RunOutput::Record(record))
}

/// `(estimate, closed form, enumeration)` for a circular run.
pub(crate) fn circular_values<W: Weight>(
    runner: &TrialRunner,
    n: u64,
    track: &CircularTrack<W>,
    policy: RsPolicy,
    destination: Option<usize>,
) -> Result<(SuccessEstimate, Option<f64>, Option<f64>)> {
    Ok(match destination {
        Some(k) => {
            track.check_destination(k, policy)?;
            let estimate = runner.run(n, |rng| track.simulate_given_destination(k, policy, rng))?;
            let analytic = match policy {
                RsPolicy::FixedStation(rs) => track.paper_conditional_success(k, rs).ok(),
                RsPolicy::OppositePassenger => Some(destination_formula(track.arcs(), k)),
            };
            let oracle = track.conditional_success_given_destination(k, policy).ok();
            (
                estimate,
                analytic.map(|v| v.as_f64()),
                oracle.map(|v| v.as_f64()),
            )
        }
        None => {
            let estimate = runner.run(n, |rng| track.simulate_forward(policy, rng))?;
            let oracle = track.enumerate_exact(policy).ok();
            (
                estimate,
                Some(track.paper_average_success().as_f64()),
                oracle.map(|v| v.as_f64()),
            )
        }
    })
}

fn circular_record<W: Weight>(
    config: &ExperimentConfig,
    runner: &TrialRunner,
    track: &CircularTrack<W>,
    policy: RsPolicy,
    destination: Option<usize>,
) -> Result<RunRecord> {
    let (estimate, analytic, oracle) =
        circular_values(runner, config.trials, track, policy, destination)?;
    Ok(RunRecord::new(config, estimate, analytic, oracle))
}

/// Monte Carlo share of west origins behind `destination`, with the exact
/// posterior as oracle. The equiprobability claim (one half) is attached only
/// to wake-eligible destinations.
pub(crate) fn markov_values(
    runner: &TrialRunner,
    n: u64,
    chain: &ReflectingChain,
    destination: i64,
    eligible: &[usize],
) -> Result<(SuccessEstimate, Option<f64>, f64)> {
    let (west, _) = chain.origin_posterior(destination)?;
    let d = destination as usize;
    let cumulative = ReflectingChain::cumulative(&chain.stationary_distribution());
    let estimate = runner.run(n, |rng| {
        chain.sample_origin_given_destination(d, &cumulative, rng) == d - 1
    })?;
    let analytic = eligible.contains(&d).then_some(0.5);
    Ok((estimate, analytic, west))
}

fn markov_record(
    config: &ExperimentConfig,
    runner: &TrialRunner,
    chain: &ReflectingChain,
    destination: i64,
    eligible: &[usize],
) -> Result<RunRecord> {
    let (estimate, analytic, west) =
        markov_values(runner, config.trials, chain, destination, eligible)?;
    let pi = chain.stationary_distribution();
    let closed = chain.closed_form_stationary();
    let max_abs_error = pi
        .iter()
        .zip(&closed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut record = RunRecord::new(config, estimate, analytic, Some(west));
    record.details = Some(json!({
        "stationary": pi,
        "closed_form": closed,
        "max_abs_error": max_abs_error,
        "balance_residual": chain.balance_residual(&pi),
        "eligible": eligible,
        "posterior": [west, 1.0 - west],
    }));
    Ok(record)
}
