use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::Parser;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{Cli, CliError, Command, OutputFormat};
use crate::circular::{CircularTrack, RsPolicy, MIN_STATIONS};
use crate::domain::Coin;
use crate::envelope::EnvelopePair;
use crate::error::{Error, Result};
use crate::markov::{ReflectingChain, DEFAULT_MIN_END_DISTANCE};
use crate::pointer::{ArcWeights, ContinuousPointer, ParsedArcs};
use crate::railroad::{LinearScenario, NamedTrack};
use crate::stats::z_critical;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;
pub const MIN_VERIFY_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ScenarioName {
    Envelope,
    Rail,
    Circular,
    Markov,
    Verify,
}

impl ScenarioName {
    fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Envelope => "envelope",
            ScenarioName::Rail => "rail",
            ScenarioName::Circular => "circular",
            ScenarioName::Markov => "markov",
            ScenarioName::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum StationsValue {
    Count(u64),
    Path(String),
}

/// Every key a config file may carry. Flags fill the same struct and take
/// precedence key by key.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
struct RawConfig {
    scenario: Option<ScenarioName>,
    trials: Option<u64>,
    seed: Option<u64>,
    confidence: Option<f64>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
    workers: Option<usize>,
    pointer: Option<String>,
    lesser: Option<f64>,
    greater: Option<f64>,
    postdiction: Option<bool>,
    heads_prob: Option<f64>,
    mode: Option<String>,
    destination: Option<i64>,
    origin: Option<i64>,
    stations: Option<StationsValue>,
    arcs: Option<String>,
    rs_policy: Option<String>,
    min_end_distance: Option<u64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($field:ident),+ $(,)?) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field; } )+
    };
}

impl RawConfig {
    fn from_cli(cli: Cli) -> Self {
        let mut raw = RawConfig {
            trials: cli.trials,
            seed: cli.seed,
            confidence: cli.confidence,
            format: cli.format,
            out: cli.out,
            workers: cli.workers,
            ..RawConfig::default()
        };
        match cli.command {
            None => {}
            Some(Command::Envelope(a)) => {
                raw.scenario = Some(ScenarioName::Envelope);
                raw.pointer = a.pointer;
                raw.lesser = a.lesser;
                raw.greater = a.greater;
                raw.postdiction = a.postdiction.then_some(true);
                raw.heads_prob = a.heads_prob;
            }
            Some(Command::Rail(a)) => {
                raw.scenario = Some(ScenarioName::Rail);
                raw.mode = a.mode;
                raw.pointer = a.pointer;
                raw.destination = a.destination;
                raw.origin = a.origin;
                raw.stations = a
                    .stations
                    .map(|p| StationsValue::Path(p.to_string_lossy().into_owned()));
                raw.heads_prob = a.heads_prob;
            }
            Some(Command::Circular(a)) => {
                raw.scenario = Some(ScenarioName::Circular);
                raw.stations = a.stations.map(StationsValue::Count);
                raw.arcs = a.arcs;
                raw.rs_policy = a.rs_policy;
                raw.destination = a.destination.map(|d| d as i64);
            }
            Some(Command::Markov(a)) => {
                raw.scenario = Some(ScenarioName::Markov);
                raw.stations = a.stations.map(StationsValue::Count);
                raw.destination = a.destination;
                raw.min_end_distance = a.min_end_distance;
            }
            Some(Command::Verify) => raw.scenario = Some(ScenarioName::Verify),
        }
        raw
    }

    /// Lays `self` (flags) over `file`.
    fn over(self, mut file: RawConfig) -> Result<RawConfig> {
        if let (Some(a), Some(b)) = (self.scenario, file.scenario) {
            if a != b {
                return Err(Error::config(
                    "scenario",
                    format!(
                        "subcommand {} conflicts with config file scenario {}",
                        a.as_str(),
                        b.as_str()
                    ),
                ));
            }
        }
        let flags = self;
        overlay!(
            file,
            flags,
            scenario,
            trials,
            seed,
            confidence,
            format,
            out,
            workers,
            pointer,
            lesser,
            greater,
            postdiction,
            heads_prob,
            mode,
            destination,
            origin,
            stations,
            arcs,
            rs_policy,
            min_end_distance,
        );
        Ok(file)
    }

    fn present_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        macro_rules! note {
            ($($field:ident),+) => { $( if self.$field.is_some() { keys.push(stringify!($field)); } )+ };
        }
        note!(
            pointer,
            lesser,
            greater,
            postdiction,
            heads_prob,
            mode,
            destination,
            origin,
            stations,
            arcs,
            rs_policy,
            min_end_distance
        );
        keys
    }
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
    pub format: OutputFormat,
    /// Whether `--format` (or the file's `format`) was given explicitly.
    pub format_explicit: bool,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum ScenarioConfig {
    Envelope {
        pointer: ContinuousPointer,
        pair: EnvelopePair,
        postdiction: bool,
        coin: Coin,
    },
    Rail(RailSetup),
    CircularExact {
        track: CircularTrack<num_rational::BigRational>,
        arcs_spec: String,
        policy: RsPolicy,
        destination: Option<usize>,
    },
    CircularFloat {
        track: CircularTrack<f64>,
        arcs_spec: String,
        policy: RsPolicy,
        destination: Option<usize>,
    },
    Markov {
        chain: ReflectingChain,
        destination: i64,
        min_end_distance: usize,
        eligible: Vec<usize>,
    },
    Verify,
}

#[derive(Debug, Clone)]
pub enum RailSetup {
    Linear(LinearScenario),
    Control {
        origin: i64,
        pointer: ContinuousPointer,
        coin: Coin,
    },
    Named {
        track: NamedTrack,
        path: PathBuf,
    },
}

impl ScenarioConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioConfig::Envelope { .. } => "envelope",
            ScenarioConfig::Rail(_) => "rail",
            ScenarioConfig::CircularExact { .. } | ScenarioConfig::CircularFloat { .. } => {
                "circular"
            }
            ScenarioConfig::Markov { .. } => "markov",
            ScenarioConfig::Verify => "verify",
        }
    }

    /// Scenario parameters as emitted in the `params` field.
    pub fn params(&self) -> Value {
        match self {
            ScenarioConfig::Envelope {
                pointer,
                pair,
                postdiction,
                coin,
            } => json!({
                "pointer": pointer.to_string(),
                "lesser": pair.lesser(),
                "greater": pair.greater(),
                "postdiction": postdiction,
                "heads_probability": coin.heads_probability(),
            }),
            ScenarioConfig::Rail(RailSetup::Linear(s)) => json!({
                "mode": rail_mode_name(s),
                "pointer": s.pointer().to_string(),
                "destination": s.destination(),
                "origin": s.origin(),
                "heads_probability": s.coin().heads_probability(),
            }),
            ScenarioConfig::Rail(RailSetup::Control {
                origin,
                pointer,
                coin,
            }) => json!({
                "mode": "control",
                "pointer": pointer.to_string(),
                "origin": origin,
                "heads_probability": coin.heads_probability(),
            }),
            ScenarioConfig::Rail(RailSetup::Named { track, path }) => json!({
                "mode": "postdiction",
                "stations": path.to_string_lossy(),
                "station_count": track.len(),
            }),
            ScenarioConfig::CircularExact {
                track,
                arcs_spec,
                policy,
                destination,
            } => circular_params(track.station_count(), arcs_spec, policy, destination),
            ScenarioConfig::CircularFloat {
                track,
                arcs_spec,
                policy,
                destination,
            } => circular_params(track.station_count(), arcs_spec, policy, destination),
            ScenarioConfig::Markov {
                chain,
                destination,
                min_end_distance,
                ..
            } => json!({
                "stations": chain.station_count(),
                "destination": destination,
                "min_end_distance": min_end_distance,
            }),
            ScenarioConfig::Verify => json!({}),
        }
    }
}

fn circular_params(
    count: usize,
    arcs: &str,
    policy: &RsPolicy,
    destination: &Option<usize>,
) -> Value {
    json!({
        "stations": count,
        "arcs": arcs,
        "rs_policy": policy.to_string(),
        "destination": destination,
    })
}

pub(crate) fn rail_mode_name(s: &LinearScenario) -> &'static str {
    use crate::domain::TrialMode::*;
    match s.mode() {
        Postdiction => "postdiction",
        PredictionDestinationFirst => "predict-dest-first",
        PredictionOriginFirst => "predict-origin-first",
    }
}

/// Parses command-line arguments (program name first) into a validated
/// experiment.
pub fn parse_config<I, T>(args: I) -> Result<ExperimentConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::config("config", format!("cannot read {}: {e}", path.display()))
            })?;
            serde_json::from_str::<RawConfig>(&text)
                .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?
        }
        None => RawConfig::default(),
    };
    let raw = RawConfig::from_cli(cli).over(file)?;
    Ok(validate(raw)?)
}

fn require<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::config(field, "required"))
}

fn field<T>(field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::config(field, e.to_string()))
}

fn reject_unused(raw: &RawConfig, scenario: &str, allowed: &[&str]) -> Result<()> {
    match raw
        .present_keys()
        .into_iter()
        .find(|k| !allowed.contains(k))
    {
        Some(k) => Err(Error::config(k, format!("not used by scenario {scenario}"))),
        None => Ok(()),
    }
}

fn parse_pointer(raw: &Option<String>) -> Result<ContinuousPointer> {
    field("pointer", require(raw.clone(), "pointer")?.parse())
}

fn parse_coin(raw: Option<f64>) -> Result<Coin> {
    match raw {
        Some(p) => field("heads_prob", Coin::new(p)),
        None => Ok(Coin::fair()),
    }
}

fn station_count(raw: &Option<StationsValue>) -> Result<u64> {
    match require(raw.clone(), "stations")? {
        StationsValue::Count(n) => Ok(n),
        StationsValue::Path(p) => Err(Error::config(
            "stations",
            format!("expected a station count, got {p:?}"),
        )),
    }
}

fn validate(raw: RawConfig) -> Result<ExperimentConfig> {
    let scenario_name = require(raw.scenario, "scenario")?;
    let trials = raw.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(Error::config("trials", "at least one trial is required"));
    }
    let confidence = raw.confidence.unwrap_or(DEFAULT_CONFIDENCE);
    field("confidence", z_critical(confidence))?;
    if raw.workers == Some(0) {
        return Err(Error::config("workers", "at least one worker is required"));
    }
    let name = scenario_name.as_str();
    let scenario = match scenario_name {
        ScenarioName::Envelope => {
            reject_unused(
                &raw,
                name,
                &["pointer", "lesser", "greater", "postdiction", "heads_prob"],
            )?;
            let pointer = parse_pointer(&raw.pointer)?;
            let pair = field(
                "lesser",
                EnvelopePair::new(
                    require(raw.lesser, "lesser")?,
                    require(raw.greater, "greater")?,
                ),
            )?;
            let postdiction = raw.postdiction.unwrap_or(false);
            if raw.heads_prob.is_some() && !postdiction {
                return Err(Error::config("heads_prob", "only used with postdiction"));
            }
            ScenarioConfig::Envelope {
                pointer,
                pair,
                postdiction,
                coin: parse_coin(raw.heads_prob)?,
            }
        }
        ScenarioName::Rail => ScenarioConfig::Rail(validate_rail(&raw)?),
        ScenarioName::Circular => {
            reject_unused(
                &raw,
                name,
                &["stations", "arcs", "rs_policy", "destination"],
            )?;
            let count = station_count(&raw.stations)? as usize;
            if count < MIN_STATIONS {
                return Err(Error::config(
                    "stations",
                    format!("stationCount ≥ {MIN_STATIONS} required, got {count}"),
                ));
            }
            let arcs_spec = raw.arcs.clone().unwrap_or_else(|| "uniform".to_owned());
            let policy: RsPolicy = raw.rs_policy.as_deref().unwrap_or("opposite").parse()?;
            field("rs_policy", policy.validate(count))?;
            let destination = match raw.destination {
                Some(d) if d < 0 || d as usize >= count => {
                    return Err(Error::config(
                        "destination",
                        format!("station {d} out of range for {count} stations"),
                    ))
                }
                Some(d) => Some(d as usize),
                None => None,
            };
            let parsed = if arcs_spec == "uniform" {
                ParsedArcs::Exact(field("arcs", ArcWeights::uniform(count))?)
            } else {
                field("arcs", arcs_spec.parse::<ParsedArcs>())?
            };
            if parsed.len() != count {
                return Err(Error::config(
                    "arcs",
                    format!("{} weights for {count} stations", parsed.len()),
                ));
            }
            match parsed {
                ParsedArcs::Exact(a) => ScenarioConfig::CircularExact {
                    track: field("stations", CircularTrack::new(a))?,
                    arcs_spec,
                    policy,
                    destination,
                },
                ParsedArcs::Float(a) => ScenarioConfig::CircularFloat {
                    track: field("stations", CircularTrack::new(a))?,
                    arcs_spec,
                    policy,
                    destination,
                },
            }
        }
        ScenarioName::Markov => {
            reject_unused(&raw, name, &["stations", "destination", "min_end_distance"])?;
            let chain = field(
                "stations",
                ReflectingChain::new(station_count(&raw.stations)? as usize),
            )?;
            let min_end_distance = raw
                .min_end_distance
                .map_or(DEFAULT_MIN_END_DISTANCE, |m| m as usize);
            let eligible = field("min_end_distance", chain.wake_filter(min_end_distance))?;
            let destination = raw.destination.unwrap_or(eligible[0] as i64);
            field("destination", chain.origin_posterior(destination))?;
            ScenarioConfig::Markov {
                chain,
                destination,
                min_end_distance,
                eligible,
            }
        }
        ScenarioName::Verify => {
            reject_unused(&raw, name, &[])?;
            if trials < MIN_VERIFY_TRIALS {
                return Err(Error::config(
                    "trials",
                    format!(
                        "verify needs at least {MIN_VERIFY_TRIALS} trials per claim, got {trials}"
                    ),
                ));
            }
            ScenarioConfig::Verify
        }
    };
    Ok(ExperimentConfig {
        scenario,
        trials,
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        confidence,
        format: raw.format.unwrap_or(OutputFormat::Json),
        format_explicit: raw.format.is_some(),
        out: raw.out,
        workers: raw.workers,
    })
}

const RAIL_MODES: [&str; 4] = [
    "postdiction",
    "predict-dest-first",
    "predict-origin-first",
    "control",
];

fn validate_rail(raw: &RawConfig) -> Result<RailSetup> {
    let mode = raw.mode.as_deref().unwrap_or("postdiction");
    if !RAIL_MODES.contains(&mode) {
        return Err(Error::config(
            "mode",
            format!("expected postdiction, predict-dest-first, predict-origin-first or control, got {mode:?}"),
        ));
    }
    if let Some(StationsValue::Path(path)) = &raw.stations {
        reject_unused(raw, "rail (named)", &["stations", "mode"])?;
        if mode != "postdiction" {
            return Err(Error::config(
                "mode",
                "named stations support postdiction only",
            ));
        }
        let path = PathBuf::from(path);
        let text = fs::read_to_string(&path).map_err(|e| {
            Error::config("stations", format!("cannot read {}: {e}", path.display()))
        })?;
        let track = field("stations", NamedTrack::parse_list(&text))?;
        field("stations", track.postdiction().map(|_| ()))?;
        return Ok(RailSetup::Named { track, path });
    }
    if let Some(StationsValue::Count(_)) = raw.stations {
        return Err(Error::config(
            "stations",
            "expected a path to a station name list",
        ));
    }
    let pointer = parse_pointer(&raw.pointer)?;
    let coin = parse_coin(raw.heads_prob)?;
    match mode {
        "postdiction" | "predict-dest-first" => {
            reject_unused(
                raw,
                "rail",
                &["mode", "pointer", "destination", "heads_prob"],
            )?;
            let d = require(raw.destination, "destination")?;
            let s = if mode == "postdiction" {
                LinearScenario::postdiction(d, pointer)
            } else {
                LinearScenario::destination_first(d, pointer)
            };
            Ok(RailSetup::Linear(s.with_coin(coin)))
        }
        "predict-origin-first" => {
            reject_unused(raw, "rail", &["mode", "pointer", "origin", "heads_prob"])?;
            let o = require(raw.origin, "origin")?;
            Ok(RailSetup::Linear(
                LinearScenario::origin_first(o, pointer).with_coin(coin),
            ))
        }
        "control" => {
            reject_unused(raw, "rail", &["mode", "pointer", "origin", "heads_prob"])?;
            Ok(RailSetup::Control {
                origin: require(raw.origin, "origin")?,
                pointer,
                coin,
            })
        }
        _ => unreachable!("mode checked above"),
    }
}
