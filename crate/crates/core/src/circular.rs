//! Stations `0..=N` placed clockwise on a loop.
//!
//! The passenger picks a reference station (RS). The passenger's station and
//! the RS split the loop into two arcs, and the guess is to travel toward the
//! RS along whichever arc holds the pointer. Arc `k` runs from station `k - 1`
//! to station `k`; arc 0 closes the loop.
//!
//! Two sets of numbers live here side by side:
//!
//! * the closed forms `(1 + p_k + p_{k+1}) / 2` for a known destination `k`
//!   and `1/2 + 1/(N + 1)` for its average over destinations;
//! * exact enumeration of the forward model, in which a uniformly placed
//!   train takes one coin-driven hop.
//!
//! The guess never depends on the coin, so the forward model succeeds with
//! probability exactly one half under every RS policy. The per-destination
//! closed form does hold for a fixed RS away from the destination, and the
//! destinations near the RS make up the difference.

use serde::Serialize;

use crate::domain::{Coin, Direction, RngStream, TrialMode, TrialRecord};
use crate::error::{Error, Result};
use crate::pointer::{ArcWeights, Weight};

pub const MIN_STATIONS: usize = 5;
pub const MAX_ENUMERATION_STATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct CircularTrack<W = f64> {
    arcs: ArcWeights<W>,
    names: Option<Vec<String>>,
}

impl<W: Weight> CircularTrack<W> {
    /// One station per arc weight.
    pub fn new(arcs: ArcWeights<W>) -> Result<Self> {
        if arcs.len() < MIN_STATIONS {
            return Err(Error::TooFewStations {
                min: MIN_STATIONS,
                got: arcs.len(),
            });
        }
        Ok(CircularTrack { arcs, names: None })
    }

    pub fn uniform(station_count: usize) -> Result<Self> {
        if station_count < MIN_STATIONS {
            return Err(Error::TooFewStations {
                min: MIN_STATIONS,
                got: station_count,
            });
        }
        Self::new(ArcWeights::uniform(station_count)?)
    }

    /// Attaches station names, clockwise from station 0.
    pub fn with_names<S: Into<String>>(
        mut self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.station_count() {
            return Err(Error::config(
                "names",
                format!(
                    "{} names for {} stations",
                    names.len(),
                    self.station_count()
                ),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::DuplicateStation(dup.clone()));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn station_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &ArcWeights<W> {
        &self.arcs
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    fn check_station(&self, station: usize) -> Result<()> {
        if station < self.station_count() {
            Ok(())
        } else {
            Err(Error::StationOutOfRange {
                station: station as i64,
                count: self.station_count(),
            })
        }
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.station_count() > MAX_ENUMERATION_STATIONS {
            return Err(Error::TrackTooLarge {
                max: MAX_ENUMERATION_STATIONS,
                got: self.station_count(),
            });
        }
        Ok(())
    }

    /// The closed form for a known destination `k`, with the RS at `rs`.
    pub fn paper_conditional_success(&self, destination: usize, rs: usize) -> Result<W> {
        paper_conditional_success(&self.arcs, destination, rs)
    }

    pub fn paper_average_success(&self) -> W {
        paper_average_success(self.station_count())
    }

    /// Probability of guessing right given that the destination is `k`,
    /// by enumeration over the two origins and every pointer arc.
    pub fn conditional_success_given_destination(
        &self,
        destination: usize,
        policy: RsPolicy,
    ) -> Result<W> {
        self.check_enumerable()?;
        self.check_station(destination)?;
        policy.validate(self.station_count())?;
        let m = self.station_count();
        let half = W::half();
        let mut total = W::zero();
        for (origin, actual) in [
            ((destination + m - 1) % m, Direction::Clockwise),
            ((destination + 1) % m, Direction::CounterClockwise),
        ] {
            total = total + half.clone() * self.favourable_mass(origin, actual, policy);
        }
        Ok(total)
    }

    /// Exact success of the forward model: uniform origin, fair coin,
    /// independent pointer arc.
    pub fn enumerate_exact(&self, policy: RsPolicy) -> Result<W> {
        self.check_enumerable()?;
        policy.validate(self.station_count())?;
        let m = self.station_count();
        let origin_weight = W::one() / W::from_count(m);
        let half = W::half();
        let mut total = W::zero();
        for origin in 0..m {
            for actual in [Direction::Clockwise, Direction::CounterClockwise] {
                let mass = self.favourable_mass(origin, actual, policy);
                total = total + origin_weight.clone() * half.clone() * mass;
            }
        }
        Ok(total)
    }

    /// Total weight of the arcs that make a passenger at `origin` guess
    /// `actual`.
    fn favourable_mass(&self, origin: usize, actual: Direction, policy: RsPolicy) -> W {
        let m = self.station_count();
        let rs = policy.reference_for(origin, m);
        (0..m)
            .filter(|&arc| guess(origin, rs, arc, m) == actual)
            .fold(W::zero(), |acc, arc| acc + self.arcs.weight(arc).clone())
    }

    /// One forward trial: the train is at a uniformly random station, the
    /// passenger guesses from the pointer arc, then the coin moves the train.
    pub fn simulate_forward(&self, policy: RsPolicy, rng: &mut RngStream) -> TrialRecord {
        let m = self.station_count();
        let origin = rng.index(m);
        let rs = policy.reference_for(origin, m);
        let arc = self.arcs.sample(rng);
        let guessed = guess(origin, rs, arc, m);
        let actual = circular_direction(Coin::fair().flip(rng));
        TrialRecord::new(
            "circular",
            actual,
            guessed,
            TrialMode::PredictionOriginFirst,
            rng,
        )
    }

    /// One trial conditioned on the destination being `k`: the origin is
    /// either neighbour with probability one half.
    pub fn simulate_given_destination(
        &self,
        destination: usize,
        policy: RsPolicy,
        rng: &mut RngStream,
    ) -> TrialRecord {
        let m = self.station_count();
        let actual = circular_direction(Coin::fair().flip(rng));
        let origin = match actual {
            Direction::Clockwise => (destination + m - 1) % m,
            _ => (destination + 1) % m,
        };
        let rs = policy.reference_for(origin, m);
        let arc = self.arcs.sample(rng);
        let guessed = guess(origin, rs, arc, m);
        TrialRecord::new(
            "circular-destination",
            actual,
            guessed,
            TrialMode::Postdiction,
            rng,
        )
    }

    /// Validates a `(destination, policy)` pair for the conditional run.
    pub fn check_destination(&self, destination: usize, policy: RsPolicy) -> Result<()> {
        self.check_station(destination)?;
        policy.validate(self.station_count())
    }
}

fn circular_direction(outcome: crate::domain::CoinOutcome) -> Direction {
    crate::domain::direction_of(outcome, crate::domain::Geometry::Circular)
}

/// How the passenger places the reference station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "policy", content = "station", rename_all = "snake_case")]
pub enum RsPolicy {
    /// Roughly opposite the passenger's own station.
    OppositePassenger,
    /// A fixed station. A passenger standing on it falls back to the
    /// opposite station, since a guess needs the RS to differ from the origin.
    FixedStation(usize),
}

impl RsPolicy {
    pub fn validate(&self, station_count: usize) -> Result<()> {
        match *self {
            RsPolicy::FixedStation(s) if s >= station_count => Err(Error::StationOutOfRange {
                station: s as i64,
                count: station_count,
            }),
            _ => Ok(()),
        }
    }

    pub fn reference_for(&self, origin: usize, station_count: usize) -> usize {
        match *self {
            RsPolicy::FixedStation(s) if s != origin => s,
            _ => (origin + station_count / 2) % station_count,
        }
    }
}

impl std::str::FromStr for RsPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "opposite" {
            return Ok(RsPolicy::OppositePassenger);
        }
        if let Some(idx) = s.strip_prefix("fixed:") {
            return idx
                .trim()
                .parse()
                .map(RsPolicy::FixedStation)
                .map_err(|_| Error::config("rs-policy", format!("bad station index {idx:?}")));
        }
        Err(Error::config(
            "rs-policy",
            format!("expected opposite or fixed:<idx>, got {s:?}"),
        ))
    }
}

impl std::fmt::Display for RsPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RsPolicy::OppositePassenger => write!(f, "opposite"),
            RsPolicy::FixedStation(s) => write!(f, "fixed:{s}"),
        }
    }
}

pub fn choose_reference_station(origin: usize, station_count: usize) -> Result<usize> {
    if station_count < MIN_STATIONS {
        return Err(Error::TooFewStations {
            min: MIN_STATIONS,
            got: station_count,
        });
    }
    if origin >= station_count {
        return Err(Error::StationOutOfRange {
            station: origin as i64,
            count: station_count,
        });
    }
    Ok((origin + station_count / 2) % station_count)
}

fn check_pair(from: usize, to: usize, station_count: usize) -> Result<()> {
    for s in [from, to] {
        if s >= station_count {
            return Err(Error::StationOutOfRange {
                station: s as i64,
                count: station_count,
            });
        }
    }
    if from == to {
        return Err(Error::SameStation(from.to_string()));
    }
    Ok(())
}

/// Whether `arc` is passed when travelling clockwise from `from` to `to`.
fn on_clockwise_arc(from: usize, to: usize, arc: usize, m: usize) -> bool {
    (arc + m - from - 1) % m < (to + m - from) % m
}

fn guess(origin: usize, rs: usize, arc: usize, m: usize) -> Direction {
    if on_clockwise_arc(origin, rs, arc, m) {
        Direction::Clockwise
    } else {
        Direction::CounterClockwise
    }
}

/// Arcs traversed moving clockwise from `from` to `to`, in travel order.
pub fn clockwise_arc_set(from: usize, to: usize, station_count: usize) -> Result<Vec<usize>> {
    check_pair(from, to, station_count)?;
    let len = (to + station_count - from) % station_count;
    Ok((1..=len).map(|i| (from + i) % station_count).collect())
}

pub fn guess_direction(
    origin: usize,
    rs: usize,
    pointer_arc: usize,
    station_count: usize,
) -> Result<Direction> {
    check_pair(origin, rs, station_count)?;
    if pointer_arc >= station_count {
        return Err(Error::StationOutOfRange {
            station: pointer_arc as i64,
            count: station_count,
        });
    }
    Ok(guess(origin, rs, pointer_arc, station_count))
}

/// Whether `rs` avoids the minor arc `k - 1, k, k + 1`.
pub fn rs_outside_minor_arc(destination: usize, rs: usize, station_count: usize) -> bool {
    let m = station_count;
    rs != (destination + m - 1) % m && rs != destination % m && rs != (destination + 1) % m
}

/// `(1 + p_k + p_{k+1}) / 2`.
pub fn paper_conditional_success<W: Weight>(
    arcs: &ArcWeights<W>,
    destination: usize,
    rs: usize,
) -> Result<W> {
    let m = arcs.len();
    for s in [destination, rs] {
        if s >= m {
            return Err(Error::StationOutOfRange {
                station: s as i64,
                count: m,
            });
        }
    }
    if !rs_outside_minor_arc(destination, rs, m) {
        return Err(Error::ReferenceInsideMinorArc { rs, destination });
    }
    Ok(destination_formula(arcs, destination))
}

/// `(1 + p_k + p_{k+1}) / 2` with no check on where the RS sits.
pub fn destination_formula<W: Weight>(arcs: &ArcWeights<W>, destination: usize) -> W {
    let sum = W::one() + arcs.weight(destination).clone() + arcs.weight(destination + 1).clone();
    W::half() * sum
}

/// `1/2 + 1/(N + 1)`, the closed-form average over destinations.
pub fn paper_average_success<W: Weight>(station_count: usize) -> W {
    W::half() + W::one() / W::from_count(station_count)
}

impl<W: Weight> CircularTrack<W> {
    /// Destinations for which a fixed RS at `rs` lies outside the minor arc.
    pub fn valid_destinations(&self, rs: usize) -> Vec<usize> {
        (0..self.station_count())
            .filter(|&k| rs_outside_minor_arc(k, rs, self.station_count()))
            .collect()
    }
}
