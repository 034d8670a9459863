//! The random railroad on a straight east-west line.
//!
//! Stations sit at integer coordinates. A passenger who knows only the
//! destination `d` takes the origin to be `d - 1` or `d + 1` with equal
//! probability (the equiprobability hypothesis, implemented here as a
//! sampling step) and guesses East iff an independent pointer lies east of
//! the current station. The passenger only ever learns which side the pointer
//! is on; positions are never revealed.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::domain::{direction_of, Coin, Direction, Geometry, RngStream, TrialMode, TrialRecord};
use crate::error::{Error, Result};
use crate::pointer::ContinuousPointer;

/// A single-hop linear experiment.
///
/// In the destination framings the coin's heads probability is the chance
/// the train arrived from the west, so a fair coin is exactly the
/// equiprobability hypothesis and a biased one weakens it. In the
/// origin-first framing the coin is tossed forward from a known origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearScenario {
    mode: TrialMode,
    station: i64,
    pointer: ContinuousPointer,
    coin: Coin,
}

impl LinearScenario {
    pub fn postdiction(destination: i64, pointer: ContinuousPointer) -> Self {
        Self::build(TrialMode::Postdiction, destination, pointer)
    }

    pub fn destination_first(destination: i64, pointer: ContinuousPointer) -> Self {
        Self::build(TrialMode::PredictionDestinationFirst, destination, pointer)
    }

    pub fn origin_first(origin: i64, pointer: ContinuousPointer) -> Self {
        Self::build(TrialMode::PredictionOriginFirst, origin, pointer)
    }

    fn build(mode: TrialMode, station: i64, pointer: ContinuousPointer) -> Self {
        LinearScenario {
            mode,
            station,
            pointer,
            coin: Coin::fair(),
        }
    }

    pub fn with_coin(mut self, coin: Coin) -> Self {
        self.coin = coin;
        self
    }

    pub fn mode(&self) -> TrialMode {
        self.mode
    }

    pub fn pointer(&self) -> &ContinuousPointer {
        &self.pointer
    }

    pub fn coin(&self) -> &Coin {
        &self.coin
    }

    pub fn destination(&self) -> Option<i64> {
        match self.mode {
            TrialMode::PredictionOriginFirst => None,
            _ => Some(self.station),
        }
    }

    pub fn origin(&self) -> Option<i64> {
        match self.mode {
            TrialMode::PredictionOriginFirst => Some(self.station),
            _ => None,
        }
    }

    /// Closed-form success, defined for the destination framings under a
    /// fair coin.
    pub fn analytic_success(&self) -> Result<f64> {
        self.coin.require_fair()?;
        match self.destination() {
            Some(d) => Ok(analytic_linear_success(&self.pointer, d)),
            None => Ok(0.5),
        }
    }
}

/// `(1 + r) / 2`, with `r` the pointer's probability of landing strictly
/// between the two candidate origins `d - 1` and `d + 1`.
pub fn analytic_linear_success(dist: &ContinuousPointer, destination: i64) -> f64 {
    let gaps = dist
        .gap_probabilities((destination - 1) as f64, (destination + 1) as f64)
        .expect("d - 1 < d + 1");
    0.5 * (1.0 + gaps.r)
}

/// What the passenger learns: which side of the current station the pointer
/// is on, and nothing else.
pub fn pointer_side(pointer: f64, current: i64) -> Direction {
    if pointer > current as f64 {
        Direction::East
    } else {
        Direction::West
    }
}

fn draw_origin(destination: i64, coin: &Coin, rng: &mut RngStream) -> (i64, Direction) {
    let actual = direction_of(coin.flip(rng), Geometry::Linear);
    let origin = match actual {
        Direction::East => destination - 1,
        _ => destination + 1,
    };
    (origin, actual)
}

fn candidates(destination: i64) -> [f64; 2] {
    [(destination - 1) as f64, (destination + 1) as f64]
}

/// Guess the direction the train took to reach a known destination.
pub fn simulate_postdiction(scenario: &LinearScenario, rng: &mut RngStream) -> Result<TrialRecord> {
    if scenario.mode != TrialMode::Postdiction {
        return Err(Error::WrongMode("postdiction"));
    }
    Ok(simulate_trial(scenario, rng))
}

/// Guess before the coin is tossed, under either prediction framing.
pub fn simulate_prediction(scenario: &LinearScenario, rng: &mut RngStream) -> Result<TrialRecord> {
    if scenario.mode == TrialMode::Postdiction {
        return Err(Error::WrongMode("prediction"));
    }
    Ok(simulate_trial(scenario, rng))
}

/// Runs one trial of whatever framing the scenario carries.
pub fn simulate_trial(scenario: &LinearScenario, rng: &mut RngStream) -> TrialRecord {
    let dist = &scenario.pointer;
    match scenario.mode {
        TrialMode::Postdiction => {
            let (origin, actual) = draw_origin(scenario.station, &scenario.coin, rng);
            let pointer = dist.sample_avoiding(rng, &[origin as f64]);
            let guess = pointer_side(pointer, origin);
            TrialRecord::new("rail-postdiction", actual, guess, scenario.mode, rng)
        }
        TrialMode::PredictionDestinationFirst => {
            let pointer = dist.sample_avoiding(rng, &candidates(scenario.station));
            let (origin, actual) = draw_origin(scenario.station, &scenario.coin, rng);
            let guess = pointer_side(pointer, origin);
            TrialRecord::new("rail-predict-dest-first", actual, guess, scenario.mode, rng)
        }
        TrialMode::PredictionOriginFirst => {
            let origin = scenario.station;
            let pointer = dist.sample_avoiding(rng, &[origin as f64]);
            let guess = pointer_side(pointer, origin);
            let actual = direction_of(scenario.coin.flip(rng), Geometry::Linear);
            TrialRecord::new(
                "rail-predict-origin-first",
                actual,
                guess,
                scenario.mode,
                rng,
            )
        }
    }
}

/// Negative control: the passenger knows the origin but not the destination.
/// The coin decides the destination, and the pointer carries no information
/// about it.
pub fn simulate_known_station(
    origin: i64,
    dist: &ContinuousPointer,
    coin: &Coin,
    rng: &mut RngStream,
) -> TrialRecord {
    let actual = direction_of(coin.flip(rng), Geometry::Linear);
    let pointer = dist.sample_avoiding(rng, &[origin as f64]);
    let guess = pointer_side(pointer, origin);
    TrialRecord::new("rail-control", actual, guess, TrialMode::Postdiction, rng)
}

/// Exact success probability by enumerating (coin outcome, pointer side).
///
/// Every probability is converted exactly from its floating value, so the
/// sum carries no rounding of its own.
pub fn enumerate_linear(scenario: &LinearScenario) -> BigRational {
    let heads = exact(scenario.coin.heads_probability());
    let tails = BigRational::one() - &heads;
    let east_of = |x: i64| BigRational::one() - exact(scenario.pointer.cdf(x as f64));
    let west_of = |x: i64| exact(scenario.pointer.cdf(x as f64));
    match scenario.mode {
        TrialMode::Postdiction | TrialMode::PredictionDestinationFirst => {
            let d = scenario.station;
            heads * east_of(d - 1) + tails * west_of(d + 1)
        }
        TrialMode::PredictionOriginFirst => {
            let o = scenario.station;
            heads * east_of(o) + tails * west_of(o)
        }
    }
}

/// Exact success of the known-station control.
pub fn enumerate_known_station(origin: i64, dist: &ContinuousPointer, coin: &Coin) -> BigRational {
    enumerate_linear(&LinearScenario::origin_first(origin, *dist).with_coin(*coin))
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("probabilities are finite")
}

/// Draws the shared world of a trial: the current station and the true
/// direction of travel, in the order the scenario's framing prescribes.
fn draw_world(scenario: &LinearScenario, rng: &mut RngStream) -> (i64, Direction) {
    match scenario.mode {
        TrialMode::PredictionOriginFirst => {
            let actual = direction_of(scenario.coin.flip(rng), Geometry::Linear);
            (scenario.station, actual)
        }
        _ => draw_origin(scenario.station, &scenario.coin, rng),
    }
}

/// Two passengers at the same station. The second reads the shared pointer
/// before the toss; the first reuses it once the destination is announced.
/// Returns true iff the two guesses coincide on every trial.
pub fn shared_pointer_equivalence(
    trials: u64,
    scenario: &LinearScenario,
    master_seed: u64,
) -> bool {
    (0..trials).all(|i| {
        let mut rng = RngStream::new(master_seed, i);
        let (current, _) = draw_world(scenario, &mut rng);
        let shared = scenario
            .pointer
            .sample_avoiding(&mut rng, &[current as f64]);
        let second = pointer_side(shared, current);
        let first = pointer_side(shared, current);
        first == second
    })
}

/// Fraction of trials on which two passengers with independent pointers
/// disagree.
pub fn independent_pointer_disagreement(
    trials: u64,
    scenario: &LinearScenario,
    master_seed: u64,
) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let disagreements = (0..trials)
        .filter(|&i| {
            let mut rng = RngStream::new(master_seed, i);
            let (current, _) = draw_world(scenario, &mut rng);
            let a = scenario
                .pointer
                .sample_avoiding(&mut rng, &[current as f64]);
            let b = scenario
                .pointer
                .sample_avoiding(&mut rng, &[current as f64]);
            pointer_side(a, current) != pointer_side(b, current)
        })
        .count();
    disagreements as f64 / trials as f64
}

/// Expected disagreement of independent pointers: `2 s (1 - s)` per current
/// station, `s` being the chance of guessing East there, mixed over the
/// distribution of the current station.
pub fn expected_independent_disagreement(scenario: &LinearScenario) -> f64 {
    let per_station = |x: i64| {
        let s = 1.0 - scenario.pointer.cdf(x as f64);
        2.0 * s * (1.0 - s)
    };
    match scenario.mode {
        TrialMode::PredictionOriginFirst => per_station(scenario.station),
        _ => {
            let h = scenario.coin.heads_probability();
            h * per_station(scenario.station - 1) + (1.0 - h) * per_station(scenario.station + 1)
        }
    }
}

/// Stations known by name. The passenger sees the alphabetical list; the
/// west-to-east order stays private to the track.
#[derive(Debug, Clone)]
pub struct NamedTrack {
    names: Vec<String>,
    west_to_east: Vec<String>,
    position: HashMap<String, usize>,
}

impl NamedTrack {
    pub fn new<S: Into<String>>(west_to_east: impl IntoIterator<Item = S>) -> Result<Self> {
        let west_to_east: Vec<String> = west_to_east.into_iter().map(Into::into).collect();
        let mut position = HashMap::with_capacity(west_to_east.len());
        for (i, name) in west_to_east.iter().enumerate() {
            if position.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateStation(name.clone()));
            }
        }
        let mut names = west_to_east.clone();
        names.sort();
        Ok(NamedTrack {
            names,
            west_to_east,
            position,
        })
    }

    /// Reads one station name per line, west to east. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_list(text: &str) -> Result<Self> {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    /// The passenger's alphabetical station list.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.west_to_east.len()
    }

    pub fn is_empty(&self) -> bool {
        self.west_to_east.is_empty()
    }

    fn locate(&self, name: &str) -> Result<usize> {
        self.position
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownStation(name.to_owned()))
    }

    /// Which side of `current` the `probe` station lies on. One bit out.
    pub fn direction_oracle(&self, current: &str, probe: &str) -> Result<Direction> {
        let c = self.locate(current)?;
        let p = self.locate(probe)?;
        if c == p {
            return Err(Error::SameStation(current.to_owned()));
        }
        Ok(if p > c {
            Direction::East
        } else {
            Direction::West
        })
    }

    /// Builds the postdiction experiment, which needs an interior station.
    pub fn postdiction(&self) -> Result<NamedPostdiction<'_>> {
        if self.len() < 3 {
            return Err(Error::TooFewStations {
                min: 3,
                got: self.len(),
            });
        }
        Ok(NamedPostdiction { track: self })
    }
}

pub fn direction_oracle(track: &NamedTrack, current: &str, probe: &str) -> Result<Direction> {
    track.direction_oracle(current, probe)
}

/// Postdiction with named stations: the world picks an interior destination
/// and an adjacent origin; the pointer device hands the passenger a probe
/// station; the passenger's only tool is [`NamedTrack::direction_oracle`].
#[derive(Debug, Clone, Copy)]
pub struct NamedPostdiction<'a> {
    track: &'a NamedTrack,
}

impl NamedPostdiction<'_> {
    pub fn trial(&self, rng: &mut RngStream) -> TrialRecord {
        let stations = &self.track.west_to_east;
        let n = stations.len();
        let destination = 1 + rng.index(n - 2);
        let (origin, actual) = if rng.bernoulli(0.5) {
            (destination - 1, Direction::East)
        } else {
            (destination + 1, Direction::West)
        };
        // Uniform over every station but the current one; drawn over station
        // handles so the draw does not depend on how stations are named.
        let mut probe = rng.index(n - 1);
        if probe >= origin {
            probe += 1;
        }
        let guess = self
            .track
            .direction_oracle(&stations[origin], &stations[probe])
            .expect("probe differs from the current station");
        TrialRecord::new("rail-named", actual, guess, TrialMode::Postdiction, rng)
    }

    /// Exact success by brute force over (destination, origin, probe),
    /// asking the oracle for every guess.
    pub fn enumerate_exact(&self) -> BigRational {
        let stations = &self.track.west_to_east;
        let n = stations.len();
        let weight = BigRational::new(1.into(), (2 * (n - 2) * (n - 1)).into());
        let mut total = BigRational::zero();
        for destination in 1..n - 1 {
            for (origin, actual) in [
                (destination - 1, Direction::East),
                (destination + 1, Direction::West),
            ] {
                for probe in (0..n).filter(|&p| p != origin) {
                    let guess = self
                        .track
                        .direction_oracle(&stations[origin], &stations[probe])
                        .expect("probe differs from origin");
                    if guess == actual {
                        total += &weight;
                    }
                }
            }
        }
        total
    }
}

pub fn simulate_named_postdiction(track: &NamedTrack, rng: &mut RngStream) -> Result<TrialRecord> {
    Ok(track.postdiction()?.trial(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(a: f64, b: f64) -> ContinuousPointer {
        ContinuousPointer::uniform(a, b).unwrap()
    }

    #[test]
    fn analytic_examples() {
        assert!((analytic_linear_success(&uniform(0.0, 10.0), 4) - 0.6).abs() < 1e-15);
        assert_eq!(analytic_linear_success(&uniform(6.0, 9.0), 4), 0.5);
        assert_eq!(analytic_linear_success(&uniform(3.2, 4.8), 4), 1.0);
    }

    #[test]
    fn analytic_requires_fair_coin() {
        let s =
            LinearScenario::postdiction(4, uniform(0.0, 10.0)).with_coin(Coin::new(0.6).unwrap());
        assert!(matches!(s.analytic_success(), Err(Error::UnfairCoin(_))));
    }

    #[test]
    fn postdiction_origins_are_neighbours() {
        let s = LinearScenario::postdiction(4, uniform(0.0, 10.0));
        let mut rng = RngStream::new(3, 0);
        for _ in 0..1000 {
            let rec = simulate_postdiction(&s, &mut rng).unwrap();
            let origin = if rec.actual_direction == Direction::East {
                3
            } else {
                5
            };
            assert!(origin == 3 || origin == 5);
        }
    }

    #[test]
    fn pointer_in_gap_is_always_right() {
        let s = LinearScenario::postdiction(4, uniform(3.0, 5.0));
        let mut rng = RngStream::new(4, 0);
        assert!((0..20_000).all(|_| simulate_postdiction(&s, &mut rng).unwrap().correct));
    }

    #[test]
    fn mode_checks() {
        let p = LinearScenario::postdiction(4, uniform(0.0, 10.0));
        let o = LinearScenario::origin_first(4, uniform(0.0, 10.0));
        let mut rng = RngStream::new(0, 0);
        assert!(simulate_prediction(&p, &mut rng).is_err());
        assert!(simulate_postdiction(&o, &mut rng).is_err());
        assert!(simulate_prediction(&o, &mut rng).is_ok());
    }

    #[test]
    fn control_with_pointer_west_always_guesses_west() {
        let dist = uniform(-10.0, 4.0);
        let mut rng = RngStream::new(8, 0);
        let n = 100_000;
        let mut right = 0;
        for _ in 0..n {
            let rec = simulate_known_station(5, &dist, &Coin::fair(), &mut rng);
            assert_eq!(rec.guessed_direction, Direction::West);
            right += rec.correct as u32;
        }
        assert!((right as f64 / n as f64 - 0.5).abs() < 0.005);
    }

    #[test]
    fn control_guess_rate_matches_cdf() {
        let dist = ContinuousPointer::gaussian(4.0, 2.0).unwrap();
        let mut rng = RngStream::new(9, 0);
        let n = 100_000;
        let east = (0..n)
            .filter(|_| {
                simulate_known_station(5, &dist, &Coin::fair(), &mut rng).guessed_direction
                    == Direction::East
            })
            .count();
        let expected = 1.0 - dist.cdf(5.0);
        assert!((east as f64 / n as f64 - expected).abs() < 0.006);
    }

    #[test]
    fn origin_first_enumeration_is_exactly_half() {
        let half = BigRational::new(1.into(), 2.into());
        for dist in [
            uniform(0.0, 10.0),
            ContinuousPointer::gaussian(5.1, 0.3).unwrap(),
        ] {
            assert_eq!(
                enumerate_linear(&LinearScenario::origin_first(5, dist)),
                half
            );
            assert_eq!(enumerate_known_station(5, &dist, &Coin::fair()), half);
        }
    }

    #[test]
    fn destination_enumeration_matches_closed_form() {
        let dist = uniform(0.0, 10.0);
        for s in [
            LinearScenario::postdiction(4, dist),
            LinearScenario::destination_first(4, dist),
        ] {
            let e = num_traits::ToPrimitive::to_f64(&enumerate_linear(&s)).unwrap();
            assert!((e - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn shared_pointer_edge_cases() {
        let s = LinearScenario::destination_first(4, uniform(0.0, 10.0));
        assert!(shared_pointer_equivalence(0, &s, 1));
        assert!(shared_pointer_equivalence(10_000, &s, 1));
    }

    #[test]
    fn independent_pointers_disagree_at_predicted_rate() {
        let s = LinearScenario::origin_first(4, uniform(0.0, 10.0));
        let observed = independent_pointer_disagreement(200_000, &s, 2);
        let expected = expected_independent_disagreement(&s);
        assert!((expected - 0.48).abs() < 1e-12);
        assert!(
            (observed - expected).abs() < 0.006,
            "{observed} vs {expected}"
        );
        let d = LinearScenario::postdiction(4, uniform(0.0, 10.0));
        let observed = independent_pointer_disagreement(200_000, &d, 3);
        assert!((observed - expected_independent_disagreement(&d)).abs() < 0.006);
    }

    fn hooterville() -> NamedTrack {
        NamedTrack::new(["Clarksville", "Hooterville", "Willoughby"]).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let t = hooterville();
        assert_eq!(
            t.direction_oracle("Hooterville", "Clarksville").unwrap(),
            Direction::West
        );
        assert_eq!(
            t.direction_oracle("Hooterville", "Willoughby").unwrap(),
            Direction::East
        );
        assert!(matches!(
            t.direction_oracle("Hooterville", "Hooterville"),
            Err(Error::SameStation(_))
        ));
        assert!(matches!(
            t.direction_oracle("Hooterville", "Petticoat Junction"),
            Err(Error::UnknownStation(_))
        ));
    }

    #[test]
    fn track_construction() {
        assert!(matches!(
            NamedTrack::new(["A", "B", "A"]),
            Err(Error::DuplicateStation(_))
        ));
        let t = NamedTrack::parse_list("# west\nZeta\n\nAlpha\nMu\n").unwrap();
        assert_eq!(t.names(), ["Alpha", "Mu", "Zeta"]);
        assert_eq!(
            t.direction_oracle("Alpha", "Zeta").unwrap(),
            Direction::West
        );
        let short = NamedTrack::new(["A", "B"]).unwrap();
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(
            simulate_named_postdiction(&short, &mut rng),
            Err(Error::TooFewStations { min: 3, got: 2 })
        ));
    }

    #[test]
    fn three_station_track_is_certain() {
        let t = hooterville();
        assert!(t.postdiction().unwrap().enumerate_exact().is_one());
        let mut rng = RngStream::new(1, 0);
        assert!((0..1000).all(|_| simulate_named_postdiction(&t, &mut rng).unwrap().correct));
    }
}
