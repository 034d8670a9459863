use thiserror::Error;

/// Everything that can go wrong while configuring or running a scenario.
///
/// Trial loops themselves are infallible; every variant here is raised while
/// validating inputs, before any randomness is consumed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability must lie in (0, 1), got {0}")]
    InvalidProbability(f64),

    #[error("closed-form calculators require a fair coin, got heads probability {0}")]
    UnfairCoin(f64),

    #[error("invalid pointer distribution: {0}")]
    InvalidPointer(String),

    #[error("interval endpoints must satisfy lo < hi, got lo = {lo}, hi = {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("envelope amounts must satisfy 0 < lesser < greater, got lesser = {lesser}, greater = {greater}")]
    InvalidEnvelopePair { lesser: f64, greater: f64 },

    #[error("invalid arc weights: {0}")]
    InvalidArcWeights(String),

    #[error("stationCount >= {min} required, got {got}")]
    TooFewStations { min: usize, got: usize },

    #[error("track too large for exact enumeration: {got} stations (max {max})")]
    TrackTooLarge { max: usize, got: usize },

    #[error("station {station} out of range for a track with {count} stations")]
    StationOutOfRange { station: i64, count: usize },

    #[error("the two stations must differ (both are {0})")]
    SameStation(String),

    #[error("unknown station name {0:?}")]
    UnknownStation(String),

    #[error("duplicate station name {0:?}")]
    DuplicateStation(String),

    #[error("reference station {rs} lies on the minor arc around destination {destination}")]
    ReferenceInsideMinorArc { rs: usize, destination: usize },

    #[error("destination {0} is an end station; its origin is forced")]
    EndDestination(i64),

    #[error("no destination is at least {min_end_distance} stations from an end of a {count}-station line")]
    EmptyWakeSet {
        count: usize,
        min_end_distance: usize,
    },

    #[error("scenario mode {0} is not valid for this operation")]
    WrongMode(&'static str),

    #[error("at least one trial is required")]
    NoTrials,

    #[error("at least {min} trials are required for the normal approximation, got {got}")]
    SampleTooSmall { min: u64, got: u64 },

    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidConfidence(f64),

    #[error("{field}: {message}")]
    Config { field: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
