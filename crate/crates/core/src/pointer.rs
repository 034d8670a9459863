//! Pointer distributions.
//!
//! Continuous pointers live on the real line and are compared against money
//! amounts or station coordinates. On the circular track only the arc that
//! contains the pointer matters, so it is drawn as a categorical arc index.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::domain::RngStream;
use crate::error::{Error, Result};

/// Floating-point slack allowed on probability totals.
pub const TOTAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ContinuousPointer {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Gaussian { mean: f64, sd: f64 },
}

impl ContinuousPointer {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidPointer(format!(
                "uniform: a < b required, got a = {a}, b = {b}"
            )));
        }
        Ok(ContinuousPointer::Uniform { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidPointer(format!(
                "exp: rate > 0 required, got {rate}"
            )));
        }
        Ok(ContinuousPointer::Exponential { rate })
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        if !mean.is_finite() || !(sd.is_finite() && sd > 0.0) {
            return Err(Error::InvalidPointer(format!(
                "normal: finite mean and sd > 0 required, got mean = {mean}, sd = {sd}"
            )));
        }
        Ok(ContinuousPointer::Gaussian { mean, sd })
    }

    /// P(pointer <= x).
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            ContinuousPointer::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            ContinuousPointer::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            ContinuousPointer::Gaussian { mean, sd } => standard_normal().cdf((x - mean) / sd),
        }
    }

    /// Inverse-CDF draw; consumes one open-interval uniform.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let u = rng.open_uniform();
        match *self {
            ContinuousPointer::Uniform { a, b } => a + (b - a) * u,
            ContinuousPointer::Exponential { rate } => -(-u).ln_1p() / rate,
            ContinuousPointer::Gaussian { mean, sd } => {
                mean + sd * standard_normal().inverse_cdf(u)
            }
        }
    }

    /// Draws until the value differs from every entry of `boundaries`.
    ///
    /// Exact ties have probability zero in theory, but a guess needs a strict
    /// side, so a pointer landing on a comparison point is redrawn.
    pub fn sample_avoiding(&self, rng: &mut RngStream, boundaries: &[f64]) -> f64 {
        loop {
            let x = self.sample(rng);
            if !boundaries.contains(&x) {
                return x;
            }
        }
    }

    pub fn gap_probabilities(&self, lo: f64, hi: f64) -> Result<GapProbabilities> {
        if lo.partial_cmp(&hi) != Some(Ordering::Less) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        let below = self.cdf(lo);
        let at_or_below_hi = self.cdf(hi);
        Ok(GapProbabilities {
            p: below,
            q: 1.0 - at_or_below_hi,
            r: at_or_below_hi - below,
        })
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal is valid")
}

/// Parses `uniform:a,b`, `exp:rate` or `normal:mean,sd`.
impl FromStr for ContinuousPointer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidPointer(format!("expected <kind>:<params>, got {s:?}")))?;
        let params = parse_floats(args)?;
        let expect = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidPointer(format!(
                    "{kind} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match kind.trim() {
            "uniform" => {
                expect(2)?;
                ContinuousPointer::uniform(params[0], params[1])
            }
            "exp" => {
                expect(1)?;
                ContinuousPointer::exponential(params[0])
            }
            "normal" => {
                expect(2)?;
                ContinuousPointer::gaussian(params[0], params[1])
            }
            other => Err(Error::InvalidPointer(format!(
                "unknown distribution kind {other:?} (expected uniform, exp or normal)"
            ))),
        }
    }
}

impl fmt::Display for ContinuousPointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuousPointer::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            ContinuousPointer::Exponential { rate } => write!(f, "exp:{rate}"),
            ContinuousPointer::Gaussian { mean, sd } => write!(f, "normal:{mean},{sd}"),
        }
    }
}

fn parse_floats(args: &str) -> Result<Vec<f64>> {
    args.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidPointer(format!("not a finite number: {t:?}")))
        })
        .collect()
}

/// The pointer's position relative to a pair of values `lo < hi`:
/// `p` below `lo`, `q` above `hi`, `r` in the gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapProbabilities {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl GapProbabilities {
    pub fn total(&self) -> f64 {
        self.p + self.q + self.r
    }
}

pub fn cdf(dist: &ContinuousPointer, x: f64) -> f64 {
    dist.cdf(x)
}

pub fn sample(dist: &ContinuousPointer, rng: &mut RngStream) -> f64 {
    dist.sample(rng)
}

pub fn gap_probabilities(dist: &ContinuousPointer, lo: f64, hi: f64) -> Result<GapProbabilities> {
    dist.gap_probabilities(lo, hi)
}

/// Scalar type for arc weights and exact enumeration: `f64` or `BigRational`.
pub trait Weight:
    Num + Clone + PartialOrd + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync
{
    /// Whether `total` counts as one: exact for rationals, within
    /// [`TOTAL_TOLERANCE`] for floats.
    fn is_unit_total(total: &Self) -> bool;

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn from_count(n: usize) -> Self {
        (0..n).fold(Self::zero(), |acc, _| acc + Self::one())
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Weight for f64 {
    fn is_unit_total(total: &Self) -> bool {
        (total - 1.0).abs() <= TOTAL_TOLERANCE
    }

    fn from_count(n: usize) -> Self {
        n as f64
    }
}

impl Weight for BigRational {
    fn is_unit_total(total: &Self) -> bool {
        total.is_one()
    }

    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Arc probabilities around the circular track. Entry `k` is the arc between
/// station `k - 1` and station `k`; entry 0 closes the loop from the last
/// station back to station 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcWeights<W = f64> {
    weights: Vec<W>,
    cumulative: Vec<f64>,
}

impl<W: Weight> ArcWeights<W> {
    pub fn new(weights: Vec<W>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArcWeights(
                "at least one arc is required".into(),
            ));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| w.partial_cmp(&&W::zero()) != Some(Ordering::Greater))
        {
            return Err(Error::InvalidArcWeights(format!(
                "weight {i} must be positive, got {w}"
            )));
        }
        let total = weights.iter().cloned().fold(W::zero(), |a, b| a + b);
        if !W::is_unit_total(&total) {
            return Err(Error::InvalidArcWeights(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        let mut running = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                running += w.as_f64();
                running
            })
            .collect();
        // Pin the last edge so rounding never leaves a gap above it.
        if let Some(last) = cumulative.last_mut() {
            *last = f64::INFINITY;
        }
        Ok(ArcWeights {
            weights,
            cumulative,
        })
    }

    pub fn uniform(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArcWeights(
                "at least one arc is required".into(),
            ));
        }
        let each = W::one() / W::from_count(count);
        Self::new(vec![each; count])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    /// Weight of arc `index`, wrapping modulo the arc count.
    pub fn weight(&self, index: usize) -> &W {
        &self.weights[index % self.weights.len()]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.weights.iter().map(Weight::as_f64).collect()
    }

    /// Draws an arc index with probability equal to its weight.
    pub fn sample(&self, rng: &mut RngStream) -> usize {
        let u = rng.uniform();
        self.cumulative.partition_point(|&c| c <= u)
    }
}

pub fn arc_sample<W: Weight>(arcs: &ArcWeights<W>, rng: &mut RngStream) -> usize {
    arcs.sample(rng)
}

/// Arc weights as parsed from an `arcs:` spec: exact when every entry is an
/// integer, decimal or fraction, floating otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedArcs {
    Exact(ArcWeights<BigRational>),
    Float(ArcWeights<f64>),
}

impl ParsedArcs {
    pub fn len(&self) -> usize {
        match self {
            ParsedArcs::Exact(a) => a.len(),
            ParsedArcs::Float(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            ParsedArcs::Exact(a) => a.to_f64(),
            ParsedArcs::Float(a) => a.to_f64(),
        }
    }
}

/// Parses `arcs:w0,w1,...,wN`.
impl FromStr for ParsedArcs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_prefix("arcs:").ok_or_else(|| {
            Error::InvalidArcWeights(format!("expected arcs:w0,w1,..., got {s:?}"))
        })?;
        let tokens: Vec<&str> = body.split(',').map(str::trim).collect();
        let exact: Option<Vec<BigRational>> = tokens.iter().map(|t| parse_exact(t)).collect();
        match exact {
            Some(ws) => ArcWeights::new(ws).map(ParsedArcs::Exact),
            None => {
                let ws = tokens
                    .iter()
                    .map(|t| {
                        t.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| Error::InvalidArcWeights(format!("not a number: {t:?}")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                ArcWeights::new(ws).map(ParsedArcs::Float)
            }
        }
    }
}

/// Exact reading of `7`, `0.125` or `3/8`.
pub fn parse_exact(token: &str) -> Option<BigRational> {
    let token = token.trim();
    if let Some((n, d)) = token.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (int_part, frac_part) = token.split_once('.').unwrap_or((token, ""));
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    if int_digits.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_digits
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_digits}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}
