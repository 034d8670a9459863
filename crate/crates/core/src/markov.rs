//! A finite line of stations `1..=N` with reflecting ends: the end stations
//! send the train inward, every other station flips a fair coin.
//!
//! The chain has period two, so the stationary distribution comes from a
//! direct linear solve rather than from iterating the transition matrix.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::domain::{Coin, CoinOutcome, RngStream};
use crate::error::{Error, Result};

pub const DEFAULT_MIN_END_DISTANCE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReflectingChain {
    station_count: usize,
}

impl ReflectingChain {
    pub fn new(station_count: usize) -> Result<Self> {
        if station_count < 3 {
            return Err(Error::TooFewStations {
                min: 3,
                got: station_count,
            });
        }
        Ok(ReflectingChain { station_count })
    }

    pub fn station_count(&self) -> usize {
        self.station_count
    }

    /// Row-stochastic; row and column `i` belong to station `i + 1`.
    pub fn transition_matrix(&self) -> DMatrix<f64> {
        let n = self.station_count;
        let mut p = DMatrix::zeros(n, n);
        p[(0, 1)] = 1.0;
        p[(n - 1, n - 2)] = 1.0;
        for i in 1..n - 1 {
            p[(i, i - 1)] = 0.5;
            p[(i, i + 1)] = 0.5;
        }
        p
    }

    /// Solves `pi P = pi` together with `sum(pi) = 1`. Entry `i` belongs to
    /// station `i + 1`.
    pub fn stationary_distribution(&self) -> Vec<f64> {
        let n = self.station_count;
        let p = self.transition_matrix();
        // (P^T - I) pi = 0 with the last equation swapped for normalisation.
        let mut a = p.transpose() - DMatrix::<f64>::identity(n, n);
        for j in 0..n {
            a[(n - 1, j)] = 1.0;
        }
        let mut b = DVector::zeros(n);
        b[n - 1] = 1.0;
        let pi = a
            .lu()
            .solve(&b)
            .expect("the reflecting chain is irreducible, so the system is nonsingular");
        pi.iter().copied().collect()
    }

    /// `1/(2N - 2)` at the two ends, `1/(N - 1)` elsewhere.
    pub fn closed_form_stationary(&self) -> Vec<f64> {
        let n = self.station_count;
        let end = 1.0 / (2.0 * n as f64 - 2.0);
        let interior = 1.0 / (n as f64 - 1.0);
        (1..=n)
            .map(|s| if s == 1 || s == n { end } else { interior })
            .collect()
    }

    /// `max_j |(pi P)_j - pi_j|`.
    pub fn balance_residual(&self, pi: &[f64]) -> f64 {
        let row = DVector::from_column_slice(pi).transpose();
        let moved = row * self.transition_matrix();
        moved
            .iter()
            .zip(pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn check_interior(&self, destination: i64) -> Result<usize> {
        let n = self.station_count as i64;
        if destination < 1 || destination > n {
            return Err(Error::StationOutOfRange {
                station: destination,
                count: self.station_count,
            });
        }
        if destination == 1 || destination == n {
            return Err(Error::EndDestination(destination));
        }
        Ok(destination as usize)
    }

    /// `(P(origin = d - 1 | dest = d), P(origin = d + 1 | dest = d))` by one
    /// Bayes step from the stationary distribution.
    pub fn origin_posterior(&self, destination: i64) -> Result<(f64, f64)> {
        let d = self.check_interior(destination)?;
        let pi = self.stationary_distribution();
        let p = self.transition_matrix();
        // Station s lives at index s - 1.
        let west = pi[d - 2] * p[(d - 2, d - 1)];
        let east = pi[d] * p[(d, d - 1)];
        let total = west + east;
        Ok((west / total, east / total))
    }

    /// Stations at least `min_end_distance` hops from either end.
    pub fn wake_filter(&self, min_end_distance: usize) -> Result<Vec<usize>> {
        let n = self.station_count;
        let eligible: Vec<usize> = (1..=n)
            .filter(|&d| (d - 1).min(n - d) >= min_end_distance)
            .collect();
        if eligible.is_empty() {
            return Err(Error::EmptyWakeSet {
                count: n,
                min_end_distance,
            });
        }
        Ok(eligible)
    }

    /// One step of the walk from `station`.
    pub fn step(&self, station: usize, rng: &mut RngStream) -> usize {
        if station == 1 {
            2
        } else if station == self.station_count {
            station - 1
        } else {
            match Coin::fair().flip(rng) {
                CoinOutcome::Heads => station + 1,
                CoinOutcome::Tails => station - 1,
            }
        }
    }

    /// Rejection sampler for the origin behind an observed destination: draw
    /// the origin from the stationary law, take one step, retry until the
    /// train lands on `destination`. Returns the origin.
    pub fn sample_origin_given_destination(
        &self,
        destination: usize,
        pi_cumulative: &[f64],
        rng: &mut RngStream,
    ) -> usize {
        loop {
            let u = rng.uniform();
            let origin = 1 + pi_cumulative
                .partition_point(|&c| c <= u)
                .min(self.station_count - 1);
            if self.step(origin, rng) == destination {
                return origin;
            }
        }
    }

    pub fn cumulative(pi: &[f64]) -> Vec<f64> {
        let mut running = 0.0;
        pi.iter()
            .map(|p| {
                running += p;
                running
            })
            .collect()
    }
}

pub fn transition_matrix(chain: &ReflectingChain) -> DMatrix<f64> {
    chain.transition_matrix()
}

pub fn stationary_distribution(chain: &ReflectingChain) -> Vec<f64> {
    chain.stationary_distribution()
}

pub fn origin_posterior(chain: &ReflectingChain, destination: i64) -> Result<(f64, f64)> {
    chain.origin_posterior(destination)
}

pub fn wake_filter(chain: &ReflectingChain, min_end_distance: usize) -> Result<Vec<usize>> {
    chain.wake_filter(min_end_distance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_lines() {
        assert!(ReflectingChain::new(2).is_err());
        assert!(ReflectingChain::new(3).is_ok());
    }

    #[test]
    fn three_station_matrix() {
        let p = ReflectingChain::new(3).unwrap().transition_matrix();
        let expected =
            DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.5, 0.0, 0.5, 0.0, 1.0, 0.0]);
        assert_eq!(p, expected);
    }

    #[test]
    fn matrix_shape() {
        for n in 3..20 {
            let p = ReflectingChain::new(n).unwrap().transition_matrix();
            for i in 0..n {
                assert!((p.row(i).sum() - 1.0).abs() < 1e-15);
                assert_eq!(p[(i, i)], 0.0);
                for j in 0..n {
                    if i.abs_diff(j) > 1 {
                        assert_eq!(p[(i, j)], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn stationary_examples() {
        let pi = ReflectingChain::new(3).unwrap().stationary_distribution();
        for (a, b) in pi.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-12);
        }
        let pi = ReflectingChain::new(5).unwrap().stationary_distribution();
        for (a, b) in pi.iter().zip([0.125, 0.25, 0.25, 0.25, 0.125]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn posterior_examples() {
        let c = ReflectingChain::new(5).unwrap();
        for d in [2, 3, 4] {
            let (w, e) = c.origin_posterior(d).unwrap();
            assert!((w - 0.5).abs() < 1e-12 && (e - 0.5).abs() < 1e-12);
            assert!((w + e - 1.0).abs() < 1e-15);
        }
        assert!(matches!(
            c.origin_posterior(1),
            Err(Error::EndDestination(1))
        ));
        assert!(matches!(
            c.origin_posterior(5),
            Err(Error::EndDestination(5))
        ));
        assert!(c.origin_posterior(9).is_err());
    }

    #[test]
    fn wake_filter_examples() {
        assert_eq!(
            ReflectingChain::new(7).unwrap().wake_filter(3).unwrap(),
            vec![4]
        );
        assert_eq!(
            ReflectingChain::new(10).unwrap().wake_filter(3).unwrap(),
            vec![4, 5, 6, 7]
        );
        assert!(matches!(
            ReflectingChain::new(6).unwrap().wake_filter(3),
            Err(Error::EmptyWakeSet { .. })
        ));
    }

    /// Iterating P^2 keeps each parity class's starting mass, so from a
    /// uniform start on an odd-length line it settles somewhere other than pi.
    #[test]
    fn squared_power_iteration_is_parity_locked() {
        let n = 7;
        let c = ReflectingChain::new(n).unwrap();
        let p = c.transition_matrix();
        let p2 = &p * &p;
        let mut v = DVector::from_element(n, 1.0 / n as f64).transpose();
        for _ in 0..2000 {
            v *= &p2;
        }
        let pi = c.stationary_distribution();
        let gap = v
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(gap > 0.01, "P^2 iteration should not reach pi (gap {gap})");
        // Odd stations hold 4/7 of the mass; pi gives them exactly one half.
        let odd: f64 = v.iter().step_by(2).sum();
        assert!((odd - 4.0 / 7.0).abs() < 1e-9);
    }

    #[test]
    fn rejection_sampler_is_balanced() {
        let c = ReflectingChain::new(9).unwrap();
        let cum = ReflectingChain::cumulative(&c.stationary_distribution());
        let mut rng = RngStream::new(17, 0);
        let n = 40_000;
        let west = (0..n)
            .filter(|_| c.sample_origin_given_destination(2, &cum, &mut rng) == 1)
            .count();
        assert!((west as f64 / n as f64 - 0.5).abs() < 0.01);
    }
}
