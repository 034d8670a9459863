//! The loop with a reference station. Conditioned on a destination away
//! from the RS the closed form holds; averaged over a uniformly placed train
//! the guess is right exactly half the time.
//!
//! cargo run --example circular_track

use num_rational::BigRational;

use blackwell::circular::{CircularTrack, RsPolicy};
use blackwell::{ArcWeights, TrialRunner};

fn main() -> blackwell::Result<()> {
    let weights = (1..=10)
        .map(|i| BigRational::new(i.into(), 55.into()))
        .collect();
    let track = CircularTrack::new(ArcWeights::new(weights)?)?;
    let runner = TrialRunner::new(9);

    let fixed = RsPolicy::FixedStation(0);
    println!("RS fixed at station 0");
    println!("  k  closed form  exact");
    for k in 0..track.station_count() {
        let exact = track.conditional_success_given_destination(k, fixed)?;
        let formula = track
            .paper_conditional_success(k, 0)
            .map(|v| v.to_string())
            .unwrap_or_else(|_| "-".into());
        println!("{k:>3}  {formula:>11}  {exact}");
    }

    for policy in [fixed, RsPolicy::OppositePassenger] {
        let est = runner.run(500_000, |rng| track.simulate_forward(policy, rng))?;
        println!(
            "{policy}: claimed average {}, exact {}, simulated {:.4}",
            track.paper_average_success(),
            track.enumerate_exact(policy)?,
            est.point_estimate
        );
    }
    Ok(())
}
