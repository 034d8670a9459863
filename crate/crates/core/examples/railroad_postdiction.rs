//! A train on the integer line hopped one station on a coin toss and is now
//! at a known destination. The passenger compares a pointer with the
//! destination to guess which way it came, and does no better than a coin
//! when told the station it left from.
//!
//! cargo run --example railroad_postdiction

use blackwell::railroad::{
    enumerate_known_station, enumerate_linear, simulate_known_station, simulate_trial,
    LinearScenario,
};
use blackwell::stats::exceeds_half_test;
use blackwell::{Coin, ContinuousPointer, TrialRunner, Weight};

fn main() -> blackwell::Result<()> {
    let dist = ContinuousPointer::uniform(0.0, 10.0)?;
    let runner = TrialRunner::new(11);

    println!("destination  analytic  exact     simulated");
    for d in [-3, 0, 4, 9, 12] {
        let s = LinearScenario::postdiction(d, dist);
        let est = runner.run(200_000, |rng| simulate_trial(&s, rng))?;
        println!(
            "{d:>11}  {:.4}    {:.4}    {:.4}",
            s.analytic_success()?,
            enumerate_linear(&s).as_f64(),
            est.point_estimate
        );
    }

    let coin = Coin::fair();
    let control = runner.run(200_000, |rng| simulate_known_station(5, &dist, &coin, rng))?;
    let test = exceeds_half_test(&control)?;
    println!(
        "known origin 5: exact {:.4}, simulated {:.4}, z = {:.2}, better than 1/2: {}",
        enumerate_known_station(5, &dist, &coin).as_f64(),
        control.point_estimate,
        test.z,
        test.significant
    );
    Ok(())
}
