//! Two framings of prediction. Fixing the destination first and drawing the
//! pointer before the toss keeps the postdiction rate; fixing the origin and
//! tossing afterwards leaves the pointer independent of the toss.
//!
//! cargo run --example second_passenger

use blackwell::railroad::{
    enumerate_linear, expected_independent_disagreement, independent_pointer_disagreement,
    shared_pointer_equivalence, simulate_trial, LinearScenario,
};
use blackwell::{ContinuousPointer, TrialRunner, Weight};

fn main() -> blackwell::Result<()> {
    let dist = ContinuousPointer::uniform(0.0, 10.0)?;
    let runner = TrialRunner::new(5);

    for s in [
        LinearScenario::destination_first(4, dist),
        LinearScenario::origin_first(3, dist),
    ] {
        let est = runner.run(200_000, |rng| simulate_trial(&s, rng))?;
        println!(
            "{:?}: exact {:.4}, simulated {:.4}",
            s.mode(),
            enumerate_linear(&s).as_f64(),
            est.point_estimate
        );
    }

    let s = LinearScenario::origin_first(4, dist);
    println!(
        "shared pointer, guesses always equal: {}",
        shared_pointer_equivalence(10_000, &s, 5)
    );
    println!(
        "independent pointers disagree on {:.4} of trials (expected {:.4})",
        independent_pointer_disagreement(100_000, &s, 5),
        expected_independent_disagreement(&s)
    );
    Ok(())
}
