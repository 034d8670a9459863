//! Two envelopes, one holding twice the other. Open one, draw a pointer and
//! switch when the pointer is above what you see.
//!
//! cargo run --example envelope_bet

use blackwell::envelope::{analytic_success, play_round, EnvelopePair};
use blackwell::{ContinuousPointer, TrialRunner};

fn main() -> blackwell::Result<()> {
    let pair = EnvelopePair::new(1.0, 2.0)?;
    let runner = TrialRunner::new(7);

    for spec in ["uniform:0,3", "exp:0.7", "normal:1.5,1", "uniform:5,6"] {
        let dist: ContinuousPointer = spec.parse()?;
        let gaps = dist.gap_probabilities(1.0, 2.0)?;
        let est = runner.run(200_000, |rng| play_round(&pair, &dist, rng))?;
        println!(
            "{spec:<14} p = {:.3}  r = {:.3}  q = {:.3}  analytic {:.4}  simulated {:.4} [{:.4}, {:.4}]",
            gaps.p,
            gaps.r,
            gaps.q,
            analytic_success(&dist, &pair),
            est.point_estimate,
            est.ci_low,
            est.ci_high
        );
    }
    Ok(())
}
