//! A train bouncing between stations 1 and N. In the long run the end
//! stations get half the weight of the others, so next to an end the two
//! possible origins are no longer equally likely unless one waits for a
//! destination far enough inside.
//!
//! cargo run --example reflecting_chain

use blackwell::markov::ReflectingChain;

fn main() -> blackwell::Result<()> {
    let chain = ReflectingChain::new(8)?;
    let pi = chain.stationary_distribution();
    println!("stationary: {:.4?}", pi);
    println!("closed form: {:.4?}", chain.closed_form_stationary());
    println!("balance residual: {:.1e}", chain.balance_residual(&pi));

    for d in 1..=8 {
        match chain.origin_posterior(d) {
            Ok((west, east)) => {
                println!("destination {d}: P(from west) = {west:.4}, P(from east) = {east:.4}")
            }
            Err(e) => println!("destination {d}: {e}"),
        }
    }
    println!(
        "wake at distance 3 from the ends: {:?}",
        chain.wake_filter(3)?
    );
    Ok(())
}
