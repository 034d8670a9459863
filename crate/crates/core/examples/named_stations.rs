//! Stations known only by name. The passenger may ask whether one station
//! lies east or west of another, and postdicts by probing a random station.
//! Renaming the stations changes nothing.
//!
//! cargo run --example named_stations

use blackwell::railroad::NamedTrack;
use blackwell::{TrialRunner, Weight};

fn main() -> blackwell::Result<()> {
    let track = NamedTrack::parse_list(
        "# west to east
         Quarry
         Ferndale
         Ashgrove
         Millbrook
         Dunmore
         Caldwell",
    )?;
    println!("alphabetical list: {:?}", track.names());
    println!(
        "Dunmore is {:?} of Ashgrove",
        track.direction_oracle("Ashgrove", "Dunmore")?
    );

    let protocol = track.postdiction()?;
    let runner = TrialRunner::new(3);
    let est = runner.run(200_000, |rng| protocol.trial(rng))?;
    println!(
        "{} stations: exact {:.4}, simulated {:.4}",
        track.len(),
        protocol.enumerate_exact().as_f64(),
        est.point_estimate
    );

    let renamed = NamedTrack::new(["Zephyr", "Alder", "Yarrow", "Birch", "Xenia", "Cedar"])?;
    let first: Vec<bool> = runner.collect(1000, |rng| protocol.trial(rng).correct);
    let renamed_protocol = renamed.postdiction()?;
    let second: Vec<bool> = runner.collect(1000, |rng| renamed_protocol.trial(rng).correct);
    println!("same outcomes after renaming: {}", first == second);
    Ok(())
}
