//! One sample path of the captured node's age: a sawtooth that only the
//! source can reset when incoming gossip is blocked.

use agl::model::{AdversaryPolicy, Endpoint, NetworkKind, NetworkSpec};
use agl::simulator::{trajectory_probe, SimConfig};

fn main() -> agl::Result<()> {
    let spec = NetworkSpec::new(
        NetworkKind::FullyConnectedCapture,
        5,
        1.0,
        AdversaryPolicy::worst_case(),
    )?;
    let config = SimConfig::new(spec, 40.0).with_seed(3);
    let times: Vec<f64> = (0..=40).map(f64::from).collect();
    let infected = trajectory_probe(&config, Endpoint::Node(5), &times)?;
    let regular = trajectory_probe(&config, Endpoint::Node(1), &times)?;
    println!("{:>4} {:>8} {:>8}", "t", "X_1", "X_n");
    for ((t, a), b) in times.iter().zip(&regular).zip(&infected) {
        println!("{t:>4} {a:>8.3} {b:>8.3}  {}", "#".repeat(b.round() as usize));
    }
    Ok(())
}
