//! Flipping the adversary's coins per packet and pre-thinning the Poisson
//! rates give the same age statistics.

use agl::model::{AdversaryPolicy, NetworkKind, NetworkSpec};
use agl::simulator::{coin_mode_equivalence, SimConfig};

fn main() -> agl::Result<()> {
    for kind in [
        NetworkKind::FullyConnectedCapture,
        NetworkKind::UnidirectionalRingCapture,
    ] {
        let spec = NetworkSpec::new(kind, 10, 1.0, AdversaryPolicy::new(0.5, 0.5))?;
        let cmp = coin_mode_equivalence(&SimConfig::new(spec, 20_000.0).with_seed(11), 20)?;
        let (e, t) = (cmp.explicit.node(1), cmp.thinned.node(1));
        println!(
            "{kind}: node 1 explicit {:.3} ± {:.3}, thinned {:.3} ± {:.3}, verdict {:?}",
            e.0,
            e.1.unwrap_or(0.0),
            t.0,
            t.1.unwrap_or(0.0),
            cmp.verdict().map_err(|e| e.to_string())
        );
    }
    Ok(())
}
