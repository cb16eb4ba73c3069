//! Age along a unidirectional ring with a captured node: nodes close to the
//! adversary age linearly, far nodes keep the honest square-root scaling.

use agl::experiments::{scaling_exponent, sweep, NodeSelector};
use agl::model::{AdversaryPolicy, NetworkKind, NetworkSpec};

fn main() -> agl::Result<()> {
    let spec = NetworkSpec::new(
        NetworkKind::UnidirectionalRingCapture,
        2,
        1.0,
        AdversaryPolicy::new(0.5, 1.0),
    )?;
    let ns: Vec<usize> = (0..=20)
        .map(|i| (1000.0 * 10f64.powf(i as f64 / 20.0)) as usize)
        .collect();
    for alpha in [0.3, 0.5, 0.8] {
        let result = sweep(&spec, &ns, NodeSelector::PowerLaw { alpha }, None)?;
        let points: Vec<(f64, f64)> = result.rows.iter().map(|r| (r.n as f64, r.analytic)).collect();
        let fit = scaling_exponent(&points)?;
        let last = result.rows.last().expect("non-empty sweep");
        println!(
            "m = n^{alpha}: exponent {:.3} over {} sizes; at n = {} (m = {}) v_m/sqrt(n) = {:.3}",
            fit.exponent,
            fit.rows_used,
            last.n,
            last.node_label,
            last.analytic / (last.n as f64).sqrt()
        );
    }
    Ok(())
}
