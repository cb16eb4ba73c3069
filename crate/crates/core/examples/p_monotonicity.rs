//! With incoming gossip blocked, the network age grows with the probability
//! of stamping outgoing packets as fresh, so p = 1 is the adversary's best play.

use agl::analytic::{fcn_capture_ages, fcn_p_monotonicity_check};

fn main() -> agl::Result<()> {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    for n in [2, 10, 100, 1000] {
        let verdict = fcn_p_monotonicity_check(n, 1.0, &grid)?;
        let v1: Vec<String> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&p| fcn_capture_ages(n, 1.0, p, 1.0).map(|a| format!("{:.2}", a.v1())))
            .collect::<agl::Result<_>>()?;
        println!("n = {n:>4}: {verdict:?}; v_1 at p = 0, 0.5, 1: {}", v1.join(", "));
    }
    Ok(())
}
