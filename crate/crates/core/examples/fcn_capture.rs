//! Exact ages in a fully connected network with one captured node, next to
//! the closed-form bounds for each adversary regime.

use agl::analytic::{fcn_capture_ages, fcn_case_bounds, harmonic_number};

fn main() -> agl::Result<()> {
    let n = 100;
    let lambda = 1.0;
    println!("n = {n}, H_(n-1) = {:.4}", harmonic_number(n as u64 - 1));
    for (p, q) in [(1.0, 1.0), (0.5, 1.0), (0.0, 0.5), (0.5, 0.5)] {
        let ages = fcn_capture_ages(n, lambda, p, q)?;
        println!(
            "\np = {p}, q = {q}: v_1 = {:.4}, v_n = {:.4}",
            ages.v1(),
            ages.v_infected
        );
        match fcn_case_bounds(n, lambda, p, q) {
            Ok(bounds) => {
                for b in bounds {
                    println!("  {:<22} {:?}: [{:.4}, {:.4}]", b.label, b.target, b.lower, b.upper);
                }
            }
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
