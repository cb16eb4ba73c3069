//! Meddler in the middle: the adversary sits between the source and node n.

use agl::analytic::mitm_ages;

fn main() -> agl::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>8}", "n", "v_A", "v_n", "v_1", "v_1/v_A");
    for n in [10, 100, 1000, 10_000] {
        let ages = mitm_ages(n, 1.0)?;
        let v_a = ages.v_adversary.expect("mitm has an adversary age");
        println!(
            "{n:>6} {v_a:>10.2} {:>10.2} {:>10.2} {:>8.3}",
            ages.v_infected,
            ages.v1(),
            ages.v1() / v_a
        );
    }
    Ok(())
}
