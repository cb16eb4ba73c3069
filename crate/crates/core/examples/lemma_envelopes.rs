//! The ring kernel sum against its two Gaussian envelopes.

use agl::analytic::{lemma_envelopes, lemma_sum};

fn main() {
    println!("{:>8} {:>10} {:>10} {:>10}", "n", "lower/√n", "sum/√n", "upper/√n");
    for n in [10, 100, 10_000, 1_000_000] {
        let root = (n as f64).sqrt();
        let env = lemma_envelopes(n, n);
        println!(
            "{n:>8} {:>10.4} {:>10.4} {:>10.4}",
            env.lower / root,
            lemma_sum(n, n) / root,
            env.upper / root
        );
    }
    println!(
        "limits: {:.4} and {:.4}",
        std::f64::consts::PI.sqrt() / 2.0,
        std::f64::consts::PI.sqrt()
    );
}
