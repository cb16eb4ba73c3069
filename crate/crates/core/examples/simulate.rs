//! Replicated simulation against the exact recursions.

use agl::experiments::{compare_sim_analytic, SimParams};
use agl::model::{AdversaryPolicy, NetworkKind, NetworkSpec};

fn main() -> agl::Result<()> {
    let params = SimParams::new(20_000.0, 10).with_seed(7);
    for kind in NetworkKind::ALL {
        let spec = NetworkSpec::new(kind, 12, 1.0, AdversaryPolicy::new(0.5, 0.5))?;
        let cmp = compare_sim_analytic(&spec, &params)?;
        println!(
            "{kind}: {} events, max relative error {:.2}%, intervals missing the exact value at {:?}",
            cmp.report.events_processed,
            100.0 * cmp.max_rel_err,
            cmp.ci_excludes
        );
        let (mean, ci) = cmp.report.node(spec.n);
        println!(
            "  node n: simulated {mean:.3} ± {:.3}, exact {:.3}",
            ci.unwrap_or(0.0),
            cmp.analytic[spec.n - 1]
        );
    }
    Ok(())
}
