#![allow(dead_code)]

pub mod shs_oracle;

use agl::analytic::AnalyticAges;
use agl::model::{NetworkKind, NetworkSpec};
use shs_oracle::{edges, set, solve, Topology};

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn topology(kind: NetworkKind) -> Topology {
    match kind {
        NetworkKind::FullyConnectedCapture => Topology::FcnCapture,
        NetworkKind::FullyConnectedMitm => Topology::Mitm,
        NetworkKind::UnidirectionalRingCapture => Topology::UrnCapture,
    }
}

/// Every quantity in `ages` paired with the brute-force value of the same functional.
pub fn oracle_pairs(spec: &NetworkSpec, ages: &AnalyticAges) -> Vec<(String, f64, f64)> {
    let n = spec.n;
    let es = edges(
        topology(spec.kind),
        spec.honest,
        n,
        spec.lambda,
        spec.policy.p,
        spec.policy.q,
    );
    let mut targets: Vec<u64> = (1..=n).map(|i| set(&[i])).collect();
    let fcn = !spec.kind.is_ring();
    if fcn {
        targets.extend((1..n).map(|k| set(&(1..=k).collect::<Vec<_>>())));
    }
    if spec.kind == NetworkKind::FullyConnectedMitm {
        targets.push(set(&[n + 1]));
        targets.extend((1..n).map(|k| set(&(1..=k).chain([n]).collect::<Vec<_>>())));
    }
    let sol = solve(&es, &targets);

    let mut out = Vec::new();
    for (k, &v) in ages.v_regular.iter().enumerate() {
        let k = k + 1;
        let exact = if fcn {
            sol.get(set(&(1..=k).collect::<Vec<_>>()))
        } else {
            sol.node(k)
        };
        out.push((format!("regular[{k}]"), v, exact));
    }
    for i in 1..=n {
        out.push((format!("node {i}"), ages.node_age(i), sol.node(i)));
    }
    if let Some(a) = ages.v_adversary {
        out.push(("adversary".into(), a, sol.node(n + 1)));
    }
    for (k, &w) in ages.v_sets_with_n.iter().flatten().enumerate() {
        let k = k + 1;
        out.push((
            format!("sets_with_n[{k}]"),
            w,
            sol.get(set(&(1..=k).chain([n]).collect::<Vec<_>>())),
        ));
    }
    out
}
