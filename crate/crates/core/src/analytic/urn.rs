use super::series::RingKernel;
use super::{check_params, AgeBounds, AnalyticAges, BoundTarget};
use crate::error::{Error, Result};
use crate::model::NetworkKind;

/// `v_{1..m}`: the arc starting right after the infected node, fed by it at rate `pλ`.
fn head_arc_age(n: usize, lambda: f64, p: f64, m: usize, v_n: f64) -> f64 {
    let frac = m as f64 / n as f64;
    if p == 0.0 {
        // nothing from node n is ever accepted; only the source refreshes the arc
        1.0 / (lambda * frac)
    } else {
        (1.0 / lambda + p * v_n) / (p + frac)
    }
}

/// Exact ages on the unidirectional ring with node `n` captured.
///
/// `v_m = S_{m-1}/λ + Π_{m-1} v_{1..m}`, where `Π_j` is the prefix product,
/// `S_j` its running sum, and `v_{1..m}` depends on `v_n`. For `q < 1`,
/// `v_{n-1}` is affine in `v_n`, which closes the loop through `n-1 -> n`.
pub fn urn_capture_ages(n: usize, lambda: f64, p: f64, q: f64) -> Result<AnalyticAges> {
    check_params(n, lambda, p, q)?;
    let nf = n as f64;
    let kernel = RingKernel::new(n, n - 1);
    let (pi, s) = (&kernel.products, &kernel.sums);

    let v_n = if q == 1.0 {
        nf / lambda
    } else {
        let leak = 1.0 - q;
        let pre = n - 2;
        let arc_denom = p + (nf - 1.0) / nf;
        // v_{n-1} = base + slope * v_n
        let base = s[pre] / lambda + pi[pre] / (lambda * arc_denom);
        let slope = p * pi[pre] / arc_denom;
        (1.0 / lambda + leak * base) / (leak + 1.0 / nf - leak * slope)
    };

    let v_regular = (1..n)
        .map(|m| s[m - 1] / lambda + pi[m - 1] * head_arc_age(n, lambda, p, m, v_n))
        .collect();
    AnalyticAges {
        kind: NetworkKind::UnidirectionalRingCapture,
        n,
        v_regular,
        v_infected: v_n,
        v_adversary: None,
        v_sets_with_n: None,
    }
    .check_finite()
}

/// Ring without adversary: all nodes share `(S_{n-1} + Π_{n-1})/λ`.
pub fn honest_urn_ages(n: usize, lambda: f64) -> Result<AnalyticAges> {
    check_params(n, lambda, 0.0, 0.0)?;
    let kernel = RingKernel::new(n, n - 1);
    let v = (kernel.sums[n - 1] + kernel.products[n - 1]) / lambda;
    AnalyticAges {
        kind: NetworkKind::UnidirectionalRingCapture,
        n,
        v_regular: vec![v; n - 1],
        v_infected: v,
        v_adversary: None,
        v_sets_with_n: None,
    }
    .check_finite()
}

/// Sandwich on `v_m` from bounding the head-arc denominator `p + m/n` between
/// `p(1 + m/n)` and `1 + m/n`.
pub fn urn_age_bounds(n: usize, lambda: f64, p: f64, m: usize, v_n: f64) -> Result<AgeBounds> {
    check_params(n, lambda, p, 0.0)?;
    if p == 0.0 {
        return Err(Error::BoundInapplicable {
            bound: "urn-prefix-product-sandwich",
            reason: "upper bound divides by p = 0".into(),
        });
    }
    if !(1..n).contains(&m) {
        return Err(Error::BoundInapplicable {
            bound: "urn-prefix-product-sandwich",
            reason: format!("node index m={m} outside 1..{n}"),
        });
    }
    let kernel = RingKernel::new(n, m);
    let (sum, prod) = (kernel.sums[m], kernel.products[m]);
    Ok(AgeBounds {
        target: BoundTarget::Node(m),
        lower: sum / lambda + p * v_n * prod,
        upper: sum / (p * lambda) + v_n * prod,
        label: "urn-prefix-product-sandwich",
    })
}

/// Upper bound on the infected node's age when it both sends (`p > 0`) and
/// receives (`q < 1`): `(1/(1-q) + S_n + 1/(p + 1/2)) / (λ (1 - p/(p + 1/2)))`.
pub fn urn_infected_upper_bound(n: usize, lambda: f64, p: f64, q: f64) -> Result<AgeBounds> {
    check_params(n, lambda, p, q)?;
    if p == 0.0 || q == 1.0 {
        return Err(Error::BoundInapplicable {
            bound: "urn-leaky-infected",
            reason: format!("needs p > 0 and q < 1, got p={p}, q={q}"),
        });
    }
    let s_n = RingKernel::new(n, n).sums[n];
    let half = p + 0.5;
    Ok(AgeBounds {
        target: BoundTarget::Node(n),
        lower: 0.0,
        upper: (1.0 / (1.0 - q) + s_n + 1.0 / half) / (lambda * (1.0 - p / half)),
        label: "urn-leaky-infected",
    })
}
