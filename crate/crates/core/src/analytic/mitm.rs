use super::{check_params, AnalyticAges};
use crate::error::Result;
use crate::model::NetworkKind;

/// `v_{S_k ∪ {n}}` for `k = 0..=n-1`; entry 0 is `v_n` itself.
fn sets_with_infected(n: usize, lambda: f64, v_a: f64) -> Vec<f64> {
    let nf = n as f64;
    let m1 = (n - 1) as f64;
    let mut w = vec![0.0; n];
    let mut next = 0.0;
    for k in (0..n).rev() {
        let kf = k as f64;
        // regular nodes outside S_k gossiping into any of the k + 1 members
        let inflow = (kf + 1.0) * (m1 - kf) / m1;
        next = (1.0 / lambda + inflow * next + v_a) / (kf / nf + inflow + 1.0);
        w[k] = next;
    }
    w
}

/// Exact ages under a MITM adversary `A` feeding node `n` at rate `λ`.
///
/// Uses the exact stationarity coefficients (no `1/(n-1) ≈ 1/n` shortcut).
/// `v_infected` is the `k = 0` member of the `S_k ∪ {n}` family.
pub fn mitm_ages(n: usize, lambda: f64) -> Result<AnalyticAges> {
    check_params(n, lambda, 0.0, 0.0)?;
    let nf = n as f64;
    let m1 = (n - 1) as f64;
    let v_a = nf / lambda;
    let w = sets_with_infected(n, lambda, v_a);

    let mut sets = vec![0.0; n - 1];
    let mut next = 0.0;
    for k in (1..n).rev() {
        let carry = (n - k - 1) as f64 / m1;
        next = (1.0 / (k as f64 * lambda) + carry * next + w[k] / m1) / (1.0 / nf + carry + 1.0 / m1);
        sets[k - 1] = next;
    }
    AnalyticAges {
        kind: NetworkKind::FullyConnectedMitm,
        n,
        v_regular: sets,
        v_infected: w[0],
        v_adversary: Some(v_a),
        v_sets_with_n: Some(w[1..].to_vec()),
    }
    .check_finite()
}

/// `v_1` from the large-`n` rescaled recursion `y_k = v_{S_k}(n-k)/(n-1)`, where
/// the `1/n` source term in the denominator is replaced by `1/(n-1)`.
#[cfg(test)]
pub(crate) fn mitm_v1_large_n_form(n: usize, lambda: f64) -> f64 {
    let m1 = (n - 1) as f64;
    let w = sets_with_infected(n, lambda, n as f64 / lambda);
    let mut y = 0.0;
    for k in (1..n).rev() {
        let gap = (n - k) as f64;
        y = gap / (gap + 1.0) * (y + 1.0 / (k as f64 * lambda) + w[k] / m1);
    }
    y
}
