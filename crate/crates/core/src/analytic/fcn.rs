use super::{check_params, harmonic_number, AgeBounds, AnalyticAges, BoundTarget};
use crate::error::{Error, Result, Violations};
use crate::model::NetworkKind;

/// `v_{S_k} = a_k + b_k v_n`, propagated from `k = n-1` down to `k = 1`.
fn set_ages_affine(n: usize, lambda: f64, p: f64) -> Vec<(f64, f64)> {
    let nf = n as f64;
    let m1 = (n - 1) as f64;
    let mut coeffs = vec![(0.0, 0.0); n];
    let (mut a_next, mut b_next) = (0.0, 0.0);
    for k in (1..n).rev() {
        let kf = k as f64;
        let carry = (n - k - 1) as f64 / m1;
        let denom = 1.0 / nf + carry + p / m1;
        let a = (1.0 / (kf * lambda) + carry * a_next) / denom;
        let b = (carry * b_next + p / m1) / denom;
        coeffs[k] = (a, b);
        (a_next, b_next) = (a, b);
    }
    coeffs
}

/// Exact ages of the fully connected network with node `n` captured.
///
/// ```
/// let ages = agl::analytic::fcn_capture_ages(3, 1.0, 1.0, 1.0).unwrap();
/// assert!((ages.v_infected - 3.0).abs() < 1e-12);
/// assert!((ages.v1() - 2.775).abs() < 1e-12);
/// ```
pub fn fcn_capture_ages(n: usize, lambda: f64, p: f64, q: f64) -> Result<AnalyticAges> {
    check_params(n, lambda, p, q)?;
    let coeffs = set_ages_affine(n, lambda, p);
    let (a1, b1) = coeffs[1];
    let leak = 1.0 - q;
    let v_n = (1.0 / lambda + leak * a1) / (1.0 / n as f64 + leak * (1.0 - b1));
    AnalyticAges {
        kind: NetworkKind::FullyConnectedCapture,
        n,
        v_regular: coeffs[1..].iter().map(|&(a, b)| a + b * v_n).collect(),
        v_infected: v_n,
        v_adversary: None,
        v_sets_with_n: None,
    }
    .check_finite()
}

/// Fully connected network without adversary; every node behaves like a regular node.
pub fn honest_fcn_ages(n: usize, lambda: f64) -> Result<AnalyticAges> {
    check_params(n, lambda, 0.0, 0.0)?;
    let nf = n as f64;
    let m1 = (n - 1) as f64;
    // v_{S_n} = 1/λ: the whole network is refreshed by the source at total rate λ.
    let mut next = 1.0 / lambda;
    let mut sets = vec![0.0; n];
    for k in (1..n).rev() {
        let carry = (n - k) as f64 / m1;
        next = (1.0 / (k as f64 * lambda) + carry * next) / (1.0 / nf + carry);
        sets[k - 1] = next;
    }
    sets.truncate(n - 1);
    AnalyticAges {
        kind: NetworkKind::FullyConnectedCapture,
        n,
        v_infected: sets[0],
        v_regular: sets,
        v_adversary: None,
        v_sets_with_n: None,
    }
    .check_finite()
}

/// Closed-form bounds applicable to the `(p, q)` regime.
///
/// * `p > 0, q = 1`: harmonic lower bound plus `p v_n / 2`, and `H_{n-1}/λ + p v_n` above.
/// * `p = 0`: the e-capped harmonic bound on `v_1`, and for `q < 1` the offset bound on `v_n`.
/// * `p > 0, q < 1`: the leaky-adversary bound on `v_1` and the offset bound on `v_n`.
///
/// The harmonic lower bound holds in every regime and is always included.
/// The `p > 0` upper bounds need `n p ≥ 1`; the leaky-adversary bound also needs `p < 1`.
pub fn fcn_case_bounds(n: usize, lambda: f64, p: f64, q: f64) -> Result<Vec<AgeBounds>> {
    check_params(n, lambda, p, q)?;
    let ages = fcn_capture_ages(n, lambda, p, q)?;
    let nf = n as f64;
    let h = harmonic_number((n - 1) as u64);
    let v_n = ages.v_infected;
    let harmonic_floor = (h - (nf - 1.0) / nf) / lambda + p * v_n / 2.0;
    let offset_bound = || AgeBounds {
        target: BoundTarget::Node(n),
        lower: 0.0,
        upper: 1.0 / (lambda * (1.0 - q)) + ages.v1(),
        label: "fcn-infected-offset",
    };
    let needs_np = |bound: &'static str| -> Result<()> {
        if nf * p < 1.0 {
            return Err(Error::BoundInapplicable {
                bound,
                reason: format!("requires n·p ≥ 1, got n={n}, p={p}"),
            });
        }
        Ok(())
    };

    let mut out = Vec::new();
    if p == 0.0 {
        let e_cap = (nf / (nf - 1.0)).powi(n as i32 - 1);
        out.push(AgeBounds {
            target: BoundTarget::Node(1),
            lower: harmonic_floor,
            upper: e_cap * h / lambda,
            label: "fcn-e-capped-harmonic",
        });
        if q < 1.0 {
            out.push(offset_bound());
        }
    } else if q == 1.0 {
        needs_np("fcn-harmonic-sandwich")?;
        out.push(AgeBounds {
            target: BoundTarget::Node(1),
            lower: harmonic_floor,
            upper: h / lambda + p * v_n,
            label: "fcn-harmonic-sandwich",
        });
    } else {
        if p >= 1.0 {
            return Err(Error::BoundInapplicable {
                bound: "fcn-leaky-adversary",
                reason: "division by 1 - p with p = 1".into(),
            });
        }
        needs_np("fcn-leaky-adversary")?;
        out.push(AgeBounds {
            target: BoundTarget::Node(1),
            lower: harmonic_floor,
            upper: (h / lambda + p / (lambda * (1.0 - q))) / (1.0 - p),
            label: "fcn-leaky-adversary",
        });
        out.push(offset_bound());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Strict,
    /// `n = 2`: no regular-to-regular gossip, `v_1` does not depend on `p`.
    Degenerate,
}

/// Checks at `q = 1` that `v_1` strictly increases along `p_grid` and that every
/// gap `v_n - v_{S_k}` is positive and strictly decreasing in `p`.
pub fn fcn_p_monotonicity_check(n: usize, lambda: f64, p_grid: &[f64]) -> Result<Monotonicity> {
    let mut v = Violations::default();
    if p_grid.is_empty() {
        v.push("p grid is empty");
    }
    if p_grid.windows(2).any(|w| w[0] >= w[1]) {
        v.push("p grid must be strictly ascending");
    }
    v.into_result()?;
    if n == 2 {
        check_params(n, lambda, 0.0, 1.0)?;
        return Ok(Monotonicity::Degenerate);
    }

    let profiles = p_grid
        .iter()
        .map(|&p| fcn_capture_ages(n, lambda, p, 1.0))
        .collect::<Result<Vec<_>>>()?;
    for (ages, &p) in profiles.iter().zip(p_grid) {
        if let Some(k) = ages.v_regular.iter().position(|&s| ages.v_infected - s <= 0.0) {
            return Err(Error::NotMonotone {
                quantity: format!("v_n - v_S{} (positivity)", k + 1),
                p_lo: p,
                p_hi: p,
                at_lo: ages.v_infected - ages.v_regular[k],
                at_hi: ages.v_infected - ages.v_regular[k],
            });
        }
    }
    for (w, ps) in profiles.windows(2).zip(p_grid.windows(2)) {
        let (lo, hi) = (&w[0], &w[1]);
        if hi.v1() <= lo.v1() {
            return Err(Error::NotMonotone {
                quantity: "v_1".into(),
                p_lo: ps[0],
                p_hi: ps[1],
                at_lo: lo.v1(),
                at_hi: hi.v1(),
            });
        }
        for k in 0..n - 1 {
            let (g_lo, g_hi) = (lo.v_infected - lo.v_regular[k], hi.v_infected - hi.v_regular[k]);
            if g_hi >= g_lo {
                return Err(Error::NotMonotone {
                    quantity: format!("v_n - v_S{}", k + 1),
                    p_lo: ps[0],
                    p_hi: ps[1],
                    at_lo: g_lo,
                    at_hi: g_hi,
                });
            }
        }
    }
    Ok(Monotonicity::Strict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes_worst_case() {
        let a = fcn_capture_ages(2, 1.0, 1.0, 1.0).unwrap();
        assert!((a.v1() - 2.0).abs() < 1e-12);
        assert!((a.v_infected - 2.0).abs() < 1e-12);
    }

    #[test]
    fn three_nodes_hand_propagation() {
        let a = fcn_capture_ages(3, 1.0, 1.0, 1.0).unwrap();
        assert!((a.v_infected - 3.0).abs() < 1e-12);
        assert!((a.v_regular[1] - 2.4).abs() < 1e-12);
        assert!((a.v_regular[0] - 2.775).abs() < 1e-12);
    }

    #[test]
    fn isolated_infected_node() {
        for n in [2, 5, 77] {
            for lambda in [0.5, 1.0, 3.0] {
                let a = fcn_capture_ages(n, lambda, 0.3, 1.0).unwrap();
                let want = n as f64 / lambda;
                assert!((a.v_infected - want).abs() <= 1e-12 * want);
            }
        }
    }

    #[test]
    fn honest_pair() {
        // both nodes: (1 + λ·v_{12}) / (λ/2 + λ) with v_{12} = 1/λ
        let a = honest_fcn_ages(2, 1.0).unwrap();
        assert!((a.v1() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(a.v1(), a.v_infected);
    }

    #[test]
    fn case1_sandwich_example() {
        let b = fcn_case_bounds(100, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(b.len(), 1);
        let h99 = harmonic_number(99);
        assert!((b[0].lower - (25.0 + h99 - 0.99)).abs() < 1e-9);
        assert!((b[0].lower - 29.19).abs() < 0.01);
        assert!((b[0].upper - 55.177).abs() < 1e-3);
        let v1 = fcn_capture_ages(100, 1.0, 0.5, 1.0).unwrap().v1();
        assert!(b[0].contains(v1));
    }

    #[test]
    fn case2_e_capped() {
        for q in [0.0, 0.5, 1.0] {
            let b = fcn_case_bounds(50, 1.0, 0.0, q).unwrap();
            let h = harmonic_number(49);
            assert!((b[0].upper - (50.0f64 / 49.0).powi(49) * h).abs() < 1e-9);
            assert!(b[0].upper < std::f64::consts::E * h);
            assert_eq!(b.len(), if q < 1.0 { 2 } else { 1 });
        }
    }

    #[test]
    fn case3_inapplicable_at_p_one() {
        assert!(matches!(
            fcn_case_bounds(10, 1.0, 1.0, 0.5),
            Err(Error::BoundInapplicable { .. })
        ));
        assert!(matches!(
            fcn_case_bounds(10, 1.0, 0.05, 1.0),
            Err(Error::BoundInapplicable { .. })
        ));
    }

    #[test]
    fn monotonicity_verdicts() {
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        assert_eq!(fcn_p_monotonicity_check(100, 1.0, &grid).unwrap(), Monotonicity::Strict);
        assert_eq!(
            fcn_p_monotonicity_check(100, 1.0, &[0.4]).unwrap(),
            Monotonicity::Strict
        );
        assert_eq!(
            fcn_p_monotonicity_check(2, 1.0, &[0.0, 1.0]).unwrap(),
            Monotonicity::Degenerate
        );
        assert!(fcn_p_monotonicity_check(10, 1.0, &[0.5, 0.2]).is_err());
    }

    #[test]
    fn two_node_v1_is_flat_in_p() {
        let lo = fcn_capture_ages(2, 1.0, 0.0, 1.0).unwrap().v1();
        let hi = fcn_capture_ages(2, 1.0, 1.0, 1.0).unwrap().v1();
        assert!((lo - 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
    }
}
