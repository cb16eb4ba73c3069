//! Exact long-run expected ages from the stationarity equations of the age process.
//!
//! Each topology reduces to a short chain of linear recursions over node sets
//! (`S_k`: any `k` regular nodes in the fully connected network; contiguous
//! arcs on the ring). Where the chain loops back through the infected node,
//! the values are carried as affine functions of that node's age and the loop
//! is closed by one scalar solve, so no iteration is involved.

mod fcn;
mod mitm;
mod series;
mod urn;

pub use fcn::{fcn_capture_ages, fcn_case_bounds, fcn_p_monotonicity_check, honest_fcn_ages, Monotonicity};
pub use mitm::mitm_ages;
pub use series::{harmonic_number, lemma_envelopes, lemma_sum, prefix_products};
pub use urn::{honest_urn_ages, urn_age_bounds, urn_capture_ages, urn_infected_upper_bound};

use crate::error::{Error, Result, Violations};
use crate::model::{AdversaryPolicy, NetworkKind, NetworkSpec};

/// Long-run expected ages of one network.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticAges {
    pub kind: NetworkKind,
    pub n: usize,
    /// Fully connected: `v_{S_k}` for `k = 1..n-1` (entry 0 is the age of any
    /// regular node). Ring: `v_m` for nodes `m = 1..n-1`.
    pub v_regular: Vec<f64>,
    pub v_infected: f64,
    /// MITM only.
    pub v_adversary: Option<f64>,
    /// MITM only: `v_{S_k ∪ {n}}` for `k = 1..n-1`.
    pub v_sets_with_n: Option<Vec<f64>>,
}

impl AnalyticAges {
    /// Expected age of node `node` (1-based).
    pub fn node_age(&self, node: usize) -> f64 {
        assert!((1..=self.n).contains(&node), "node {node} outside 1..={}", self.n);
        if node == self.n {
            self.v_infected
        } else if self.kind.is_ring() {
            self.v_regular[node - 1]
        } else {
            self.v_regular[0]
        }
    }

    pub fn per_node(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.node_age(i)).collect()
    }

    /// Age of a regular node: `v_1`.
    pub fn v1(&self) -> f64 {
        self.v_regular[0]
    }

    fn check_finite(self) -> Result<Self> {
        let all = self
            .v_regular
            .iter()
            .chain(self.v_sets_with_n.iter().flatten())
            .chain(std::iter::once(&self.v_infected))
            .chain(self.v_adversary.iter());
        if all.clone().all(|v| v.is_finite() && *v > 0.0) {
            Ok(self)
        } else {
            Err(Error::NonFinite(format!("{} n={}", self.kind, self.n)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundTarget {
    Node(usize),
    /// `v_{S_k ∪ {n}}` under MITM.
    SetWithInfected(usize),
    /// The ring prefix-product sum.
    PrefixSum,
}

/// A closed-form sandwich. One-sided bounds use `0` or `+∞` for the open side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgeBounds {
    pub target: BoundTarget,
    pub lower: f64,
    pub upper: f64,
    pub label: &'static str,
}

impl AgeBounds {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    /// Same, with a relative slack for round-off in the closed forms.
    pub fn contains_within(&self, v: f64, rel: f64) -> bool {
        self.lower * (1.0 - rel) <= v && v <= self.upper * (1.0 + rel)
    }

    pub fn has_lower(&self) -> bool {
        self.lower > 0.0
    }

    pub fn has_upper(&self) -> bool {
        self.upper.is_finite()
    }
}

pub(crate) fn check_params(n: usize, lambda: f64, p: f64, q: f64) -> Result<()> {
    let spec = NetworkSpec {
        kind: NetworkKind::FullyConnectedCapture,
        honest: false,
        n,
        lambda,
        policy: AdversaryPolicy::new(p, q),
    };
    let mut v = Violations::default();
    spec.check(&mut v);
    v.into_result()
}

/// Dispatch on topology and honesty.
pub fn analytic_ages(spec: &NetworkSpec) -> Result<AnalyticAges> {
    spec.validate()?;
    let NetworkSpec {
        kind,
        n,
        lambda,
        policy,
        honest,
    } = *spec;
    match (kind, honest) {
        (NetworkKind::FullyConnectedCapture, false) => fcn_capture_ages(n, lambda, policy.p, policy.q),
        (NetworkKind::FullyConnectedCapture, true) => honest_fcn_ages(n, lambda),
        (NetworkKind::FullyConnectedMitm, _) => mitm_ages(n, lambda),
        (NetworkKind::UnidirectionalRingCapture, false) => urn_capture_ages(n, lambda, policy.p, policy.q),
        (NetworkKind::UnidirectionalRingCapture, true) => honest_urn_ages(n, lambda),
    }
}
