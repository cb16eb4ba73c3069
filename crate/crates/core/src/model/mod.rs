//! Network topologies, adversary coins and the effective transition rates.
//!
//! Nodes are numbered `1..=n` as in the age literature: node `n` is the
//! infected node (capture topologies) or the node fed by the adversary `A`
//! (MITM). Index `0` in [`RateTable::rate`] denotes the source.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, Violations};

mod config;
pub use config::{
    validate_config, CheckedConfig, RawConfig, RunParams, DEFAULT_HORIZON, DEFAULT_REPS, DEFAULT_WARMUP_FRACTION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NetworkKind {
    /// Fully connected network whose node `n` is captured by the adversary.
    #[serde(rename = "fcn-capture")]
    FullyConnectedCapture,
    /// Fully connected network where the adversary sits between the source and node `n`.
    #[serde(rename = "fcn-mitm")]
    FullyConnectedMitm,
    /// Unidirectional ring `1 -> 2 -> ... -> n -> 1` with node `n` captured.
    #[serde(rename = "urn-capture")]
    UnidirectionalRingCapture,
}

impl NetworkKind {
    pub const ALL: [NetworkKind; 3] = [
        NetworkKind::FullyConnectedCapture,
        NetworkKind::FullyConnectedMitm,
        NetworkKind::UnidirectionalRingCapture,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::FullyConnectedCapture => "fcn-capture",
            NetworkKind::FullyConnectedMitm => "fcn-mitm",
            NetworkKind::UnidirectionalRingCapture => "urn-capture",
        }
    }

    pub fn is_ring(self) -> bool {
        matches!(self, NetworkKind::UnidirectionalRingCapture)
    }

    pub fn has_adversary_node(self) -> bool {
        matches!(self, NetworkKind::FullyConnectedMitm)
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetworkKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        NetworkKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown network kind `{s}` (expected fcn-capture, fcn-mitm or urn-capture)"))
    }
}

/// Oblivious timestomping coins.
///
/// `p` is the probability that an outgoing packet of the infected node is
/// stamped with the current time (otherwise with 0); `q` is the probability
/// that an incoming packet is stamped with 0 (otherwise with the current time).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdversaryPolicy {
    pub p: f64,
    pub q: f64,
}

impl AdversaryPolicy {
    pub const fn new(p: f64, q: f64) -> Self {
        AdversaryPolicy { p, q }
    }

    /// The age-maximising policy: stamp every outgoing packet fresh, reject everything incoming.
    pub const fn worst_case() -> Self {
        AdversaryPolicy { p: 1.0, q: 1.0 }
    }

    pub(crate) fn check(&self, out: &mut Violations) {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                out.push(format!("{name}={v}: probability out of range [0, 1]"));
            }
        }
    }
}

impl Default for AdversaryPolicy {
    fn default() -> Self {
        AdversaryPolicy::worst_case()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub kind: NetworkKind,
    /// Truthful timestamps everywhere; coins are ignored.
    #[serde(default)]
    pub honest: bool,
    pub n: usize,
    pub lambda: f64,
    #[serde(flatten)]
    pub policy: AdversaryPolicy,
}

impl NetworkSpec {
    pub fn new(kind: NetworkKind, n: usize, lambda: f64, policy: AdversaryPolicy) -> Result<Self> {
        let spec = NetworkSpec {
            kind,
            honest: false,
            n,
            lambda,
            policy,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn honest(kind: NetworkKind, n: usize, lambda: f64) -> Result<Self> {
        let spec = NetworkSpec {
            kind,
            honest: true,
            n,
            lambda,
            policy: AdversaryPolicy::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = Violations::default();
        self.check(&mut v);
        v.into_result()
    }

    pub(crate) fn check(&self, out: &mut Violations) {
        if self.n < 2 {
            out.push(format!("n={}: n must be ≥ 2", self.n));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            out.push(format!("lambda={}: lambda must be a positive finite rate", self.lambda));
        }
        self.policy.check(out);
        if self.honest && self.kind == NetworkKind::FullyConnectedMitm {
            out.push("honest mode is only defined for fcn-capture and urn-capture");
        }
    }

    /// Number of simulated state holders: the `n` nodes plus `A` under MITM.
    pub fn state_len(&self) -> usize {
        self.n + usize::from(self.kind.has_adversary_node())
    }
}

/// Whether adversarial coins are flipped per packet or folded into the rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum CoinMode {
    #[default]
    #[serde(rename = "explicit-flip")]
    ExplicitFlip,
    #[serde(rename = "pre-thinned")]
    PreThinned,
}

impl CoinMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CoinMode::ExplicitFlip => "explicit-flip",
            CoinMode::PreThinned => "pre-thinned",
        }
    }
}

impl FromStr for CoinMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "explicit-flip" | "explicit" => Ok(CoinMode::ExplicitFlip),
            "pre-thinned" | "thinned" => Ok(CoinMode::PreThinned),
            _ => Err(format!(
                "unknown coin mode `{s}` (expected explicit-flip or pre-thinned)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Source,
    /// 1-based node id.
    Node(usize),
    Adversary,
}

/// How the claimed timestamp of a delivered packet is formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stamping {
    /// Fresh packet from the source.
    Fresh,
    /// Sender's claimed timestamp is forwarded unchanged; the receiver keeps the larger.
    Truthful,
    /// Adversary stamps the packet with the current time with probability
    /// `now_prob`, otherwise with 0.
    Coin { now_prob: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub from: Endpoint,
    pub to: Endpoint,
    pub rate: f64,
    pub stamping: Stamping,
}

/// Effective (thinned) rates of every transition of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub n: usize,
    /// Rate of source deliveries to node `j`, stored at index `j - 1`.
    pub source_rates: Vec<f64>,
    /// `(i, j) -> rate`, 1-based. Structural edges whose effective rate is 0 are kept.
    pub edge_rates: BTreeMap<(usize, usize), f64>,
    /// MITM only: source deliveries to `A`.
    pub adversary_source_rate: f64,
    /// MITM only: `A -> n`.
    pub adversary_feed_rate: f64,
}

impl RateTable {
    /// Rate of `i -> j`, with `i = 0` meaning the source.
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        if i == 0 {
            return j
                .checked_sub(1)
                .and_then(|j| self.source_rates.get(j))
                .copied()
                .unwrap_or(0.0);
        }
        self.edge_rates.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn out_rate(&self, i: usize) -> f64 {
        self.edge_rates.range((i, 0)..(i + 1, 0)).map(|(_, r)| r).sum()
    }

    pub fn in_gossip_rate(&self, j: usize) -> f64 {
        self.edge_rates
            .iter()
            .filter(|((_, to), _)| *to == j)
            .map(|(_, r)| r)
            .sum()
    }

    pub fn total_rate(&self) -> f64 {
        self.source_rates.iter().sum::<f64>()
            + self.edge_rates.values().sum::<f64>()
            + self.adversary_source_rate
            + self.adversary_feed_rate
    }
}

/// Raw (unthinned) gossip edges: `(from, to, rate, coin)`, coin = `None` for truthful edges.
fn raw_edges(spec: &NetworkSpec) -> Vec<(usize, usize, f64, Option<f64>)> {
    let n = spec.n;
    let lambda = spec.lambda;
    let AdversaryPolicy { p, q } = spec.policy;
    let mut edges = Vec::new();
    match spec.kind {
        NetworkKind::FullyConnectedCapture | NetworkKind::FullyConnectedMitm => {
            let r = lambda / (n - 1) as f64;
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    let coin = if spec.honest || spec.kind == NetworkKind::FullyConnectedMitm {
                        None
                    } else if i == n {
                        Some(p)
                    } else if j == n {
                        Some(1.0 - q)
                    } else {
                        None
                    };
                    edges.push((i, j, r, coin));
                }
            }
        }
        NetworkKind::UnidirectionalRingCapture => {
            for i in 1..=n {
                let j = i % n + 1;
                let coin = if spec.honest {
                    None
                } else if i == n {
                    Some(p)
                } else if j == n {
                    Some(1.0 - q)
                } else {
                    None
                };
                edges.push((i, j, lambda, coin));
            }
        }
    }
    edges
}

fn source_rates(spec: &NetworkSpec) -> Vec<f64> {
    let r = spec.lambda / spec.n as f64;
    (1..=spec.n)
        .map(|j| {
            if spec.kind == NetworkKind::FullyConnectedMitm && j == spec.n {
                0.0
            } else {
                r
            }
        })
        .collect()
}

pub fn build_rate_table(spec: &NetworkSpec) -> Result<RateTable> {
    spec.validate()?;
    let edge_rates = raw_edges(spec)
        .into_iter()
        .map(|(i, j, r, coin)| ((i, j), r * coin.unwrap_or(1.0)))
        .collect();
    let mitm = spec.kind == NetworkKind::FullyConnectedMitm;
    Ok(RateTable {
        n: spec.n,
        source_rates: source_rates(spec),
        edge_rates,
        adversary_source_rate: if mitm { spec.lambda / spec.n as f64 } else { 0.0 },
        adversary_feed_rate: if mitm { spec.lambda } else { 0.0 },
    })
}

/// Transition list driving the simulator. Zero-rate transitions are dropped.
///
/// In [`CoinMode::PreThinned`] every adversarial edge carries its thinned
/// rate from [`build_rate_table`] and always stamps the current time; in
/// [`CoinMode::ExplicitFlip`] it keeps the raw rate and flips a coin per packet.
pub fn transitions(spec: &NetworkSpec, mode: CoinMode) -> Result<Vec<Transition>> {
    let table = build_rate_table(spec)?;
    let mut out = Vec::new();
    for (j, &rate) in table.source_rates.iter().enumerate() {
        out.push(Transition {
            from: Endpoint::Source,
            to: Endpoint::Node(j + 1),
            rate,
            stamping: Stamping::Fresh,
        });
    }
    if spec.kind.has_adversary_node() {
        out.push(Transition {
            from: Endpoint::Source,
            to: Endpoint::Adversary,
            rate: table.adversary_source_rate,
            stamping: Stamping::Fresh,
        });
        out.push(Transition {
            from: Endpoint::Adversary,
            to: Endpoint::Node(spec.n),
            rate: table.adversary_feed_rate,
            stamping: Stamping::Coin { now_prob: 1.0 },
        });
    }
    for (i, j, raw, coin) in raw_edges(spec) {
        let (rate, stamping) = match (coin, mode) {
            (None, _) => (raw, Stamping::Truthful),
            (Some(c), CoinMode::ExplicitFlip) => (raw, Stamping::Coin { now_prob: c }),
            (Some(_), CoinMode::PreThinned) => (table.rate(i, j), Stamping::Coin { now_prob: 1.0 }),
        };
        out.push(Transition {
            from: Endpoint::Node(i),
            to: Endpoint::Node(j),
            rate,
            stamping,
        });
    }
    out.retain(|t| t.rate > 0.0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn fcn_capture_thinning() {
        let spec = NetworkSpec::new(
            NetworkKind::FullyConnectedCapture,
            3,
            1.0,
            AdversaryPolicy::new(0.5, 1.0),
        )
        .unwrap();
        let t = build_rate_table(&spec).unwrap();
        assert!(close(t.rate(1, 2), 0.5));
        assert!(close(t.rate(3, 1), 0.25));
        assert!(close(t.rate(1, 3), 0.0));
        for j in 1..=3 {
            assert!(close(t.rate(0, j), 1.0 / 3.0));
        }
    }

    #[test]
    fn urn_capture_thinning() {
        let spec = NetworkSpec::new(
            NetworkKind::UnidirectionalRingCapture,
            4,
            1.0,
            AdversaryPolicy::new(0.5, 0.5),
        )
        .unwrap();
        let t = build_rate_table(&spec).unwrap();
        assert!(close(t.rate(1, 2), 1.0));
        assert!(close(t.rate(3, 4), 0.5));
        assert!(close(t.rate(4, 1), 0.5));
        assert!(close(t.rate(2, 1), 0.0));
        assert!(t.source_rates.iter().all(|&r| close(r, 0.25)));
    }

    #[test]
    fn honest_pair_is_unthinned() {
        let spec = NetworkSpec::honest(NetworkKind::FullyConnectedCapture, 2, 1.0).unwrap();
        let t = build_rate_table(&spec).unwrap();
        assert!(close(t.rate(1, 2), 1.0));
        assert!(close(t.rate(2, 1), 1.0));
        assert!(t.source_rates.iter().all(|&r| close(r, 0.5)));
    }

    #[test]
    fn mitm_routes_source_through_adversary() {
        let spec = NetworkSpec::new(NetworkKind::FullyConnectedMitm, 5, 2.0, AdversaryPolicy::default()).unwrap();
        let t = build_rate_table(&spec).unwrap();
        assert_eq!(t.rate(0, 5), 0.0);
        assert!(close(t.rate(0, 1), 0.4));
        assert!(close(t.adversary_source_rate, 0.4));
        assert!(close(t.adversary_feed_rate, 2.0));
        assert!(close(t.rate(5, 1), 0.5));
        assert!(close(t.rate(1, 5), 0.5));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(NetworkSpec::new(NetworkKind::FullyConnectedCapture, 1, 1.0, AdversaryPolicy::default()).is_err());
        assert!(NetworkSpec::new(NetworkKind::FullyConnectedCapture, 3, 0.0, AdversaryPolicy::default()).is_err());
        assert!(NetworkSpec::new(
            NetworkKind::FullyConnectedCapture,
            3,
            1.0,
            AdversaryPolicy::new(1.5, 0.0)
        )
        .is_err());
        assert!(NetworkSpec::honest(NetworkKind::FullyConnectedMitm, 3, 1.0).is_err());
    }

    #[test]
    fn violations_are_aggregated() {
        let spec = NetworkSpec {
            kind: NetworkKind::FullyConnectedCapture,
            honest: false,
            n: 1,
            lambda: -1.0,
            policy: AdversaryPolicy::new(1.5, -0.1),
        };
        match spec.validate() {
            Err(Error::InvalidConfig(v)) => assert_eq!(v.0.len(), 4, "{v}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pre_thinned_transitions_match_table() {
        let spec = NetworkSpec::new(
            NetworkKind::UnidirectionalRingCapture,
            5,
            1.0,
            AdversaryPolicy::new(0.3, 0.7),
        )
        .unwrap();
        let table = build_rate_table(&spec).unwrap();
        let thinned = transitions(&spec, CoinMode::PreThinned).unwrap();
        let total: f64 = thinned.iter().map(|t| t.rate).sum();
        assert!(close(total, table.total_rate()));
        let explicit = transitions(&spec, CoinMode::ExplicitFlip).unwrap();
        let expected: f64 = explicit
            .iter()
            .map(|t| match t.stamping {
                Stamping::Coin { now_prob } => t.rate * now_prob,
                _ => t.rate,
            })
            .sum();
        assert!(close(total, expected));
    }
}
