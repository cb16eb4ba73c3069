//! Monte-Carlo engine for the gossip network under timestomping.
//!
//! Every node (and `A` under MITM) starts holding the source's version with
//! `U = Ū = 0`. A packet is accepted only if its claimed stamp is strictly
//! larger than the receiver's, so ties keep the resident packet. Ages are
//! integrated exactly between events; the warmup window is discarded.

mod engine;

pub use engine::{Delivery, NodeState, Simulation};

use rayon::prelude::*;

use crate::error::{Error, Result, Violations};
use crate::model::{CheckedConfig, CoinMode, Endpoint, NetworkSpec, DEFAULT_WARMUP_FRACTION};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub spec: NetworkSpec,
    pub horizon: f64,
    pub warmup: f64,
    pub seed: u64,
    pub coin_mode: CoinMode,
}

impl SimConfig {
    /// Warmup defaults to 10% of the horizon, seed to 0, coins flipped explicitly.
    pub fn new(spec: NetworkSpec, horizon: f64) -> Self {
        SimConfig {
            spec,
            horizon,
            warmup: horizon * DEFAULT_WARMUP_FRACTION,
            seed: 0,
            coin_mode: CoinMode::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_warmup(mut self, warmup: f64) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn with_coin_mode(mut self, coin_mode: CoinMode) -> Self {
        self.coin_mode = coin_mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = Violations::default();
        self.spec.check(&mut v);
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            v.push(format!("horizon={}: horizon must be positive", self.horizon));
        }
        if !(self.warmup >= 0.0 && self.warmup < self.horizon) {
            v.push(format!(
                "warmup={}: warmup must satisfy 0 ≤ warmup < horizon",
                self.warmup
            ));
        }
        v.into_result()
    }
}

impl From<&CheckedConfig> for SimConfig {
    fn from(c: &CheckedConfig) -> Self {
        SimConfig {
            spec: c.spec,
            horizon: c.run.horizon,
            warmup: c.run.warmup,
            seed: c.run.seed,
            coin_mode: c.run.coin_mode,
        }
    }
}

/// Time-averaged true ages, one entry per node `1..=n` (index `i - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub mean_age: Vec<f64>,
    pub mean_age_adversary: Option<f64>,
    pub events_processed: u64,
    pub per_replication: Vec<Vec<f64>>,
    pub per_replication_adversary: Vec<f64>,
    /// Normal-approximation 95% half-widths; `None` for a single replication.
    pub ci95: Option<Vec<f64>>,
    pub ci95_adversary: Option<f64>,
}

impl SimReport {
    pub fn replications(&self) -> usize {
        self.per_replication.len()
    }

    /// `(mean, half-width)` for node `node` (1-based).
    pub fn node(&self, node: usize) -> (f64, Option<f64>) {
        (self.mean_age[node - 1], self.ci95.as_ref().map(|c| c[node - 1]))
    }
}

fn mean_and_half_width(samples: &[f64]) -> (f64, Option<f64>) {
    let r = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / r;
    if samples.len() < 2 {
        return (mean, None);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, Some(Z95 * (var / r).sqrt()))
}

/// Single sample path.
pub fn run(config: &SimConfig) -> Result<SimReport> {
    Simulation::new(*config)?.finish()
}

/// Independent replications with seeds `seed, seed + 1, ...`, aggregated in seed order.
pub fn replicate(config: &SimConfig, num_reps: usize) -> Result<SimReport> {
    if num_reps == 0 {
        return Err(Error::InvalidConfig(Violations(vec!["reps must be ≥ 1".into()])));
    }
    config.validate()?;
    let runs = (0..num_reps as u64)
        .into_par_iter()
        .map(|r| run(&config.with_seed(config.seed.wrapping_add(r))))
        .collect::<Result<Vec<_>>>()?;

    let n = config.spec.n;
    let mut mean_age = Vec::with_capacity(n);
    let mut ci = Vec::with_capacity(n);
    for i in 0..n {
        let col: Vec<f64> = runs.iter().map(|r| r.mean_age[i]).collect();
        let (m, h) = mean_and_half_width(&col);
        mean_age.push(m);
        ci.push(h);
    }
    let adv: Vec<f64> = runs.iter().filter_map(|r| r.mean_age_adversary).collect();
    let (adv_mean, adv_ci) = if adv.is_empty() {
        (None, None)
    } else {
        let (m, h) = mean_and_half_width(&adv);
        (Some(m), h)
    };
    Ok(SimReport {
        mean_age,
        mean_age_adversary: adv_mean,
        events_processed: runs.iter().map(|r| r.events_processed).sum(),
        per_replication: runs.iter().map(|r| r.mean_age.clone()).collect(),
        per_replication_adversary: adv,
        ci95: ci.into_iter().collect(),
        ci95_adversary: adv_ci,
    })
}

/// Explicit-coin and pre-thinned runs of the same network side by side.
#[derive(Debug, Clone)]
pub struct CoinModeComparison {
    pub explicit: SimReport,
    pub thinned: SimReport,
    /// Nodes (1-based) whose 95% intervals do not overlap.
    pub diverging: Vec<usize>,
}

impl CoinModeComparison {
    pub fn overlaps(&self, node: usize) -> bool {
        !self.diverging.contains(&node)
    }

    pub fn verdict(&self) -> Result<()> {
        if self.diverging.is_empty() {
            Ok(())
        } else {
            Err(Error::CoinModesDiverge(self.diverging.clone()))
        }
    }
}

/// Runs `reps` replications in each coin mode (same seeds) and compares 95% intervals per node.
pub fn coin_mode_equivalence(config: &SimConfig, reps: usize) -> Result<CoinModeComparison> {
    if reps < 2 {
        return Err(Error::InvalidConfig(Violations(vec![
            "coin-mode comparison needs at least 2 replications for intervals".into(),
        ])));
    }
    let explicit = replicate(&config.with_coin_mode(CoinMode::ExplicitFlip), reps)?;
    let thinned = replicate(&config.with_coin_mode(CoinMode::PreThinned), reps)?;
    let (ce, ct) = (explicit.ci95.as_ref().unwrap(), thinned.ci95.as_ref().unwrap());
    let diverging = (0..config.spec.n)
        .filter(|&i| (explicit.mean_age[i] - thinned.mean_age[i]).abs() > ce[i] + ct[i])
        .map(|i| i + 1)
        .collect();
    Ok(CoinModeComparison {
        explicit,
        thinned,
        diverging,
    })
}

/// True age `X_node(t)` at each requested time along one sample path.
///
/// Ages are right-continuous: a sample taken exactly at an event time sees
/// the post-event state.
pub fn trajectory_probe(config: &SimConfig, node: Endpoint, sample_times: &[f64]) -> Result<Vec<f64>> {
    let mut v = Violations::default();
    for &t in sample_times {
        if !(0.0..=config.horizon).contains(&t) {
            v.push(format!("sample time {t} outside [0, {}]", config.horizon));
        }
    }
    if matches!(node, Endpoint::Source) {
        v.push("the source has no age process");
    }
    v.into_result()?;

    let mut order: Vec<usize> = (0..sample_times.len()).collect();
    order.sort_by(|&a, &b| sample_times[a].total_cmp(&sample_times[b]));
    let mut out = vec![0.0; sample_times.len()];
    let mut sim = Simulation::new(*config)?;
    let mut generated = sim.state(node).generated;
    let mut pending = order.into_iter().peekable();
    while pending.peek().is_some() {
        let ev = sim.step();
        let cutoff = ev.map_or(f64::INFINITY, |e| e.time);
        while let Some(&i) = pending.peek() {
            if sample_times[i] >= cutoff {
                break;
            }
            out[i] = sample_times[i] - generated;
            pending.next();
        }
        if let Some(e) = ev {
            if e.to == node && e.accepted {
                generated = e.time - e.age_after;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AdversaryPolicy, NetworkKind};

    fn fcn(n: usize, p: f64, q: f64) -> NetworkSpec {
        NetworkSpec::new(NetworkKind::FullyConnectedCapture, n, 1.0, AdversaryPolicy::new(p, q)).unwrap()
    }

    #[test]
    fn single_replication_has_no_interval() {
        let r = replicate(&SimConfig::new(fcn(3, 1.0, 1.0), 200.0), 1).unwrap();
        assert!(r.ci95.is_none());
        assert_eq!(r.replications(), 1);
    }

    #[test]
    fn same_seed_same_report() {
        let cfg = SimConfig::new(fcn(5, 0.5, 0.5), 500.0).with_seed(42);
        assert_eq!(replicate(&cfg, 3).unwrap(), replicate(&cfg, 3).unwrap());
        let other = replicate(&cfg.with_seed(43), 3).unwrap();
        assert_ne!(other.mean_age, replicate(&cfg, 3).unwrap().mean_age);
    }

    #[test]
    fn warmup_must_precede_horizon() {
        let cfg = SimConfig::new(fcn(3, 1.0, 1.0), 10.0).with_warmup(10.0);
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn reports_empty_post_warmup_window() {
        // Λ ≈ 3.0, so an event landing in (0.9999, 1] is very unlikely
        let cfg = SimConfig::new(fcn(3, 1.0, 1.0), 1.0).with_warmup(0.9999).with_seed(7);
        assert!(matches!(run(&cfg), Err(Error::NoPostWarmupEvents { .. })));
    }

    #[test]
    fn probe_starts_at_zero_and_ramps() {
        let cfg = SimConfig::new(fcn(4, 1.0, 1.0), 50.0).with_seed(3);
        let ages = trajectory_probe(&cfg, Endpoint::Node(1), &[0.0]).unwrap();
        assert_eq!(ages, vec![0.0]);
        assert!(trajectory_probe(&cfg, Endpoint::Node(1), &[51.0]).is_err());
    }
}
