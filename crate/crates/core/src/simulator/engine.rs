use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Exp1;

use super::{SimConfig, SimReport};
use crate::error::{Error, Result};
use crate::model::{transitions, Endpoint, Stamping};

/// Claimed timestamp `U` and true generation time `Ū` of the packet a node holds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NodeState {
    pub claimed: f64,
    pub generated: f64,
}

impl NodeState {
    pub fn age(&self, now: f64) -> f64 {
        now - self.generated
    }

    /// The packet went through the adversary: its claimed stamp is not its generation time.
    pub fn is_tainted(&self) -> bool {
        self.claimed != self.generated
    }
}

/// What happened at one Poisson event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delivery {
    pub time: f64,
    pub from: Endpoint,
    pub to: Endpoint,
    /// Claimed stamp carried by the packet (after any adversarial rewrite).
    pub stamp: f64,
    pub accepted: bool,
    pub age_before: f64,
    pub age_after: f64,
    /// The delivered packet's claimed stamp differed from its generation time
    /// before this transfer.
    pub sender_tainted: bool,
}

#[derive(Debug, Clone, Copy)]
enum Action {
    Fresh,
    Truthful,
    Coin(f64),
}

#[derive(Debug, Clone, Copy)]
struct Compiled {
    from: Option<usize>,
    to: usize,
    action: Action,
}

/// One sample path of the gossip network.
///
/// Events are drawn by superposition: a single exponential clock at the total
/// rate `Λ` and an alias-table pick of the firing transition.
pub struct Simulation {
    config: SimConfig,
    n: usize,
    total_rate: f64,
    compiled: Vec<Compiled>,
    picker: WeightedAliasIndex<f64>,
    rng: ChaCha8Rng,
    now: f64,
    state: Vec<NodeState>,
    integral: Vec<f64>,
    integrated_to: Vec<f64>,
    events: u64,
    post_warmup_events: u64,
    finished: bool,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let spec = config.spec;
        let ts = transitions(&spec, config.coin_mode)?;
        let slot = |e: Endpoint| match e {
            Endpoint::Source => None,
            Endpoint::Node(i) => Some(i - 1),
            Endpoint::Adversary => Some(spec.n),
        };
        let compiled = ts
            .iter()
            .map(|t| Compiled {
                from: slot(t.from),
                to: slot(t.to).expect("the source never receives"),
                action: match t.stamping {
                    Stamping::Fresh => Action::Fresh,
                    Stamping::Truthful => Action::Truthful,
                    Stamping::Coin { now_prob } => Action::Coin(now_prob),
                },
            })
            .collect();
        let weights: Vec<f64> = ts.iter().map(|t| t.rate).collect();
        let total_rate = weights.iter().sum();
        let picker =
            WeightedAliasIndex::new(weights).map_err(|e| Error::NonFinite(format!("transition weights: {e}")))?;
        let len = spec.state_len();
        Ok(Simulation {
            n: spec.n,
            total_rate,
            compiled,
            picker,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            now: 0.0,
            state: vec![NodeState::default(); len],
            integral: vec![0.0; len],
            integrated_to: vec![0.0; len],
            events: 0,
            post_warmup_events: 0,
            finished: false,
            config,
        })
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    /// `Λ`, the sum of all transition rates actually simulated.
    pub fn total_rate(&self) -> f64 {
        self.total_rate
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn state(&self, who: Endpoint) -> NodeState {
        self.state[self.slot(who)]
    }

    pub fn age(&self, who: Endpoint) -> f64 {
        self.state(who).age(self.now)
    }

    fn slot(&self, who: Endpoint) -> usize {
        match who {
            Endpoint::Node(i) if (1..=self.n).contains(&i) => i - 1,
            Endpoint::Adversary if self.state.len() > self.n => self.n,
            other => panic!("{other:?} holds no state in this network"),
        }
    }

    fn endpoint(&self, slot: Option<usize>) -> Endpoint {
        match slot {
            None => Endpoint::Source,
            Some(s) if s == self.n => Endpoint::Adversary,
            Some(s) => Endpoint::Node(s + 1),
        }
    }

    /// Accumulates `∫ (t - Ū) dt` of one holder over `(max(last, warmup), until]`.
    fn integrate(&mut self, slot: usize, until: f64) {
        let a = self.integrated_to[slot].max(self.config.warmup);
        if until > a {
            let ubar = self.state[slot].generated;
            self.integral[slot] += (until - a) * (0.5 * (a + until) - ubar);
        }
        self.integrated_to[slot] = until;
    }

    /// Fires the next event, or returns `None` once the horizon is reached.
    pub fn step(&mut self) -> Option<Delivery> {
        if self.finished {
            return None;
        }
        let dt: f64 = self.rng.sample::<f64, _>(Exp1) / self.total_rate;
        let t = self.now + dt;
        if t > self.config.horizon {
            self.now = self.config.horizon;
            self.finished = true;
            return None;
        }
        self.now = t;
        self.events += 1;
        if t > self.config.warmup {
            self.post_warmup_events += 1;
        }

        let tr = self.compiled[self.rng.sample(&self.picker)];
        let sender = match tr.from {
            None => NodeState {
                claimed: t,
                generated: t,
            },
            Some(s) => self.state[s],
        };
        let stamp = match tr.action {
            Action::Fresh => t,
            Action::Truthful => sender.claimed,
            Action::Coin(now_prob) => {
                if now_prob >= 1.0 || self.rng.random::<f64>() < now_prob {
                    t
                } else {
                    0.0
                }
            }
        };
        let receiver = self.state[tr.to];
        let accepted = stamp > receiver.claimed;
        if accepted {
            self.integrate(tr.to, t);
            self.state[tr.to] = NodeState {
                claimed: stamp,
                generated: sender.generated,
            };
        }
        Some(Delivery {
            time: t,
            from: self.endpoint(tr.from),
            to: self.endpoint(Some(tr.to)),
            stamp,
            accepted,
            age_before: receiver.age(t),
            age_after: self.state[tr.to].age(t),
            sender_tainted: sender.is_tainted(),
        })
    }

    /// Runs to the horizon and reports time-averaged ages over `(warmup, horizon]`.
    pub fn finish(mut self) -> Result<SimReport> {
        while self.step().is_some() {}
        let horizon = self.config.horizon;
        for s in 0..self.state.len() {
            self.integrate(s, horizon);
        }
        if self.post_warmup_events == 0 {
            return Err(Error::NoPostWarmupEvents {
                horizon,
                warmup: self.config.warmup,
            });
        }
        let span = horizon - self.config.warmup;
        let means: Vec<f64> = self.integral.iter().map(|i| i / span).collect();
        let mean_age = means[..self.n].to_vec();
        let adversary = means.get(self.n).copied();
        Ok(SimReport {
            per_replication: vec![mean_age.clone()],
            per_replication_adversary: adversary.into_iter().collect(),
            mean_age,
            mean_age_adversary: adversary,
            ci95: None,
            ci95_adversary: None,
            events_processed: self.events,
        })
    }
}

impl Iterator for Simulation {
    type Item = Delivery;

    fn next(&mut self) -> Option<Delivery> {
        self.step()
    }
}
