//! Flat JSON configuration shared by the library entry points and the CLI.

use serde::{Deserialize, Serialize};

use super::{AdversaryPolicy, CoinMode, NetworkKind, NetworkSpec};
use crate::error::{Error, Result, Violations};

pub const DEFAULT_HORIZON: f64 = 10_000.0;
pub const DEFAULT_WARMUP_FRACTION: f64 = 0.1;
pub const DEFAULT_REPS: usize = 10;

/// A possibly incomplete configuration, as read from a file or flags.
///
/// Keys: `kind`, `honest`, `n`, `lambda`, `p`, `q`, and the optional run
/// parameters `horizon`, `warmup`, `seed`, `reps`, `coin_mode`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<NetworkKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub honest: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin_mode: Option<CoinMode>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Fields set in `other` win.
    pub fn overlay(self, other: RawConfig) -> RawConfig {
        RawConfig {
            kind: other.kind.or(self.kind),
            honest: other.honest.or(self.honest),
            n: other.n.or(self.n),
            lambda: other.lambda.or(self.lambda),
            p: other.p.or(self.p),
            q: other.q.or(self.q),
            horizon: other.horizon.or(self.horizon),
            warmup: other.warmup.or(self.warmup),
            seed: other.seed.or(self.seed),
            reps: other.reps.or(self.reps),
            coin_mode: other.coin_mode.or(self.coin_mode),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub horizon: f64,
    pub warmup: f64,
    pub seed: u64,
    pub reps: usize,
    pub coin_mode: CoinMode,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            horizon: DEFAULT_HORIZON,
            warmup: DEFAULT_HORIZON * DEFAULT_WARMUP_FRACTION,
            seed: 0,
            reps: DEFAULT_REPS,
            coin_mode: CoinMode::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckedConfig {
    pub spec: NetworkSpec,
    pub run: RunParams,
}

impl CheckedConfig {
    /// Fully populated raw form; re-validating it yields `self`.
    pub fn to_raw(&self) -> RawConfig {
        RawConfig {
            kind: Some(self.spec.kind),
            honest: Some(self.spec.honest),
            n: Some(self.spec.n as i64),
            lambda: Some(self.spec.lambda),
            p: Some(self.spec.policy.p),
            q: Some(self.spec.policy.q),
            horizon: Some(self.run.horizon),
            warmup: Some(self.run.warmup),
            seed: Some(self.run.seed),
            reps: Some(self.run.reps),
            coin_mode: Some(self.run.coin_mode),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_raw())?)
    }
}

/// Fills defaults and checks every field, reporting all violations at once.
pub fn validate_config(raw: &RawConfig) -> Result<CheckedConfig> {
    let mut v = Violations::default();

    let n = match raw.n {
        None => {
            v.push("n is required");
            2
        }
        Some(n) if n < 2 => {
            v.push(format!("n={n}: n must be ≥ 2"));
            2
        }
        Some(n) => n as usize,
    };
    let spec = NetworkSpec {
        kind: raw.kind.unwrap_or(NetworkKind::FullyConnectedCapture),
        honest: raw.honest.unwrap_or(false),
        n,
        lambda: raw.lambda.unwrap_or(1.0),
        policy: AdversaryPolicy::new(raw.p.unwrap_or(1.0), raw.q.unwrap_or(1.0)),
    };
    spec.check(&mut v);

    let horizon = raw.horizon.unwrap_or(DEFAULT_HORIZON);
    if !(horizon > 0.0 && horizon.is_finite()) {
        v.push(format!("horizon={horizon}: horizon must be positive"));
    }
    let warmup = raw.warmup.unwrap_or(horizon * DEFAULT_WARMUP_FRACTION);
    if !(warmup >= 0.0 && warmup < horizon) {
        v.push(format!("warmup={warmup}: warmup must satisfy 0 ≤ warmup < horizon"));
    }
    let reps = raw.reps.unwrap_or(DEFAULT_REPS);
    if reps == 0 {
        v.push("reps must be ≥ 1");
    }

    if !v.is_empty() {
        return Err(Error::InvalidConfig(v));
    }
    Ok(CheckedConfig {
        spec,
        run: RunParams {
            horizon,
            warmup,
            seed: raw.seed.unwrap_or(0),
            reps,
            coin_mode: raw.coin_mode.unwrap_or_default(),
        },
    })
}
