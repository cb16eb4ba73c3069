use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every configuration problem found in one pass, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Violations(pub Vec<String>);

impl Violations {
    pub fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(self))
        }
    }
}

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("; "))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(Violations),

    #[error("bound inapplicable ({bound}): {reason}")]
    BoundInapplicable { bound: &'static str, reason: String },

    #[error("monotonicity violated for {quantity}: value at p={p_lo} is {at_lo}, at p={p_hi} is {at_hi}")]
    NotMonotone {
        quantity: String,
        p_lo: f64,
        p_hi: f64,
        at_lo: f64,
        at_hi: f64,
    },

    #[error("non-finite analytic result: {0}")]
    NonFinite(String),

    #[error("simulation produced no events after warmup (horizon {horizon}, warmup {warmup})")]
    NoPostWarmupEvents { horizon: f64, warmup: f64 },

    #[error("exponent fit needs at least 3 rows spanning a factor of 4 in n: {0}")]
    InsufficientFitData(String),

    #[error("thinning modes diverge at nodes {0:?}")]
    CoinModesDiverge(Vec<usize>),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidConfig(_) | Error::Json(_))
    }
}
