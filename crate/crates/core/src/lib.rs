pub mod analytic;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod model;
pub mod simulator;

pub use error::{Error, Result};
