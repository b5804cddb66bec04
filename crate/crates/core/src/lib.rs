pub mod ball;
pub mod error;
pub mod exact;
pub mod numfield;
pub mod siegel;
pub mod report;
pub mod constants;
pub mod auxfun;
pub mod analytic;
pub mod pipeline;

pub use error::{Error, Result};
