pub mod approx;
pub mod cli;
pub mod error;
pub mod hermite;
pub mod mhf;
pub mod problem;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
