pub mod baselines;
pub mod dmd;
pub mod error;
pub mod fom;
pub mod harness;
pub mod ldmd;
pub mod numerics;

pub use error::{Error, Result};
