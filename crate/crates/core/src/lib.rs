pub mod cocycle;
pub mod error;
pub mod findim;
pub mod funcfield;
pub mod knbasis;
pub mod linalg;
mod memo;
pub mod rational;
pub mod registry;
pub mod repr;
pub mod sugawara;
pub mod vector;

pub use error::{Error, Result};
pub use rational::Rat;
