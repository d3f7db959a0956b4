//! Exact computation of topological transitivity properties for
//! piecewise-linear maps, shift spaces and semigroup actions.

pub mod actions;
pub mod error;
pub mod hierarchy;
pub mod hitting;
pub mod interval_maps;
pub mod point;
pub mod properties;
pub mod rational;
pub mod region;
pub mod space;
pub mod symbolic;
pub mod system;
pub mod verdict;

pub use error::{Error, Result};
pub use rational::Q;
