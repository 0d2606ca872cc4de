//! Trajectory-constrained exploration for on-policy reinforcement learning.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`mmd`]: kernels, MMD² estimators between trajectories, per state-action
//!   distances to a replay memory, batch normalization and the clipped
//!   intrinsic reward.
//! - [`nn`]: a small tanh MLP with hand-written backpropagation, a
//!   categorical policy head and an Adam optimizer.
//! - [`env`]: deterministic gridworlds and the two-agent particle grid.
//! - [`trainer`]: rollouts, returns/advantages, the clipped-surrogate update
//!   on the combined objective, adaptive σ scaling and the goal-discovery loop.
//! - [`multiagent`]: per-agent policies repelled from the other agents'
//!   trajectory memories.
//! - [`theory`]: exact tabular MDP evaluation and the performance-bound checks.
//!
//! IO, file formats and the CLI live in the companion `tace` crate.
#![no_std]

extern crate alloc;

pub mod env;
pub mod error;
pub mod mmd;
pub mod multiagent;
pub mod nn;
pub mod rng;
pub mod theory;
pub mod trainer;

pub use error::{Error, Result};
