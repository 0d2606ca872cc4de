//! Small dense networks with explicit backpropagation.

mod adam;
mod mlp;
mod policy;

pub use adam::{Adam, AdamConfig};
pub use mlp::{Activation, BatchTrace, Dense, ForwardTrace, Mlp, MlpGrads};
pub use policy::{log_softmax, softmax, CategoricalPolicy};

/// Hidden width used by the policy and value networks.
pub const HIDDEN: usize = 64;
