//! TCPPO: rollouts, distance rewards, returns, clipped-surrogate updates,
//! adaptive σ and the goal-discovery loop.

mod asm;
mod batch;
mod config;
mod intrinsic;
mod memory;
mod phases;
mod ppo;
mod returns;
mod rollout;
mod trajectory;

pub use asm::{DistanceRule, SigmaController, EPSILON_FLOOR};
pub use batch::{unique_observations, IntrinsicAnnotation, OnPolicyBatch};
pub use config::{ConvergenceConfig, IntrinsicConfig, SigmaConfig, TrainConfig};
pub use intrinsic::annotate_intrinsic;
pub use memory::{memory_refresh, ReplayMemory};
pub use phases::{detect_convergence, ConvergenceTracker, IterationMetrics, PhaseEvent, RunSummary, TcppoTrainer};
pub use ppo::{surrogate_gradient, value_gradient, Learner, PpoSample, SampleSet, SurrogateStats, UpdateStats};
pub use returns::{compute_advantages, compute_returns, discounted_returns, gae};
pub use rollout::{
    collect_joint_rollouts, collect_rollouts, episode_stream, run_episode, run_joint_episode, Executor, Sequential,
};
pub use trajectory::{trajectory_visitation, FeatureMap, Step, Trajectory, OBS_DIM};
