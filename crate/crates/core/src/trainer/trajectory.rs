use alloc::vec::Vec;

use crate::env::{features, visitation_counts, Action, Cell, FeatureMode};
use crate::mmd::{PairKey, TrajectoryFeatures};

/// Policy observation width for every in-scope task.
pub const OBS_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub pos: Cell,
    pub obs: [f64; OBS_DIM],
    pub action: usize,
    /// Extrinsic reward received for this transition.
    pub reward: f64,
    /// Log-probability of `action` under the sampling policy.
    pub log_prob: f64,
}

/// One episode as seen by one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub episode_id: u64,
    pub steps: Vec<Step>,
    pub final_pos: Cell,
    pub final_obs: [f64; OBS_DIM],
    /// Goal this agent stands on at the end of the episode.
    pub goal_id: Option<u32>,
    /// Goal that ended the episode (for single-agent runs equal to `goal_id`).
    pub episode_goal: Option<u32>,
    /// Ended by the step budget rather than a goal.
    pub truncated: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn extrinsic_return(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    /// Visited cells including the final one.
    pub fn path(&self) -> Vec<Cell> {
        let mut p: Vec<Cell> = self.steps.iter().map(|s| s.pos).collect();
        p.push(self.final_pos);
        p
    }
}

/// The feature map g together with the grid it normalizes against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureMap {
    pub width: u32,
    pub height: u32,
    pub mode: FeatureMode,
}

impl FeatureMap {
    pub fn dim(&self) -> usize {
        self.mode.dim()
    }

    pub fn point(&self, step: &Step) -> Vec<f64> {
        let action = Action::from_index(step.action).unwrap_or(Action::East);
        features(self.width, self.height, step.pos, action, self.mode)
    }

    pub fn trajectory(&self, t: &Trajectory) -> TrajectoryFeatures {
        let mut coords = Vec::with_capacity(t.len() * self.dim());
        for s in &t.steps {
            coords.extend(self.point(s));
        }
        TrajectoryFeatures::from_flat(self.dim(), coords).expect("feature map output is finite and rectangular")
    }

    pub fn pair_keys(&self, t: &Trajectory) -> Vec<PairKey> {
        t.steps.iter().map(|s| PairKey::new(&self.point(s), s.action as u32)).collect()
    }
}

/// Visit totals over the full paths of a set of trajectories.
pub fn trajectory_visitation(width: u32, height: u32, trajectories: &[Trajectory]) -> Vec<u64> {
    let paths: Vec<Vec<Cell>> = trajectories.iter().map(Trajectory::path).collect();
    visitation_counts(width, height, paths.iter().map(Vec::as_slice))
}
