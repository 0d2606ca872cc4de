use alloc::vec::Vec;

use super::grid::relative_obs;
use super::{Action, Cell, GridWorld};
use crate::{Error, Result};

/// Several agents moving independently in one shared gridworld layout.
/// The episode ends as soon as any agent stands on a goal.
#[derive(Debug, Clone, PartialEq)]
pub struct MpeGrid {
    world: GridWorld,
    starts: Vec<Cell>,
    shared_reward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointState {
    pub pos: Vec<Cell>,
    pub t: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointStep {
    pub next: JointState,
    /// Reward credited to each agent.
    pub rewards: Vec<f64>,
    /// Best goal reward reached by any agent this step.
    pub team_reward: f64,
    pub terminal: bool,
    pub truncated: bool,
    /// Highest-reward goal reached this step, if any.
    pub goal_id: Option<u32>,
    pub agent_goals: Vec<Option<u32>>,
}

impl MpeGrid {
    pub fn new(world: GridWorld, starts: Vec<Cell>, shared_reward: bool) -> Result<Self> {
        if starts.is_empty() {
            return Err(Error::invalid("at least one agent required"));
        }
        for &s in &starts {
            if !world.contains(s) || world.is_wall(s) || world.goal_at(s).is_some() {
                return Err(Error::invalid("agent start must be a free non-goal cell"));
            }
        }
        Ok(Self { world, starts, shared_reward })
    }

    pub fn world(&self) -> &GridWorld {
        &self.world
    }

    pub fn world_mut(&mut self) -> &mut GridWorld {
        &mut self.world
    }

    pub fn agent_count(&self) -> usize {
        self.starts.len()
    }

    pub fn starts(&self) -> &[Cell] {
        &self.starts
    }

    pub fn shared_reward(&self) -> bool {
        self.shared_reward
    }

    pub fn reset(&self) -> JointState {
        JointState { pos: self.starts.clone(), t: 0 }
    }

    /// Agent `k`'s local observation: its own position relative to its start.
    pub fn observe(&self, agent: usize, pos: Cell) -> [f64; 2] {
        relative_obs(pos, self.starts[agent], self.world.width(), self.world.height())
    }

    pub fn step(&self, state: &JointState, actions: &[usize]) -> Result<JointStep> {
        if actions.len() != self.agent_count() || state.pos.len() != self.agent_count() {
            return Err(Error::DimensionMismatch { expected: self.agent_count(), got: actions.len() });
        }
        let mut pos = Vec::with_capacity(actions.len());
        let mut agent_goals = Vec::with_capacity(actions.len());
        let mut own = Vec::with_capacity(actions.len());
        for (&p, &a) in state.pos.iter().zip(actions) {
            if !self.world.contains(p) {
                return Err(Error::invalid("agent outside grid"));
            }
            let next = self.world.move_from(p, Action::from_index(a)?);
            let goal = self.world.goal_at(next);
            pos.push(next);
            agent_goals.push(goal.map(|g| g.id));
            own.push(goal.map(|g| g.reward).unwrap_or(0.0));
        }
        let best = self
            .world
            .goals()
            .iter()
            .filter(|g| agent_goals.contains(&Some(g.id)))
            .max_by(|a, b| a.reward.total_cmp(&b.reward));
        let team_reward = best.map(|g| g.reward).unwrap_or(0.0);
        let rewards = if self.shared_reward { alloc::vec![team_reward; own.len()] } else { own };
        let t = state.t + 1;
        let out_of_time = t >= self.world.max_steps();
        Ok(JointStep {
            next: JointState { pos, t },
            rewards,
            team_reward,
            terminal: best.is_some() || out_of_time,
            truncated: best.is_none() && out_of_time,
            goal_id: best.map(|g| g.id),
            agent_goals,
        })
    }
}
