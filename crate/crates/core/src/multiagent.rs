//! TCMAE: independent per-agent PPO learners repelled from the other agents'
//! recent trajectories, each with its own σ.

use alloc::vec::Vec;

use crate::env::{Action, MpeGrid};
use crate::trainer::{
    annotate_intrinsic, collect_joint_rollouts, compute_advantages, compute_returns, memory_refresh, ConvergenceTracker,
    Executor, FeatureMap, Learner, OnPolicyBatch, ReplayMemory, SigmaController, TrainConfig, Trajectory, UpdateStats,
    OBS_DIM,
};
use crate::{Error, Result};

/// Key under which an agent stores its own trajectories.
const OWN_KEY: u32 = 0;

#[derive(Debug, Clone)]
pub struct AgentSlot {
    pub agent_id: usize,
    pub learner: Learner,
    pub memory: ReplayMemory,
    pub sigma: SigmaController,
}

#[derive(Debug, Clone)]
pub struct Team {
    pub agents: Vec<AgentSlot>,
}

impl Team {
    pub fn new(agents: usize, cfg: &TrainConfig) -> Self {
        let agents = (0..agents)
            .map(|k| AgentSlot {
                agent_id: k,
                learner: Learner::new(OBS_DIM, Action::COUNT, cfg, k as u64),
                memory: ReplayMemory::new(cfg.memory_capacity),
                sigma: SigmaController::new(cfg.sigma),
            })
            .collect();
        Self { agents }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }
}

/// All memories of agents other than `k`, in agent order.
pub fn cross_memory(k: usize, team: &Team) -> Vec<&Trajectory> {
    team.agents.iter().filter(|a| a.agent_id != k).flat_map(|a| a.memory.all()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentMetrics {
    pub agent_id: usize,
    pub mean_raw_mmd: Option<f64>,
    pub sigma: f64,
    pub distance_degenerate: bool,
    pub update: UpdateStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamMetrics {
    pub iteration: usize,
    /// Mean team reward per episode.
    pub mean_team_return: f64,
    /// Fraction of episodes ended on the optimal goal.
    pub team_success_rate: f64,
    pub agents: Vec<AgentMetrics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamSummary {
    pub iterations: usize,
    pub final_success_rate: f64,
    pub final_mean_return: f64,
}

#[derive(Debug, Clone)]
pub struct TcmaeTrainer {
    env: MpeGrid,
    cfg: TrainConfig,
    fmap: FeatureMap,
    pub team: Team,
    tracker: ConvergenceTracker,
    iteration: usize,
}

impl TcmaeTrainer {
    pub fn new(mut env: MpeGrid, cfg: TrainConfig) -> Result<Self> {
        cfg.validate()?;
        if let Some(m) = cfg.max_episode_len {
            env.world_mut().set_max_steps(m);
        }
        if env.world().goals().is_empty() {
            return Err(Error::invalid("environment has no goals"));
        }
        let w = env.world();
        let fmap = FeatureMap { width: w.width(), height: w.height(), mode: cfg.intrinsic.features };
        Ok(Self {
            team: Team::new(env.agent_count(), &cfg),
            tracker: ConvergenceTracker::new(cfg.convergence),
            iteration: 0,
            env,
            cfg,
            fmap,
        })
    }

    pub fn env(&self) -> &MpeGrid {
        &self.env
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn is_finished(&self) -> bool {
        self.iteration >= self.cfg.iterations
    }

    /// Collects one joint batch, refreshes every agent's memory, then
    /// updates agents in id order against the others' memories.
    pub fn step<E: Executor>(&mut self, exec: &E) -> Result<(TeamMetrics, Vec<OnPolicyBatch>)> {
        let policies: Vec<_> = self.team.agents.iter().map(|a| &a.learner.policy).collect();
        let per_agent = collect_joint_rollouts(
            &self.env,
            &policies,
            self.cfg.episodes_per_iter,
            self.cfg.seed,
            self.iteration as u64,
            exec,
        )?;
        for (slot, trajs) in self.team.agents.iter_mut().zip(&per_agent) {
            memory_refresh(&mut slot.memory, OWN_KEY, trajs);
        }
        let best = self.env.world().best_reward();
        let optimal = self.env.world().optimal_goal().unwrap_or(0);

        let mut batches = Vec::with_capacity(per_agent.len());
        for (k, trajs) in per_agent.into_iter().enumerate() {
            let mut batch = OnPolicyBatch::new(trajs);
            batch.annotate_values(&self.team.agents[k].learner.value)?;
            let mut same_goal = false;
            if self.cfg.intrinsic_enabled {
                let refs = cross_memory(k, &self.team);
                annotate_intrinsic(&mut batch, &refs, self.fmap, &self.cfg.intrinsic)?;
                same_goal = batch.trajectories.iter().any(|t| {
                    t.goal_id.is_some_and(|g| {
                        let suboptimal = self.env.world().goal(g).is_some_and(|goal| goal.reward < best);
                        suboptimal && refs.iter().any(|r| r.goal_id == Some(g))
                    })
                });
            }
            compute_returns(&mut batch, self.cfg.gamma);
            compute_advantages(&mut batch, self.cfg.gamma, self.cfg.gae_lambda)?;
            batches.push((batch, same_goal));
        }

        let mut agents = Vec::with_capacity(batches.len());
        for (slot, (batch, same_goal)) in self.team.agents.iter_mut().zip(&batches) {
            let sigma = slot.sigma.sigma;
            let update = slot.learner.ppo_update(batch, sigma, &self.cfg)?;
            if let Some(a) = &batch.intrinsic {
                slot.sigma.update(Some(&a.asm_distances), *same_goal);
            }
            agents.push(AgentMetrics {
                agent_id: slot.agent_id,
                mean_raw_mmd: batch.mean_raw_mmd(),
                sigma,
                distance_degenerate: batch.intrinsic.as_ref().is_some_and(|a| a.distances.degenerate),
                update,
            });
        }

        let episodes = &batches[0].0.trajectories;
        let world = self.env.world();
        let team_reward = |t: &Trajectory| t.episode_goal.and_then(|g| world.goal(g)).map_or(0.0, |g| g.reward);
        let n = episodes.len().max(1) as f64;
        for t in episodes {
            self.tracker.push(t.episode_goal, team_reward(t));
        }
        let metrics = TeamMetrics {
            iteration: self.iteration,
            mean_team_return: episodes.iter().map(team_reward).sum::<f64>() / n,
            team_success_rate: episodes.iter().filter(|t| t.episode_goal == Some(optimal)).count() as f64 / n,
            agents,
        };
        self.iteration += 1;
        Ok((metrics, batches.into_iter().map(|(b, _)| b).collect()))
    }

    pub fn run<E: Executor, F>(&mut self, exec: &E, mut on_iteration: F) -> Result<TeamSummary>
    where
        F: FnMut(&TeamMetrics, &[OnPolicyBatch]),
    {
        while !self.is_finished() {
            let (m, b) = self.step(exec)?;
            on_iteration(&m, &b);
        }
        Ok(self.summary())
    }

    pub fn summary(&self) -> TeamSummary {
        let optimal = self.env.world().optimal_goal().unwrap_or(0);
        TeamSummary {
            iterations: self.iteration,
            final_success_rate: self.tracker.success_rate(optimal),
            final_mean_return: self.tracker.mean_return(),
        }
    }
}
