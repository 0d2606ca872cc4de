use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::asm::SigmaController;
use super::batch::OnPolicyBatch;
use super::config::{ConvergenceConfig, TrainConfig};
use super::intrinsic::annotate_intrinsic;
use super::memory::ReplayMemory;
use super::ppo::{Learner, UpdateStats};
use super::returns::{compute_advantages, compute_returns};
use super::rollout::{collect_rollouts, Executor};
use super::trajectory::{FeatureMap, Trajectory, OBS_DIM};
use crate::env::{Action, GridWorld};
use crate::{Error, Result};

/// The goal reached in at least `threshold` of the last `window` episodes, if
/// the window is full.
pub fn detect_convergence(recent: &[Option<u32>], cfg: &ConvergenceConfig) -> Option<u32> {
    if recent.len() < cfg.window {
        return None;
    }
    let tail = &recent[recent.len() - cfg.window..];
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for g in tail.iter().flatten() {
        *counts.entry(*g).or_default() += 1;
    }
    let need = cfg.threshold * cfg.window as f64;
    counts.into_iter().find(|&(_, c)| c as f64 >= need).map(|(g, _)| g)
}

/// Sliding window of episode outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTracker {
    pub config: ConvergenceConfig,
    goals: VecDeque<Option<u32>>,
    returns: VecDeque<f64>,
}

impl ConvergenceTracker {
    pub fn new(config: ConvergenceConfig) -> Self {
        Self { config, goals: VecDeque::new(), returns: VecDeque::new() }
    }

    pub fn push(&mut self, goal: Option<u32>, ret: f64) {
        self.goals.push_back(goal);
        self.returns.push_back(ret);
        while self.goals.len() > self.config.window {
            self.goals.pop_front();
            self.returns.pop_front();
        }
    }

    pub fn clear(&mut self) {
        self.goals.clear();
        self.returns.clear();
    }

    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn converged(&self) -> Option<u32> {
        let v: Vec<Option<u32>> = self.goals.iter().copied().collect();
        detect_convergence(&v, &self.config)
    }

    pub fn success_rate(&self, goal: u32) -> f64 {
        if self.goals.is_empty() {
            return 0.0;
        }
        self.goals.iter().filter(|g| **g == Some(goal)).count() as f64 / self.goals.len() as f64
    }

    pub fn mean_return(&self) -> f64 {
        if self.returns.is_empty() {
            return 0.0;
        }
        self.returns.iter().sum::<f64>() / self.returns.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseEvent {
    /// Converged on a suboptimal goal; its recent trajectories went to memory.
    StoredSuboptimal { goal: u32 },
    ConvergedOptimal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationMetrics {
    pub iteration: usize,
    pub phase: usize,
    pub mean_extrinsic_return: f64,
    pub success_rate_optimal: f64,
    pub mean_raw_mmd: Option<f64>,
    /// σ used for this iteration's update.
    pub sigma: f64,
    pub distance_degenerate: bool,
    pub bandwidth: Option<f64>,
    pub memory_size: usize,
    pub update: UpdateStats,
    pub event: Option<PhaseEvent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub iterations: usize,
    pub phases: usize,
    /// Success rate on the optimal goal over the convergence window.
    pub final_success_rate: f64,
    pub final_mean_return: f64,
    pub converged_optimal: bool,
}

/// Trajectory-constrained PPO with the outer goal-discovery loop. With the
/// distance reward disabled and one phase it is plain PPO.
#[derive(Debug, Clone)]
pub struct TcppoTrainer {
    env: GridWorld,
    cfg: TrainConfig,
    fmap: FeatureMap,
    pub learner: Learner,
    pub memory: ReplayMemory,
    pub sigma: SigmaController,
    tracker: ConvergenceTracker,
    recent_by_goal: BTreeMap<u32, VecDeque<Trajectory>>,
    phase: usize,
    iteration: usize,
    finished: bool,
    converged_optimal: bool,
}

impl TcppoTrainer {
    pub fn new(mut env: GridWorld, cfg: TrainConfig) -> Result<Self> {
        cfg.validate()?;
        if let Some(m) = cfg.max_episode_len {
            env.set_max_steps(m);
        }
        if env.goals().is_empty() {
            return Err(Error::invalid("environment has no goals"));
        }
        let learner = Learner::new(OBS_DIM, Action::COUNT, &cfg, 0);
        let fmap = FeatureMap { width: env.width(), height: env.height(), mode: cfg.intrinsic.features };
        Ok(Self {
            memory: ReplayMemory::new(cfg.memory_capacity),
            sigma: SigmaController::new(cfg.sigma),
            tracker: ConvergenceTracker::new(cfg.convergence),
            recent_by_goal: BTreeMap::new(),
            phase: 0,
            iteration: 0,
            finished: false,
            converged_optimal: false,
            env,
            cfg,
            fmap,
            learner,
        })
    }

    pub fn env(&self) -> &GridWorld {
        &self.env
    }

    pub fn config(&self) -> &TrainConfig {
        &self.cfg
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn tracker(&self) -> &ConvergenceTracker {
        &self.tracker
    }

    fn is_optimal(&self, goal: u32) -> bool {
        self.env.goal(goal).is_some_and(|g| g.reward >= self.env.best_reward())
    }

    /// Collects and annotates one batch without updating anything.
    pub fn prepare_batch<E: Executor>(&self, exec: &E) -> Result<OnPolicyBatch> {
        let trajs = collect_rollouts(
            &self.env,
            &self.learner.policy,
            self.cfg.episodes_per_iter,
            self.cfg.seed,
            self.iteration as u64,
            exec,
        )?;
        let mut batch = OnPolicyBatch::new(trajs);
        batch.annotate_values(&self.learner.value)?;
        if self.cfg.intrinsic_enabled {
            let mem = self.memory.all();
            annotate_intrinsic(&mut batch, &mem, self.fmap, &self.cfg.intrinsic)?;
        }
        compute_returns(&mut batch, self.cfg.gamma);
        compute_advantages(&mut batch, self.cfg.gamma, self.cfg.gae_lambda)?;
        Ok(batch)
    }

    /// One training iteration. The returned batch is the one used for the update.
    pub fn step<E: Executor>(&mut self, exec: &E) -> Result<(IterationMetrics, OnPolicyBatch)> {
        if self.finished {
            return Err(Error::Precondition("training already finished".into()));
        }
        let batch = self.prepare_batch(exec)?;
        let sigma = self.sigma.sigma;
        let update = self.learner.ppo_update(&batch, sigma, &self.cfg)?;

        if let Some(a) = &batch.intrinsic {
            let same_goal = batch
                .trajectories
                .iter()
                .any(|t| t.episode_goal.is_some_and(|g| self.memory.contains_key(g)));
            self.sigma.update(Some(&a.asm_distances), same_goal);
        }

        let optimal = self.env.optimal_goal().unwrap_or(0);
        let mut metrics = IterationMetrics {
            iteration: self.iteration,
            phase: self.phase,
            mean_extrinsic_return: batch.mean_extrinsic_return(),
            success_rate_optimal: batch.success_rate(optimal),
            mean_raw_mmd: batch.mean_raw_mmd(),
            sigma,
            distance_degenerate: batch.intrinsic.as_ref().is_some_and(|a| a.distances.degenerate),
            bandwidth: batch.intrinsic.as_ref().map(|a| a.kernel.bandwidth()),
            memory_size: self.memory.len(),
            update,
            event: None,
        };

        for t in &batch.trajectories {
            self.tracker.push(t.episode_goal, t.extrinsic_return());
            if let Some(g) = t.episode_goal {
                let q = self.recent_by_goal.entry(g).or_default();
                q.push_back(t.clone());
                while q.len() > self.cfg.memory_capacity {
                    q.pop_front();
                }
            }
        }
        if let Some(g) = self.tracker.converged() {
            if self.is_optimal(g) {
                self.finished = true;
                self.converged_optimal = true;
                metrics.event = Some(PhaseEvent::ConvergedOptimal);
            } else if self.cfg.intrinsic_enabled && self.phase + 1 < self.cfg.goal_count {
                let demos: Vec<Trajectory> = self.recent_by_goal.get(&g).into_iter().flatten().cloned().collect();
                self.memory.extend(g, demos);
                self.phase += 1;
                self.sigma.reset();
                self.tracker.clear();
                metrics.event = Some(PhaseEvent::StoredSuboptimal { goal: g });
            }
        }
        self.iteration += 1;
        if self.iteration >= self.cfg.iterations {
            self.finished = true;
        }
        Ok((metrics, batch))
    }

    /// Trains until the budget is spent or the optimal goal is converged on.
    pub fn run<E: Executor, F>(&mut self, exec: &E, mut on_iteration: F) -> Result<RunSummary>
    where
        F: FnMut(&IterationMetrics, &OnPolicyBatch),
    {
        while !self.finished {
            let (m, b) = self.step(exec)?;
            on_iteration(&m, &b);
        }
        Ok(self.summary())
    }

    pub fn summary(&self) -> RunSummary {
        let optimal = self.env.optimal_goal().unwrap_or(0);
        RunSummary {
            iterations: self.iteration,
            phases: self.phase + 1,
            final_success_rate: self.tracker.success_rate(optimal),
            final_mean_return: self.tracker.mean_return(),
            converged_optimal: self.converged_optimal,
        }
    }
}
