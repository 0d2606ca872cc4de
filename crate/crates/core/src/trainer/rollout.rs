use alloc::vec::Vec;

use super::trajectory::{Step, Trajectory};
use crate::env::{GridWorld, JointState, MpeGrid};
use crate::nn::CategoricalPolicy;
use crate::rng::{stream, Rng, TAG_EPISODE};
use crate::Result;

/// Runs independent jobs `0..n` and returns their results in index order.
pub trait Executor: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Runs every job on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..n).map(f).collect()
    }
}

/// Random stream for episode `episode` of iteration `iteration`.
pub fn episode_stream(seed: u64, iteration: u64, episode: u64) -> Rng {
    stream(seed, &[TAG_EPISODE, iteration, episode])
}

pub fn run_episode(env: &GridWorld, policy: &CategoricalPolicy, rng: &mut Rng, episode_id: u64) -> Result<Trajectory> {
    let mut state = env.reset();
    let mut steps = Vec::new();
    loop {
        let obs = env.observe(state.pos);
        let (action, log_prob) = policy.sample(&obs, rng)?;
        let r = env.step(state, action)?;
        steps.push(Step { pos: state.pos, obs, action, reward: r.reward, log_prob });
        state = r.next;
        if r.terminal {
            return Ok(Trajectory {
                episode_id,
                steps,
                final_pos: state.pos,
                final_obs: env.observe(state.pos),
                goal_id: r.goal_id,
                episode_goal: r.goal_id,
                truncated: r.truncated,
            });
        }
    }
}

/// Collects `n` episodes; episode `e` draws from its own seed-derived stream.
pub fn collect_rollouts<E: Executor>(
    env: &GridWorld,
    policy: &CategoricalPolicy,
    n: usize,
    seed: u64,
    iteration: u64,
    exec: &E,
) -> Result<Vec<Trajectory>> {
    exec.map(n, |e| {
        let mut rng = episode_stream(seed, iteration, e as u64);
        run_episode(env, policy, &mut rng, iteration * n as u64 + e as u64)
    })
    .into_iter()
    .collect()
}

/// Runs one joint episode. Per step, agents sample in index order from the
/// shared episode stream. Returns one trajectory per agent.
pub fn run_joint_episode(
    env: &MpeGrid,
    policies: &[&CategoricalPolicy],
    rng: &mut Rng,
    episode_id: u64,
) -> Result<Vec<Trajectory>> {
    let k = env.agent_count();
    let mut state: JointState = env.reset();
    let mut steps: Vec<Vec<Step>> = (0..k).map(|_| Vec::new()).collect();
    let mut actions = alloc::vec![0usize; k];
    let mut obs = alloc::vec![[0.0; 2]; k];
    let mut lps = alloc::vec![0.0; k];
    loop {
        for a in 0..k {
            obs[a] = env.observe(a, state.pos[a]);
            let (act, lp) = policies[a].sample(&obs[a], rng)?;
            actions[a] = act;
            lps[a] = lp;
        }
        let r = env.step(&state, &actions)?;
        for a in 0..k {
            steps[a].push(Step { pos: state.pos[a], obs: obs[a], action: actions[a], reward: r.rewards[a], log_prob: lps[a] });
        }
        state = r.next;
        if r.terminal {
            return Ok(steps
                .into_iter()
                .enumerate()
                .map(|(a, s)| Trajectory {
                    episode_id,
                    steps: s,
                    final_pos: state.pos[a],
                    final_obs: env.observe(a, state.pos[a]),
                    goal_id: r.agent_goals[a],
                    episode_goal: r.goal_id,
                    truncated: r.truncated,
                })
                .collect());
        }
    }
}

/// Joint counterpart of [`collect_rollouts`]: result `[agent][episode]`.
pub fn collect_joint_rollouts<E: Executor>(
    env: &MpeGrid,
    policies: &[&CategoricalPolicy],
    n: usize,
    seed: u64,
    iteration: u64,
    exec: &E,
) -> Result<Vec<Vec<Trajectory>>> {
    let episodes = exec
        .map(n, |e| {
            let mut rng = episode_stream(seed, iteration, e as u64);
            run_joint_episode(env, policies, &mut rng, iteration * n as u64 + e as u64)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut per_agent: Vec<Vec<Trajectory>> = (0..env.agent_count()).map(|_| Vec::with_capacity(n)).collect();
    for ep in episodes {
        for (a, t) in ep.into_iter().enumerate() {
            per_agent[a].push(t);
        }
    }
    Ok(per_agent)
}
