//! Replay memories as JSON lines, one trajectory per line.
//!
//! ```text
//! {"key":1,"episode_id":42,"goal_id":1,"episode_goal":1,"truncated":false,"steps":[[0,0,0,0.0],[1,0,0,1.0]],"final":[2,0]}
//! ```
//!
//! `key` is the goal id for single-agent memories and the agent id for
//! multi-agent ones. Each step is `[x, y, action, reward]` where `(x, y)` is
//! the cell the action was taken from. Observations are recomputed from the
//! cells on load; sampling log-probabilities are not stored and load as 0.

use std::io::{BufRead, Write};

use anyhow::{ensure, Context, Result};
use serde::{Deserialize, Serialize};
use tace_core::env::Cell;
use tace_core::trainer::{Step, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Line {
    key: u32,
    episode_id: u64,
    goal_id: Option<u32>,
    episode_goal: Option<u32>,
    truncated: bool,
    steps: Vec<(i32, i32, usize, f64)>,
    #[serde(rename = "final")]
    final_pos: (i32, i32),
}

pub fn write_memory<'a, W, I>(mut w: W, entries: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (u32, &'a Trajectory)>,
{
    for (key, t) in entries {
        let line = Line {
            key,
            episode_id: t.episode_id,
            goal_id: t.goal_id,
            episode_goal: t.episode_goal,
            truncated: t.truncated,
            steps: t.steps.iter().map(|s| (s.pos.x, s.pos.y, s.action, s.reward)).collect(),
            final_pos: (t.final_pos.x, t.final_pos.y),
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `(key, trajectory)` pairs; `observe` maps a cell to the policy observation.
pub fn read_memory<R, F>(r: R, observe: F) -> Result<Vec<(u32, Trajectory)>>
where
    R: BufRead,
    F: Fn(Cell) -> [f64; 2],
{
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let l: Line = serde_json::from_str(&line).with_context(|| format!("memory line {}", n + 1))?;
        ensure!(!l.steps.is_empty(), "memory line {}: trajectory has no steps", n + 1);
        let steps = l
            .steps
            .iter()
            .map(|&(x, y, action, reward)| {
                let pos = Cell::new(x, y);
                Step { pos, obs: observe(pos), action, reward, log_prob: 0.0 }
            })
            .collect();
        let final_pos = Cell::new(l.final_pos.0, l.final_pos.1);
        out.push((
            l.key,
            Trajectory {
                episode_id: l.episode_id,
                steps,
                final_pos,
                final_obs: observe(final_pos),
                goal_id: l.goal_id,
                episode_goal: l.episode_goal,
                truncated: l.truncated,
            },
        ));
    }
    Ok(out)
}
