//! Maze layouts as a text grid plus a JSON sidecar.
//!
//! The text file has one line per row, top row (largest `y`) first:
//! `#` wall, `.` free, `S` start, a digit is a goal id. The sidecar, the same
//! path with a `.json` extension, maps goal ids to rewards:
//!
//! ```text
//! {"rewards":{"0":6.0,"1":1.0},"max_steps":160}
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use tace_core::env::GridWorld;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub rewards: BTreeMap<u32, f64>,
    pub max_steps: u32,
}

pub fn sidecar_path(maze: &Path) -> PathBuf {
    maze.with_extension("json")
}

pub fn parse_maze(text: &str, sidecar: &Sidecar) -> Result<GridWorld> {
    let rewards: Vec<(u32, f64)> = sidecar.rewards.iter().map(|(k, v)| (*k, *v)).collect();
    Ok(GridWorld::from_text(text, &rewards, sidecar.max_steps)?)
}

pub fn sidecar_of(world: &GridWorld) -> Sidecar {
    Sidecar { rewards: world.goals().iter().map(|g| (g.id, g.reward)).collect(), max_steps: world.max_steps() }
}

pub fn load_maze(path: &Path) -> Result<GridWorld> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let side = sidecar_path(path);
    let json = std::fs::read_to_string(&side).with_context(|| format!("reading {}", side.display()))?;
    let sidecar: Sidecar = serde_json::from_str(&json).with_context(|| format!("parsing {}", side.display()))?;
    parse_maze(&text, &sidecar).with_context(|| format!("maze {}", path.display()))
}

pub fn save_maze(path: &Path, world: &GridWorld) -> Result<()> {
    std::fs::write(path, world.to_text())?;
    std::fs::write(sidecar_path(path), serde_json::to_string(&sidecar_of(world))?)?;
    Ok(())
}
