//! Run presets: one TOML table per task, each holding an environment and a
//! partial [`TrainConfig`] (missing keys take library defaults).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use tace_core::env::{open_mpe, open_three_goal, open_two_goal, GridWorld, MpeGrid};
use tace_core::trainer::TrainConfig;

use crate::maze::load_maze;

/// Presets bundled with the binary.
pub const BUILTIN_PRESETS: &str = include_str!("../presets.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvSpec {
    /// Open room with the reward-6 and reward-1 goals.
    TwoGoal { width: u32, height: u32, max_steps: u32 },
    /// [`EnvSpec::TwoGoal`] plus a reward-2 goal.
    ThreeGoal { width: u32, height: u32, max_steps: u32 },
    /// Two agents with a shared team reward in a two-goal room.
    Mpe { width: u32, height: u32, max_steps: u32 },
    /// Layout from a maze text file and its JSON sidecar.
    Maze { path: PathBuf },
}

pub enum BuiltEnv {
    Single(GridWorld),
    Team(MpeGrid),
}

impl EnvSpec {
    pub fn is_multi_agent(&self) -> bool {
        matches!(self, EnvSpec::Mpe { .. })
    }

    pub fn build(&self) -> Result<BuiltEnv> {
        Ok(match self {
            EnvSpec::TwoGoal { width, height, max_steps } => BuiltEnv::Single(open_two_goal(*width, *height, *max_steps)),
            EnvSpec::ThreeGoal { width, height, max_steps } => {
                BuiltEnv::Single(open_three_goal(*width, *height, *max_steps))
            }
            EnvSpec::Mpe { width, height, max_steps } => BuiltEnv::Team(open_mpe(*width, *height, *max_steps)),
            EnvSpec::Maze { path } => BuiltEnv::Single(load_maze(path)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub env: EnvSpec,
    #[serde(default)]
    pub train: TrainConfig,
    /// Iterations between heatmap dumps; 0 disables them.
    #[serde(default = "default_heatmap_every")]
    pub heatmap_every: usize,
}

fn default_heatmap_every() -> usize {
    100
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Tcppo,
    Ppo,
    Tcmae,
    Ippo,
}

impl Algorithm {
    pub fn is_multi_agent(self) -> bool {
        matches!(self, Algorithm::Tcmae | Algorithm::Ippo)
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tcppo => "tcppo",
            Algorithm::Ppo => "ppo",
            Algorithm::Tcmae => "tcmae",
            Algorithm::Ippo => "ippo",
        }
    }

    /// The training configuration this algorithm actually runs with.
    pub fn effective(self, cfg: &TrainConfig) -> TrainConfig {
        match self {
            Algorithm::Tcppo | Algorithm::Tcmae => cfg.clone(),
            Algorithm::Ppo => cfg.vanilla(),
            Algorithm::Ippo => TrainConfig { intrinsic_enabled: false, ..cfg.clone() },
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tcppo" => Ok(Algorithm::Tcppo),
            "ppo" => Ok(Algorithm::Ppo),
            "tcmae" => Ok(Algorithm::Tcmae),
            "ippo" => Ok(Algorithm::Ippo),
            other => bail!("unknown algorithm {other:?} (expected tcppo, ppo, tcmae or ippo)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Presets(pub BTreeMap<String, Preset>);

impl Presets {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self(toml::from_str(text).context("parsing presets")?))
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_PRESETS).expect("bundled presets parse")
    }

    /// Built-in presets, with same-named entries replaced by those in `path`.
    pub fn with_file(path: Option<&Path>) -> Result<Self> {
        let mut p = Self::builtin();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            p.0.extend(Self::parse(&text)?.0);
        }
        Ok(p)
    }

    pub fn get(&self, name: &str) -> Result<&Preset> {
        self.0.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.0.keys().map(String::as_str).collect();
            anyhow!("unknown environment preset {name:?}; known: {}", known.join(", "))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

/// Applies `dotted.key=value` overrides. Values are parsed as TOML, falling
/// back to a bare string, so `train.sigma.init=0.42` and
/// `train.intrinsic.kernel=laplace` both work.
pub fn apply_overrides(preset: &Preset, overrides: &[String]) -> Result<Preset> {
    if overrides.is_empty() {
        return Ok(preset.clone());
    }
    let mut root = toml::Value::try_from(preset).context("serializing preset")?;
    for o in overrides {
        let (key, raw) = o.split_once('=').ok_or_else(|| anyhow!("override {o:?} is not key=value"))?;
        let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
            Ok(mut t) => t.remove("v").expect("parsed key"),
            Err(_) => toml::Value::String(raw.to_string()),
        };
        let parts: Vec<&str> = key.trim().split('.').collect();
        let (last, path) = parts.split_last().expect("split yields one part");
        let mut cur = &mut root;
        for p in path {
            let table = cur.as_table_mut().ok_or_else(|| anyhow!("override {key:?}: {p:?} is not a table"))?;
            cur = table.entry(p.to_string()).or_insert_with(|| toml::Value::Table(Default::default()));
        }
        cur.as_table_mut().ok_or_else(|| anyhow!("override {key:?} does not name a table entry"))?.insert(last.to_string(), value);
    }
    root.try_into().with_context(|| "applying overrides".to_string())
}
