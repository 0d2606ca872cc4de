//! Per-run manifest: what ran, with which effective configuration, from
//! which source revision, and how it ended.

use std::path::Path;
use std::process::Command;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tace_core::trainer::TrainConfig;

use crate::config::{Algorithm, EnvSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub iterations: usize,
    pub phases: usize,
    pub final_success_rate: f64,
    pub final_mean_return: f64,
    pub converged_optimal: bool,
    /// Batch-mean raw MMD at the first iteration with a non-empty memory.
    pub first_mmd: Option<f64>,
    pub last_mmd: Option<f64>,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tace_version: String,
    pub algorithm: Algorithm,
    pub env_name: String,
    pub env: EnvSpec,
    pub seed: u64,
    pub config_hash: String,
    pub git_revision: Option<String>,
    pub train: TrainConfig,
    /// `running`, `completed` or `failed`.
    pub status: String,
    pub error: Option<String>,
    pub outcome: Option<RunOutcome>,
}

/// SHA-256 over the canonical JSON of everything that shapes training except
/// the seed, so runs of one configuration share a hash across seeds.
pub fn config_hash(algorithm: Algorithm, env: &EnvSpec, train: &TrainConfig) -> String {
    let train = TrainConfig { seed: 0, ..train.clone() };
    // serde_json::Value keeps object keys sorted, which makes the bytes canonical
    let v = serde_json::json!({ "algorithm": algorithm, "env": env, "train": train });
    let bytes = serde_json::to_vec(&v).expect("config serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// `git rev-parse HEAD` in `dir`, if it is inside a repository.
pub fn git_revision(dir: &Path) -> Option<String> {
    let out = Command::new("git").arg("rev-parse").arg("HEAD").current_dir(dir).output().ok()?;
    if !out.status.success() {
        return None;
    }
    let rev = String::from_utf8(out.stdout).ok()?.trim().to_string();
    (!rev.is_empty()).then_some(rev)
}

impl Manifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
