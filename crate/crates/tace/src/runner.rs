//! Seeded experiment runs and their on-disk artifacts.
//!
//! Each seed gets its own directory:
//!
//! ```text
//! <out>/seed_<n>/manifest.json
//!               metrics.csv
//!               timing.csv
//!               heatmaps/iter_<i>.csv          (multi-agent: iter_<i>_agent<k>.csv)
//!               checkpoint.bin
//!               memory.jsonl
//! ```
//!
//! Metrics are flushed row by row and the manifest is rewritten with status
//! `failed` on error, so a crashed run keeps everything up to the failure.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use tace_core::multiagent::TcmaeTrainer;
use tace_core::trainer::{trajectory_visitation, Executor, TcppoTrainer, Trajectory};

use crate::config::{Algorithm, BuiltEnv, Preset};
use crate::heatmap::Heatmap;
use crate::manifest::{config_hash, git_revision, Manifest, RunOutcome};
use crate::metrics::{MetricsWriter, TimingWriter};
use crate::{checkpoint, memory_io};

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub env_name: String,
    /// Preset after overrides; its `train.seed` is replaced per seed.
    pub preset: Preset,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct SeedResult {
    pub seed: u64,
    pub dir: PathBuf,
    pub outcome: RunOutcome,
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            bail!("at least one seed is required");
        }
        match (self.algorithm.is_multi_agent(), self.preset.env.is_multi_agent()) {
            (true, false) => bail!("{} needs a multi-agent environment, {:?} is single-agent", self.algorithm, self.env_name),
            (false, true) => bail!("{} needs a single-agent environment, {:?} is multi-agent", self.algorithm, self.env_name),
            _ => {}
        }
        self.algorithm.effective(&self.preset.train).validate()?;
        Ok(())
    }

    pub fn seed_dir(&self, seed: u64) -> PathBuf {
        self.out_dir.join(format!("seed_{seed}"))
    }
}

/// Parses `1`, `1,3,5`, `1..5` (inclusive) or a mix such as `1..3,7`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
            if b < a {
                bail!("empty seed range {part:?}");
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().with_context(|| format!("bad seed {part:?}"))?);
        }
    }
    if out.is_empty() {
        bail!("no seeds in {s:?}");
    }
    Ok(out)
}

/// Tracks the raw MMD at the start of the current phase and at the latest iteration.
#[derive(Default)]
struct MmdTrend {
    phase: usize,
    first: Option<f64>,
    last: Option<f64>,
}

impl MmdTrend {
    fn push(&mut self, phase: usize, mmd: Option<f64>) {
        if phase != self.phase {
            self.phase = phase;
            self.first = None;
        }
        if mmd.is_some() {
            self.first = self.first.or(mmd);
            self.last = mmd;
        }
    }
}

struct Artifacts {
    dir: PathBuf,
    metrics: MetricsWriter<BufWriter<File>>,
    timing: TimingWriter<BufWriter<File>>,
}

impl Artifacts {
    fn create(dir: &Path, multi_agent: bool) -> Result<Self> {
        std::fs::create_dir_all(dir.join("heatmaps")).with_context(|| format!("creating {}", dir.display()))?;
        let open = |name: &str| -> Result<BufWriter<File>> { Ok(BufWriter::new(File::create(dir.join(name))?)) };
        Ok(Self {
            dir: dir.to_path_buf(),
            metrics: MetricsWriter::new(open("metrics.csv")?, multi_agent)?,
            timing: TimingWriter::new(open("timing.csv")?)?,
        })
    }

    fn heatmap(&self, name: &str, h: &Heatmap) -> Result<()> {
        h.write_csv(BufWriter::new(File::create(self.dir.join("heatmaps").join(name))?))
    }
}

fn accumulate(h: &mut Heatmap, trajs: &[Trajectory]) {
    h.add_counts(&trajectory_visitation(h.width, h.height, trajs));
}

fn run_single<E: Executor>(preset: &Preset, train: tace_core::trainer::TrainConfig, exec: &E, art: &mut Artifacts) -> Result<RunOutcome> {
    let BuiltEnv::Single(env) = preset.env.build()? else { bail!("expected a single-agent environment") };
    let (w, h) = (env.width(), env.height());
    let mut trainer = TcppoTrainer::new(env, train)?;
    let start = Instant::now();
    let mut heat = Heatmap::zeros(w, h);
    let mut trend = MmdTrend::default();
    let every = preset.heatmap_every;
    while !trainer.is_finished() {
        let (m, batch) = trainer.step(exec)?;
        art.metrics.single(&m)?;
        art.timing.row(m.iteration, start.elapsed().as_secs_f64())?;
        trend.push(m.phase, m.mean_raw_mmd);
        accumulate(&mut heat, &batch.trajectories);
        let done = trainer.is_finished();
        if every > 0 && ((m.iteration + 1) % every == 0 || done) {
            art.heatmap(&format!("iter_{:06}.csv", m.iteration + 1), &heat)?;
            heat = Heatmap::zeros(w, h);
        }
    }
    checkpoint::save(
        &art.dir.join("checkpoint.bin"),
        &[("policy", &trainer.learner.policy.net), ("value", &trainer.learner.value)],
    )?;
    let mem = BufWriter::new(File::create(art.dir.join("memory.jsonl"))?);
    memory_io::write_memory(mem, trainer.memory.iter())?;
    let s = trainer.summary();
    Ok(RunOutcome {
        iterations: s.iterations,
        phases: s.phases,
        final_success_rate: s.final_success_rate,
        final_mean_return: s.final_mean_return,
        converged_optimal: s.converged_optimal,
        first_mmd: trend.first,
        last_mmd: trend.last,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

fn run_team<E: Executor>(preset: &Preset, train: tace_core::trainer::TrainConfig, exec: &E, art: &mut Artifacts) -> Result<RunOutcome> {
    let BuiltEnv::Team(env) = preset.env.build()? else { bail!("expected a multi-agent environment") };
    let (w, h) = (env.world().width(), env.world().height());
    let agents = env.agent_count();
    let mut trainer = TcmaeTrainer::new(env, train)?;
    let start = Instant::now();
    let mut heats = vec![Heatmap::zeros(w, h); agents];
    let mut trend = MmdTrend::default();
    let every = preset.heatmap_every;
    while !trainer.is_finished() {
        let (m, batches) = trainer.step(exec)?;
        let sizes: Vec<usize> = trainer.team.agents.iter().map(|a| a.memory.len()).collect();
        art.metrics.team(&m, &sizes)?;
        art.timing.row(m.iteration, start.elapsed().as_secs_f64())?;
        let agent_mmd: Vec<f64> = m.agents.iter().filter_map(|a| a.mean_raw_mmd).collect();
        trend.push(0, (!agent_mmd.is_empty()).then(|| agent_mmd.iter().sum::<f64>() / agent_mmd.len() as f64));
        for (heat, b) in heats.iter_mut().zip(&batches) {
            accumulate(heat, &b.trajectories);
        }
        let done = trainer.is_finished();
        if every > 0 && ((m.iteration + 1) % every == 0 || done) {
            for (k, heat) in heats.iter_mut().enumerate() {
                art.heatmap(&format!("iter_{:06}_agent{k}.csv", m.iteration + 1), heat)?;
                *heat = Heatmap::zeros(w, h);
            }
        }
    }
    let names: Vec<(String, String)> = (0..agents).map(|k| (format!("policy_{k}"), format!("value_{k}"))).collect();
    let mut nets = Vec::new();
    for (slot, (p, v)) in trainer.team.agents.iter().zip(&names) {
        nets.push((p.as_str(), &slot.learner.policy.net));
        nets.push((v.as_str(), &slot.learner.value));
    }
    checkpoint::save(&art.dir.join("checkpoint.bin"), &nets)?;
    let mem = BufWriter::new(File::create(art.dir.join("memory.jsonl"))?);
    let entries = trainer.team.agents.iter().flat_map(|a| a.memory.all().into_iter().map(move |t| (a.agent_id as u32, t)));
    memory_io::write_memory(mem, entries)?;
    let s = trainer.summary();
    Ok(RunOutcome {
        iterations: s.iterations,
        phases: 1,
        final_success_rate: s.final_success_rate,
        final_mean_return: s.final_mean_return,
        converged_optimal: false,
        first_mmd: trend.first,
        last_mmd: trend.last,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_seed<E: Executor>(spec: &RunSpec, seed: u64, exec: &E, revision: Option<String>) -> Result<SeedResult> {
    let mut train = spec.algorithm.effective(&spec.preset.train);
    train.seed = seed;
    let dir = spec.seed_dir(seed);
    let mut art = Artifacts::create(&dir, spec.algorithm.is_multi_agent())?;
    let mut manifest = Manifest {
        tace_version: env!("CARGO_PKG_VERSION").to_string(),
        algorithm: spec.algorithm,
        env_name: spec.env_name.clone(),
        env: spec.preset.env.clone(),
        seed,
        config_hash: config_hash(spec.algorithm, &spec.preset.env, &train),
        git_revision: revision,
        train: train.clone(),
        status: "running".into(),
        error: None,
        outcome: None,
    };
    let manifest_path = dir.join("manifest.json");
    manifest.write(&manifest_path)?;
    let result = if spec.algorithm.is_multi_agent() {
        run_team(&spec.preset, train, exec, &mut art)
    } else {
        run_single(&spec.preset, train, exec, &mut art)
    };
    match result {
        Ok(outcome) => {
            manifest.status = "completed".into();
            manifest.outcome = Some(outcome.clone());
            manifest.write(&manifest_path)?;
            Ok(SeedResult { seed, dir, outcome })
        }
        Err(e) => {
            manifest.status = "failed".into();
            manifest.error = Some(format!("{e:#}"));
            manifest.write(&manifest_path)?;
            Err(e.context(format!("seed {seed}")))
        }
    }
}

/// Runs every seed in order; stops at the first failure.
pub fn run<E: Executor>(spec: &RunSpec, exec: &E) -> Result<Vec<SeedResult>> {
    spec.validate()?;
    std::fs::create_dir_all(&spec.out_dir)?;
    let revision = git_revision(Path::new(env!("CARGO_MANIFEST_DIR")));
    spec.seeds.iter().map(|&s| run_seed(spec, s, exec, revision.clone())).collect()
}
