//! Per-iteration metrics CSV.
//!
//! Columns, in order (multi-agent runs insert `agent_id` after `iteration`
//! and write one row per agent):
//!
//! ```text
//! iteration,phase_index,mean_extrinsic_return,success_rate_optimal,mean_raw_mmd,sigma,distance_degenerate,memory_size,entropy,approx_kl,clip_fraction
//! 0,0,1,0.125,,0.5,0,0,1.3862915,0.0000012,0
//! ```
//!
//! `mean_raw_mmd` is empty while the memory is empty. Floats use the
//! shortest representation that round-trips, so identical runs give
//! identical bytes. Wall-clock time goes to a separate `timing.csv`
//! (`iteration,wall_seconds`) for the same reason.

use std::io::Write;

use anyhow::Result;
use tace_core::multiagent::TeamMetrics;
use tace_core::trainer::IterationMetrics;

pub const COLUMNS: &[&str] = &[
    "iteration",
    "phase_index",
    "mean_extrinsic_return",
    "success_rate_optimal",
    "mean_raw_mmd",
    "sigma",
    "distance_degenerate",
    "memory_size",
    "entropy",
    "approx_kl",
    "clip_fraction",
];

pub const AGENT_COLUMN: &str = "agent_id";

pub fn header(multi_agent: bool) -> Vec<&'static str> {
    let mut h = COLUMNS.to_vec();
    if multi_agent {
        h.insert(1, AGENT_COLUMN);
    }
    h
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub struct MetricsWriter<W: Write> {
    csv: csv::Writer<W>,
    multi_agent: bool,
}

impl<W: Write> MetricsWriter<W> {
    pub fn new(w: W, multi_agent: bool) -> Result<Self> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(header(multi_agent))?;
        csv.flush()?;
        Ok(Self { csv, multi_agent })
    }

    pub fn single(&mut self, m: &IterationMetrics) -> Result<()> {
        debug_assert!(!self.multi_agent);
        self.csv.write_record([
            m.iteration.to_string(),
            m.phase.to_string(),
            m.mean_extrinsic_return.to_string(),
            m.success_rate_optimal.to_string(),
            opt(m.mean_raw_mmd),
            m.sigma.to_string(),
            u8::from(m.distance_degenerate).to_string(),
            m.memory_size.to_string(),
            m.update.entropy.to_string(),
            m.update.approx_kl.to_string(),
            m.update.clip_fraction.to_string(),
        ])?;
        self.csv.flush()?;
        Ok(())
    }

    /// One row per agent; team return and success repeat on each row.
    pub fn team(&mut self, m: &TeamMetrics, memory_sizes: &[usize]) -> Result<()> {
        debug_assert!(self.multi_agent);
        for (a, mem) in m.agents.iter().zip(memory_sizes) {
            self.csv.write_record([
                m.iteration.to_string(),
                a.agent_id.to_string(),
                "0".to_string(),
                m.mean_team_return.to_string(),
                m.team_success_rate.to_string(),
                opt(a.mean_raw_mmd),
                a.sigma.to_string(),
                u8::from(a.distance_degenerate).to_string(),
                mem.to_string(),
                a.update.entropy.to_string(),
                a.update.approx_kl.to_string(),
                a.update.clip_fraction.to_string(),
            ])?;
        }
        self.csv.flush()?;
        Ok(())
    }
}

pub struct TimingWriter<W: Write> {
    csv: csv::Writer<W>,
}

impl<W: Write> TimingWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["iteration", "wall_seconds"])?;
        Ok(Self { csv })
    }

    pub fn row(&mut self, iteration: usize, wall_seconds: f64) -> Result<()> {
        self.csv.write_record([iteration.to_string(), format!("{wall_seconds:.6}")])?;
        self.csv.flush()?;
        Ok(())
    }
}
