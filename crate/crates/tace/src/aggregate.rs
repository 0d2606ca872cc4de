//! Cross-seed aggregation of metrics CSVs.
//!
//! Output columns: the key columns (`iteration`, plus `agent_id` when
//! present), `runs`, then `<col>_mean,<col>_std,<col>_sem` for every other
//! column. `std` is the sample standard deviation (0 for a single run) and
//! `sem = std / √n`. Empty cells are left out of that column's statistics;
//! a column with no values at a row is written empty. Rows cover iterations
//! present in every run, i.e. the shortest run's length.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};

use crate::metrics::AGENT_COLUMN;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn read_table<R: Read>(r: R) -> Result<Table> {
    let mut csv = csv::Reader::from_reader(r);
    let header: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in csv.records() {
        rows.push(rec?.iter().map(str::to_string).collect());
    }
    Ok(Table { header, rows })
}

/// A run directory's `metrics.csv`, or the path itself when it is a file.
pub fn metrics_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join("metrics.csv")
    } else {
        p.to_path_buf()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub sem: f64,
}

pub fn stats(values: &[f64]) -> Option<Stats> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Some(Stats { n, mean, std, sem: std / (n as f64).sqrt() })
}

fn parse_key(s: &str) -> Result<u64> {
    s.trim().parse().with_context(|| format!("bad key value {s:?}"))
}

pub fn aggregate(tables: &[Table]) -> Result<Table> {
    let Some(first) = tables.first() else { bail!("nothing to aggregate") };
    for (i, t) in tables.iter().enumerate() {
        ensure!(t.header == first.header, "schema mismatch: input {} has columns {:?}, expected {:?}", i + 1, t.header, first.header);
    }
    let header = &first.header;
    ensure!(header.first().map(String::as_str) == Some("iteration"), "first column must be iteration");
    let key_cols = if header.get(1).map(String::as_str) == Some(AGENT_COLUMN) { 2 } else { 1 };

    // per run: key -> row
    let mut keyed: Vec<BTreeMap<(u64, u64), &Vec<String>>> = Vec::new();
    for t in tables {
        let mut m = BTreeMap::new();
        for row in &t.rows {
            ensure!(row.len() == header.len(), "row has {} cells, header has {}", row.len(), header.len());
            let it = parse_key(&row[0])?;
            let agent = if key_cols == 2 { parse_key(&row[1])? } else { 0 };
            m.insert((it, agent), row);
        }
        keyed.push(m);
    }
    let iterations = keyed
        .iter()
        .map(|m| m.keys().map(|k| k.0).collect::<std::collections::BTreeSet<_>>().len())
        .min()
        .unwrap_or(0) as u64;

    let mut out_header: Vec<String> = header[..key_cols].to_vec();
    out_header.push("runs".into());
    for c in &header[key_cols..] {
        for s in ["mean", "std", "sem"] {
            out_header.push(format!("{c}_{s}"));
        }
    }

    let mut rows = Vec::new();
    for (key, _) in keyed[0].iter().filter(|(k, _)| k.0 < iterations) {
        let runs: Vec<&Vec<String>> = keyed.iter().filter_map(|m| m.get(key).copied()).collect();
        if runs.len() != keyed.len() {
            continue;
        }
        let mut row: Vec<String> = runs[0][..key_cols].to_vec();
        row.push(runs.len().to_string());
        for c in key_cols..header.len() {
            let mut vals = Vec::with_capacity(runs.len());
            for r in &runs {
                let cell = r[c].trim();
                if cell.is_empty() {
                    continue;
                }
                let v = match cell {
                    "true" => 1.0,
                    "false" => 0.0,
                    _ => cell.parse::<f64>().with_context(|| format!("column {}: bad number {cell:?}", header[c]))?,
                };
                vals.push(v);
            }
            match stats(&vals) {
                Some(s) => row.extend([s.mean.to_string(), s.std.to_string(), s.sem.to_string()]),
                None => row.extend([String::new(), String::new(), String::new()]),
            }
        }
        rows.push(row);
    }
    Ok(Table { header: out_header, rows })
}

pub fn write_table<W: Write>(w: W, t: &Table) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&t.header)?;
    for r in &t.rows {
        csv.write_record(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn aggregate_paths(paths: &[PathBuf]) -> Result<Table> {
    let tables = paths
        .iter()
        .map(|p| {
            let m = metrics_path(p);
            let f = std::fs::File::open(&m).with_context(|| format!("opening {}", m.display()))?;
            read_table(f).with_context(|| format!("reading {}", m.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate(&tables)
}
