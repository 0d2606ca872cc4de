//! Visitation heatmaps as headerless CSV matrices.
//!
//! A `W × H` grid is written as `H` lines of `W` comma-separated integer
//! counts. The first line is the top row (`y = H − 1`), matching the maze
//! text layout, so a 3 × 2 grid with the start cell visited twice and its
//! east neighbour once reads
//!
//! ```text
//! 0,0,0
//! 2,1,0
//! ```

use std::io::{BufRead, Write};

use anyhow::{bail, ensure, Context, Result};

/// Row-major counts with index `y * width + x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heatmap {
    pub width: u32,
    pub height: u32,
    pub counts: Vec<u64>,
}

impl Heatmap {
    pub fn zeros(width: u32, height: u32) -> Self {
        Self { width, height, counts: vec![0; width as usize * height as usize] }
    }

    pub fn from_counts(width: u32, height: u32, counts: Vec<u64>) -> Result<Self> {
        ensure!(counts.len() == width as usize * height as usize, "count vector does not match {width}x{height}");
        Ok(Self { width, height, counts })
    }

    pub fn get(&self, x: u32, y: u32) -> u64 {
        self.counts[y as usize * self.width as usize + x as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn add(&mut self, other: &Heatmap) -> Result<()> {
        ensure!(
            (self.width, self.height) == (other.width, other.height),
            "heatmap shapes differ: {}x{} vs {}x{}",
            self.width,
            self.height,
            other.width,
            other.height
        );
        self.counts.iter_mut().zip(&other.counts).for_each(|(a, b)| *a += b);
        Ok(())
    }

    pub fn add_counts(&mut self, counts: &[u64]) {
        self.counts.iter_mut().zip(counts).for_each(|(a, b)| *a += b);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let width = self.width as usize;
        for y in (0..self.height as usize).rev() {
            let row = &self.counts[y * width..(y + 1) * width];
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<u64>().with_context(|| format!("heatmap line {}", n + 1)))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let Some(first) = rows.first() else { bail!("empty heatmap") };
        let width = first.len();
        ensure!(rows.iter().all(|r| r.len() == width), "heatmap rows have unequal length");
        let height = rows.len();
        let mut counts = vec![0; width * height];
        for (i, row) in rows.iter().enumerate() {
            let y = height - 1 - i;
            counts[y * width..(y + 1) * width].copy_from_slice(row);
        }
        Ok(Self { width: width as u32, height: height as u32, counts })
    }

    /// Text rendering with a log-scaled shade ramp; top row first.
    pub fn render_ascii(&self) -> String {
        const RAMP: &[u8] = b" .:-=+*#%@";
        let max = self.counts.iter().copied().max().unwrap_or(0);
        let scale = ((max as f64) + 1.0).ln();
        let mut s = String::new();
        for y in (0..self.height).rev() {
            for x in 0..self.width {
                let c = self.get(x, y);
                let idx = if c == 0 || scale == 0.0 {
                    0
                } else {
                    (1 + (((c as f64 + 1.0).ln() / scale) * (RAMP.len() - 2) as f64).round() as usize).min(RAMP.len() - 1)
                };
                s.push(RAMP[idx] as char);
            }
            s.push('\n');
        }
        s
    }
}
