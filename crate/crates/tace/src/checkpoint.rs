//! Network checkpoints: a JSON shape header followed by raw parameters.
//!
//! ```text
//! [u64 LE: header length N][N bytes UTF-8 JSON header][f64 LE parameters ...]
//! ```
//!
//! Parameters are written network by network in header order; inside a
//! network, layer by layer, the weights (input-major) before the biases.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use tace_core::nn::{Activation, Dense, Mlp};

pub const FORMAT: &str = "tace-checkpoint";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerShape {
    #[serde(rename = "in")]
    pub in_dim: usize,
    #[serde(rename = "out")]
    pub out_dim: usize,
    pub activation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkShape {
    pub name: String,
    pub layers: Vec<LayerShape>,
}

impl NetworkShape {
    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.in_dim * l.out_dim + l.out_dim).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub networks: Vec<NetworkShape>,
    /// Total number of f64 values after the header.
    pub count: usize,
}

fn activation_name(a: Activation) -> &'static str {
    match a {
        Activation::Tanh => "tanh",
        Activation::Identity => "identity",
    }
}

fn parse_activation(s: &str) -> Result<Activation> {
    match s {
        "tanh" => Ok(Activation::Tanh),
        "identity" => Ok(Activation::Identity),
        other => bail!("unknown activation {other:?}"),
    }
}

fn shape_of(name: &str, net: &Mlp) -> NetworkShape {
    NetworkShape {
        name: name.to_string(),
        layers: net
            .layers()
            .iter()
            .map(|l| LayerShape { in_dim: l.in_dim, out_dim: l.out_dim, activation: activation_name(l.activation).into() })
            .collect(),
    }
}

pub fn write_checkpoint<W: Write>(mut w: W, nets: &[(&str, &Mlp)]) -> Result<()> {
    let networks: Vec<NetworkShape> = nets.iter().map(|(n, m)| shape_of(n, m)).collect();
    let count = networks.iter().map(NetworkShape::param_count).sum();
    let header = Header { format: FORMAT.into(), version: VERSION, networks, count };
    let json = serde_json::to_vec(&header)?;
    w.write_all(&(json.len() as u64).to_le_bytes())?;
    w.write_all(&json)?;
    for (_, net) in nets {
        for v in net.flatten() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Vec<(String, Mlp)>> {
    let mut len = [0u8; 8];
    r.read_exact(&mut len).context("reading header length")?;
    let len = u64::from_le_bytes(len);
    ensure!(len <= 1 << 24, "implausible header length {len}");
    let mut json = vec![0u8; len as usize];
    r.read_exact(&mut json).context("reading header")?;
    let header: Header = serde_json::from_slice(&json).context("parsing header")?;
    ensure!(header.format == FORMAT, "not a checkpoint (format {:?})", header.format);
    ensure!(header.version == VERSION, "unsupported checkpoint version {}", header.version);
    let expected: usize = header.networks.iter().map(NetworkShape::param_count).sum();
    ensure!(expected == header.count, "header count {} disagrees with shapes ({expected})", header.count);

    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    ensure!(body.len() == 8 * header.count, "expected {} parameter bytes, found {}", 8 * header.count, body.len());
    let mut values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));

    let mut out = Vec::with_capacity(header.networks.len());
    for shape in &header.networks {
        let layers = shape
            .layers
            .iter()
            .map(|l| Ok(Dense::zeros(l.in_dim, l.out_dim, parse_activation(&l.activation)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut net = Mlp::new(layers).with_context(|| format!("network {:?}", shape.name))?;
        let flat: Vec<f64> = values.by_ref().take(shape.param_count()).collect();
        net.set_flat(&flat)?;
        out.push((shape.name.clone(), net));
    }
    Ok(out)
}

pub fn save(path: &Path, nets: &[(&str, &Mlp)]) -> Result<()> {
    let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_checkpoint(std::io::BufWriter::new(f), nets)
}

pub fn load(path: &Path) -> Result<Vec<(String, Mlp)>> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_checkpoint(std::io::BufReader::new(f))
}
