use alloc::vec;
use alloc::vec::Vec;

use crate::rng::{standard_normal, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Identity,
}

/// Fully connected layer. `weight` is stored input-major: entry
/// `weight[i * out_dim + o]` connects input `i` to output `o`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub in_dim: usize,
    pub out_dim: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Dense {
    pub fn zeros(in_dim: usize, out_dim: usize, activation: Activation) -> Self {
        Self {
            in_dim,
            out_dim,
            weight: vec![0.0; in_dim * out_dim],
            bias: vec![0.0; out_dim],
            activation,
        }
    }

    /// Orthogonal initialization scaled by `gain`, zero bias.
    pub fn orthogonal(in_dim: usize, out_dim: usize, activation: Activation, gain: f64, rng: &mut Rng) -> Self {
        let mut layer = Self::zeros(in_dim, out_dim, activation);
        // Orthonormalize the shorter side of a Gaussian matrix.
        let (rows, cols) = if in_dim >= out_dim { (out_dim, in_dim) } else { (in_dim, out_dim) };
        let mut m: Vec<f64> = (0..rows * cols).map(|_| standard_normal(rng)).collect();
        for r in 0..rows {
            for p in 0..r {
                let dot: f64 = (0..cols).map(|c| m[r * cols + c] * m[p * cols + c]).sum();
                for c in 0..cols {
                    m[r * cols + c] -= dot * m[p * cols + c];
                }
            }
            let norm = libm::sqrt((0..cols).map(|c| m[r * cols + c] * m[r * cols + c]).sum::<f64>());
            let norm = if norm > 0.0 { norm } else { 1.0 };
            for c in 0..cols {
                m[r * cols + c] /= norm;
            }
        }
        for i in 0..in_dim {
            for o in 0..out_dim {
                let v = if in_dim >= out_dim { m[o * cols + i] } else { m[i * cols + o] };
                layer.weight[i * out_dim + o] = gain * v;
            }
        }
        layer
    }

    pub fn param_count(&self) -> usize {
        self.weight.len() + self.bias.len()
    }
}

/// Feed-forward network of dense layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<Dense>,
}

/// Post-activation values of every layer for one input (index 0 is the input).
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub activations: Vec<Vec<f64>>,
}

impl ForwardTrace {
    pub fn output(&self) -> &[f64] {
        self.activations.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Row-major post-activations for a batch of inputs.
#[derive(Debug, Clone)]
pub struct BatchTrace {
    pub rows: usize,
    pub activations: Vec<Vec<f64>>,
}

impl BatchTrace {
    pub fn output(&self) -> &[f64] {
        self.activations.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Gradients with the same layout as the network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl MlpGrads {
    pub fn zeros_like(net: &Mlp) -> Self {
        Self {
            weights: net.layers.iter().map(|l| vec![0.0; l.weight.len()]).collect(),
            biases: net.layers.iter().map(|l| vec![0.0; l.bias.len()]).collect(),
        }
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.biases).all(|v| v.iter().all(|x| x.is_finite()))
    }
}

impl Mlp {
    pub fn new(layers: Vec<Dense>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("network needs at least one layer"));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim != pair[1].in_dim {
                return Err(Error::DimensionMismatch { expected: pair[0].out_dim, got: pair[1].in_dim });
            }
        }
        for l in &layers {
            if l.weight.len() != l.in_dim * l.out_dim || l.bias.len() != l.out_dim {
                return Err(Error::invalid("layer parameter shapes do not match dimensions"));
            }
        }
        Ok(Self { layers })
    }

    /// `input → hidden… → output` with tanh hidden layers and a linear head.
    pub fn tanh_mlp(input: usize, hidden: &[usize], output: usize, hidden_gain: f64, output_gain: f64, rng: &mut Rng) -> Self {
        let mut layers = Vec::new();
        let mut prev = input;
        for &h in hidden {
            layers.push(Dense::orthogonal(prev, h, Activation::Tanh, hidden_gain, rng));
            prev = h;
        }
        layers.push(Dense::orthogonal(prev, output, Activation::Identity, output_gain, rng));
        Self { layers }
    }

    pub fn layers(&self) -> &[Dense] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Dense] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Dense::param_count).sum()
    }

    /// Parameters in layer order, weights before biases.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weight);
            out.extend_from_slice(&l.bias);
        }
        out
    }

    pub fn set_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(Error::DimensionMismatch { expected: self.param_count(), got: flat.len() });
        }
        let mut off = 0;
        for l in &mut self.layers {
            let nw = l.weight.len();
            l.weight.copy_from_slice(&flat[off..off + nw]);
            off += nw;
            let nb = l.bias.len();
            l.bias.copy_from_slice(&flat[off..off + nb]);
            off += nb;
        }
        Ok(())
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), got: input.len() });
        }
        if input.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("network input".into()));
        }
        Ok(())
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_trace(input)?.activations.pop().unwrap_or_default())
    }

    pub fn forward_trace(&self, input: &[f64]) -> Result<ForwardTrace> {
        self.check_input(input)?;
        let batch = self.forward_batch_unchecked(input, 1);
        Ok(ForwardTrace { activations: batch.activations })
    }

    /// Gradients of `output · upstream` with respect to every parameter.
    pub fn backward(&self, trace: &ForwardTrace, upstream: &[f64]) -> Result<MlpGrads> {
        let batch = BatchTrace { rows: 1, activations: trace.activations.clone() };
        self.backward_batch(&batch, upstream)
    }

    /// Forward pass over `rows` inputs stored row-major in `inputs`.
    pub fn forward_batch(&self, inputs: &[f64], rows: usize) -> Result<BatchTrace> {
        if inputs.len() != rows * self.input_dim() {
            return Err(Error::DimensionMismatch { expected: rows * self.input_dim(), got: inputs.len() });
        }
        if inputs.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("network input".into()));
        }
        Ok(self.forward_batch_unchecked(inputs, rows))
    }

    fn forward_batch_unchecked(&self, inputs: &[f64], rows: usize) -> BatchTrace {
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(inputs.to_vec());
        for layer in &self.layers {
            let x = activations.last().unwrap();
            let (nin, nout) = (layer.in_dim, layer.out_dim);
            let mut z = vec![0.0; rows * nout];
            for r in 0..rows {
                let zr = &mut z[r * nout..(r + 1) * nout];
                zr.copy_from_slice(&layer.bias);
                let xr = &x[r * nin..(r + 1) * nin];
                for (i, &xi) in xr.iter().enumerate() {
                    let wi = &layer.weight[i * nout..(i + 1) * nout];
                    for (zo, &w) in zr.iter_mut().zip(wi) {
                        *zo += w * xi;
                    }
                }
            }
            if layer.activation == Activation::Tanh {
                for v in z.iter_mut() {
                    *v = libm::tanh(*v);
                }
            }
            activations.push(z);
        }
        BatchTrace { rows, activations }
    }

    /// Sum over rows of the gradients of `output_r · upstream_r`.
    pub fn backward_batch(&self, trace: &BatchTrace, upstream: &[f64]) -> Result<MlpGrads> {
        let rows = trace.rows;
        if upstream.len() != rows * self.output_dim() {
            return Err(Error::DimensionMismatch { expected: rows * self.output_dim(), got: upstream.len() });
        }
        if trace.activations.len() != self.layers.len() + 1 {
            return Err(Error::invalid("trace does not match network depth"));
        }
        let mut grads = MlpGrads::zeros_like(self);
        let mut delta = upstream.to_vec();
        for (li, layer) in self.layers.iter().enumerate().rev() {
            let (nin, nout) = (layer.in_dim, layer.out_dim);
            if layer.activation == Activation::Tanh {
                let a = &trace.activations[li + 1];
                for (d, &ai) in delta.iter_mut().zip(a) {
                    *d *= 1.0 - ai * ai;
                }
            }
            let x = &trace.activations[li];
            let gw = &mut grads.weights[li];
            let gb = &mut grads.biases[li];
            for r in 0..rows {
                let dr = &delta[r * nout..(r + 1) * nout];
                for (b, &d) in gb.iter_mut().zip(dr) {
                    *b += d;
                }
                let xr = &x[r * nin..(r + 1) * nin];
                for (i, &xi) in xr.iter().enumerate() {
                    if xi == 0.0 {
                        continue;
                    }
                    let gwi = &mut gw[i * nout..(i + 1) * nout];
                    for (g, &d) in gwi.iter_mut().zip(dr) {
                        *g += xi * d;
                    }
                }
            }
            if li > 0 {
                // Output-major copy so the propagation below is an axpy per row.
                let mut wt = vec![0.0; nin * nout];
                for i in 0..nin {
                    for o in 0..nout {
                        wt[o * nin + i] = layer.weight[i * nout + o];
                    }
                }
                let mut prev = vec![0.0; rows * nin];
                for r in 0..rows {
                    let pr = &mut prev[r * nin..(r + 1) * nin];
                    let dr = &delta[r * nout..(r + 1) * nout];
                    for (o, &d) in dr.iter().enumerate() {
                        if d == 0.0 {
                            continue;
                        }
                        let wo = &wt[o * nin..(o + 1) * nin];
                        for (p, &w) in pr.iter_mut().zip(wo) {
                            *p += w * d;
                        }
                    }
                }
                delta = prev;
            }
        }
        Ok(grads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn zero_weights_output_bias() {
        let mut l1 = Dense::zeros(3, 4, Activation::Tanh);
        l1.bias = vec![0.1, 0.2, 0.3, 0.4];
        let mut l2 = Dense::zeros(4, 2, Activation::Identity);
        l2.bias = vec![-1.0, 2.5];
        let net = Mlp::new(vec![l1, l2]).unwrap();
        assert_eq!(net.forward(&[1.0, -2.0, 3.0]).unwrap(), vec![-1.0, 2.5]);
    }

    #[test]
    fn identity_linear_layer() {
        let mut l = Dense::zeros(2, 2, Activation::Identity);
        l.weight = vec![1.0, 0.0, 0.0, 1.0];
        let net = Mlp::new(vec![l]).unwrap();
        assert_eq!(net.forward(&[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn bad_inputs_rejected() {
        let mut rng = stream(0, &[]);
        let net = Mlp::tanh_mlp(2, &[4], 3, 1.0, 1.0, &mut rng);
        assert!(matches!(net.forward(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(net.forward(&[f64::NAN, 0.0]), Err(Error::NonFinite(_))));
        let tr = net.forward_trace(&[0.1, 0.2]).unwrap();
        assert!(net.backward(&tr, &[1.0]).is_err());
        let bad = Mlp::new(vec![Dense::zeros(2, 3, Activation::Tanh), Dense::zeros(4, 1, Activation::Identity)]);
        assert!(bad.is_err());
    }

    #[test]
    fn zero_upstream_zero_grads() {
        let mut rng = stream(3, &[]);
        let net = Mlp::tanh_mlp(2, &[8, 8], 4, 1.4, 0.5, &mut rng);
        let tr = net.forward_trace(&[0.3, -0.7]).unwrap();
        let g = net.backward(&tr, &[0.0; 4]).unwrap();
        assert!(g.flatten().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn linear_layer_grad_is_outer_product() {
        let mut rng = stream(5, &[]);
        let net = Mlp::new(vec![Dense::orthogonal(3, 2, Activation::Identity, 1.0, &mut rng)]).unwrap();
        let x = [0.5, -1.0, 2.0];
        let g = [0.25, -3.0];
        let tr = net.forward_trace(&x).unwrap();
        let grads = net.backward(&tr, &g).unwrap();
        for i in 0..3 {
            for o in 0..2 {
                assert_eq!(grads.weights[0][i * 2 + o], x[i] * g[o]);
            }
        }
        assert_eq!(grads.biases[0], g.to_vec());
    }

    #[test]
    fn orthogonal_rows_are_orthonormal() {
        let mut rng = stream(9, &[]);
        let l = Dense::orthogonal(6, 4, Activation::Tanh, 1.0, &mut rng);
        // columns (per output) are orthonormal vectors of length 6
        for a in 0..4 {
            for b in 0..4 {
                let dot: f64 = (0..6).map(|i| l.weight[i * 4 + a] * l.weight[i * 4 + b]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn batch_matches_single() {
        let mut rng = stream(11, &[]);
        let net = Mlp::tanh_mlp(2, &[5, 5], 3, 1.4, 1.0, &mut rng);
        let xs = [0.1, 0.2, -0.3, 0.4, 0.9, -0.9];
        let bt = net.forward_batch(&xs, 3).unwrap();
        for r in 0..3 {
            let y = net.forward(&xs[r * 2..r * 2 + 2]).unwrap();
            for o in 0..3 {
                assert!((bt.output()[r * 3 + o] - y[o]).abs() < 1e-15);
            }
        }
        let up = [1.0, 0.0, -1.0, 0.5, 0.5, 0.5, 2.0, -2.0, 0.0];
        let gb = net.backward_batch(&bt, &up).unwrap().flatten();
        let mut sum = alloc::vec![0.0; gb.len()];
        for r in 0..3 {
            let tr = net.forward_trace(&xs[r * 2..r * 2 + 2]).unwrap();
            let g = net.backward(&tr, &up[r * 3..r * 3 + 3]).unwrap().flatten();
            for (s, v) in sum.iter_mut().zip(g) {
                *s += v;
            }
        }
        for (a, b) in gb.iter().zip(&sum) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
