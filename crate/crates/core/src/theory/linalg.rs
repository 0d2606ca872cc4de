use alloc::vec::Vec;

use crate::{Error, Result};

/// Solves `A x = b` for row-major `n × n` `A` by LU with partial pivoting.
pub fn lu_solve(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: a.len() });
    }
    let mut lu = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
            .unwrap_or(k);
        if lu[p * n + k].abs() <= 1e-300 * scale {
            return Err(Error::Singular);
        }
        if p != k {
            for c in 0..n {
                lu.swap(k * n + c, p * n + c);
            }
            perm.swap(k, p);
        }
        let pivot = lu[k * n + k];
        for i in (k + 1)..n {
            let f = lu[i * n + k] / pivot;
            lu[i * n + k] = f;
            for c in (k + 1)..n {
                lu[i * n + c] -= f * lu[k * n + c];
            }
        }
    }
    let mut y: Vec<f64> = perm.iter().map(|&i| b[i]).collect();
    for i in 0..n {
        for c in 0..i {
            y[i] -= lu[i * n + c] * y[c];
        }
    }
    for i in (0..n).rev() {
        for c in (i + 1)..n {
            y[i] -= lu[i * n + c] * y[c];
        }
        y[i] /= lu[i * n + i];
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(y)
}

/// `max_i |(A x − b)_i|`.
pub fn residual_norm(a: &[f64], x: &[f64], b: &[f64]) -> f64 {
    let n = b.len();
    (0..n)
        .map(|i| ((0..n).map(|j| a[i * n + j] * x[j]).sum::<f64>() - b[i]).abs())
        .fold(0.0, f64::max)
}
