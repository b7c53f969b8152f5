//! Dense arithmetic, exact rationals, log-space scalars and the Vandermonde
//! inverse bound.

mod logscalar;
mod matrix;
pub mod rational;

pub use logscalar::LogScalar;
pub use matrix::{exact_inf_norm_inverse, null_space_basis, vandermonde, Matrix};
pub use rational::Rational;

use crate::error::{Error, Result};

/// Nodes closer than this are treated as coincident.
pub const DUPLICATE_NODE_TOL: f64 = 1e-14;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * a.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

/// `y += a * x`
pub fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scaled(x: &[f64], a: f64) -> Vec<f64> {
    x.iter().map(|v| a * v).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `(Σ|vᵢ|^e)^{1/e}` for an even exponent `e`, evaluated as
/// `M·(Σ(|vᵢ|/M)^e)^{1/e}` with `M = max|vᵢ|` so that no term overflows.
pub fn stable_power_sum(values: &[f64], exponent: u32) -> f64 {
    debug_assert!(exponent >= 2 && exponent % 2 == 0, "exponent must be even");
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let e = exponent as i32;
    let sum: f64 = values.iter().map(|v| (v / scale).powi(e)).sum();
    scale * sum.powf(1.0 / exponent as f64)
}

/// Upper bound on the max-row-sum norm of the inverse of the column-per-node
/// Vandermonde matrix: `max_i ∏_{j≠i} (1+|x_j|)/|x_j−x_i|`.
pub fn vandermonde_inverse_norm_bound(nodes: &[f64]) -> Result<f64> {
    for (i, a) in nodes.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate().skip(i + 1) {
            if (a - b).abs() < DUPLICATE_NODE_TOL {
                return Err(Error::DuplicateNodes { first: i, second: j });
            }
        }
    }
    Ok(nodes
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, xj)| (1.0 + xj.abs()) / (xj - xi).abs())
                .product::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max))
}
