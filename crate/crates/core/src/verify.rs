//! Stand-alone checkers for the supporting lemmas and the exact certificate for
//! the explicit `n + 2` functional construction.

use std::ops::Neg;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{
    axpy, dot, exact_inf_norm_inverse, norm2, null_space_basis, rational, stable_power_sum, vandermonde,
    vandermonde_inverse_norm_bound, Matrix, Rational,
};
use crate::optimize::{
    falsify_inequality, maximize_min_on_sphere, minimize_convex_lowdim, random_unit, stream_rng, BoxDomain, SearchConfig,
    Status,
};
use crate::params::{Witness, WitnessMap};
use crate::space::{
    dual_norm_search, norm_gradient, restricted_dual_norm_with, FunctionalFamily,
    Hyperplane,
};

/// `1/(√n·(n−1)·m)`.
pub fn maxmin_floor(n: usize, m: usize) -> f64 {
    1.0 / ((n as f64).sqrt() * (n.max(2) - 1) as f64 * m as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxMinResult {
    /// Unit vector (in the space norm) attaining `value`.
    pub point: Vec<f64>,
    /// `minᵢ |fᵢ(x)| / ||fᵢ||⋆` with numerically searched dual norms.
    pub value: f64,
    /// `minᵢ |fᵢ(x)| / uᵢ` with certified upper bounds `uᵢ ≥ ||fᵢ||⋆`, a lower
    /// bound on `value`.
    pub certified_value: f64,
    pub dual_norms: Vec<f64>,
    pub dual_upper: Vec<f64>,
    pub status: Status,
    pub evaluations: usize,
}

/// Maximizes `minᵢ |fᵢ(x)| / ||fᵢ||⋆` over the unit sphere, or over the unit
/// sphere of `ker f` when a hyperplane is given.
pub fn maxmin_search(space: &FunctionalFamily, constraint: Option<&Hyperplane>, config: &SearchConfig) -> Result<MaxMinResult> {
    let n = space.n();
    let inner = config.fixed(4);
    let (dual_norms, dual_upper): (Vec<f64>, Vec<f64>) = (0..space.m())
        .map(|i| {
            let fi = space.functional(i);
            let r = dual_norm_search(space, fi, &inner.derive(i as u64), &[])?;
            // ||fᵢ||⋆ ≤ 1 from the representation fᵢ = 1·fᵢ
            Ok((r.value, dual_norm_upper(space, fi, &r.point)?.min(1.0)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let lift: Vec<Vec<f64>> = match constraint {
        Some(h) => {
            if h.functional().len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: h.functional().len() });
            }
            if n < 2 {
                return Err(Error::InvalidArgument("kernel of a functional on a line is trivial".into()));
            }
            null_space_basis(h.functional())?
        }
        None => (0..n).map(|i| (0..n).map(|j| f64::from(i == j)).collect()).collect(),
    };
    let to_x = |c: &[f64]| {
        let mut x = vec![0.0; n];
        for (ci, b) in c.iter().zip(&lift) {
            axpy(&mut x, *ci, b);
        }
        x
    };
    let pieces = |c: &[f64]| {
        let x = to_x(c);
        let nx = stable_power_sum(&space.values(&x), space.exponent());
        let gx = norm_gradient(space, &x).unwrap_or_else(|_| vec![0.0; n]);
        space
            .values(&x)
            .iter()
            .zip(&dual_norms)
            .enumerate()
            .map(|(i, (fx, d))| {
                let value = if nx > 0.0 { fx.abs() / (d * nx) } else { 0.0 };
                let mut grad = space.functional(i).iter().map(|v| fx.signum() * v / (d * nx)).collect::<Vec<f64>>();
                axpy(&mut grad, -value / nx, &gx);
                let grad_c = lift.iter().map(|b| dot(b, &grad)).collect();
                (value, grad_c)
            })
            .collect::<Vec<_>>()
    };
    let r = maximize_min_on_sphere(pieces, lift.len(), config, &[])?;
    let x = to_x(&r.point);
    let nx = stable_power_sum(&space.values(&x), space.exponent());
    let point: Vec<f64> = x.iter().map(|v| v / nx).collect();
    let values = space.values(&point);
    let certified_value = values.iter().zip(&dual_upper).fold(f64::INFINITY, |m, (v, u)| m.min(v.abs() / u));
    let value = values.iter().zip(&dual_norms).fold(f64::INFINITY, |m, (v, d)| m.min(v.abs() / d));
    Ok(MaxMinResult { point, value, certified_value, dual_norms, dual_upper, status: r.status, evaluations: r.evaluations })
}

/// `||g||⋆ ≤ ||c||_q` for any `c` with `g = Σ cⱼfⱼ` and `1/q + 1/2p = 1`.
///
/// `c` starts as `g(x)` times the coefficients of the norming functional at
/// `x`, then absorbs the residual by a minimum-norm correction.
fn dual_norm_upper(space: &FunctionalFamily, g: &[f64], x: &[f64]) -> Result<f64> {
    let e = space.exponent();
    let values = space.values(x);
    let nx = stable_power_sum(&values, e);
    if nx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let gx = dot(g, x);
    let mut c: Vec<f64> = values.iter().map(|v| gx / nx * v.signum() * (v.abs() / nx).powi(e as i32 - 1)).collect();
    let fitted = space.functionals().tr_mul_vec(&c);
    let residual: Vec<f64> = g.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let delta = space.functionals().transpose().least_squares(&residual)?;
    axpy(&mut c, 1.0, &delta);
    let q = f64::from(e) / f64::from(e - 1);
    Ok(lq_norm(&c, q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapMeasureSample {
    pub t: f64,
    pub n: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

pub const MIN_CAP_SAMPLES: usize = 10_000;
const CAP_CHUNK: usize = 1 << 16;

/// Monte Carlo estimate of the normalized measure of `{x ∈ S^{n−1} : |x₁| ≤ t}`.
pub fn cap_measure_mc(n: usize, t: f64, samples: usize, seed: u64) -> Result<CapMeasureSample> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sphere dimension n = {n} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} must lie in [0, 1]")));
    }
    if samples < MIN_CAP_SAMPLES {
        return Err(Error::InvalidArgument(format!("{samples} samples, at least {MIN_CAP_SAMPLES} needed")));
    }
    let chunks = samples.div_ceil(CAP_CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let len = CAP_CHUNK.min(samples - c * CAP_CHUNK);
            let mut x = vec![0.0; n];
            (0..len)
                .filter(|_| {
                    x.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
                    x[0].abs() <= t * norm2(&x)
                })
                .count()
        })
        .sum();
    let total = samples as f64;
    let estimate = hits as f64 / total;
    let std_error = (estimate * (1.0 - estimate) / total).sqrt().max(1.0 / total);
    Ok(CapMeasureSample { t, n, estimate, std_error, samples })
}

/// Norms probed by [`modulus_falsify`].
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// `ℓ_q` on `ℝ^d`.
    Lq { q: f64, d: usize },
    /// The dual norm of a family, on `ℝⁿ`.
    DualOf(FunctionalFamily),
    /// `ℓ_q^d / span(basis)`.
    Quotient { q: f64, d: usize, basis: Vec<Vec<f64>> },
}

impl NormSpec {
    /// Exponent `q` whose bound `(q−1)t²/8` applies.
    pub fn exponent(&self) -> f64 {
        match self {
            NormSpec::Lq { q, .. } | NormSpec::Quotient { q, .. } => *q,
            NormSpec::DualOf(space) => {
                let e = f64::from(space.exponent());
                e / (e - 1.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusProbe {
    pub t: f64,
    /// Smallest `1 − ||(x+y)/2||` found over `||x|| = ||y|| = 1`, `||x − y|| ≥ t`.
    pub delta_upper: f64,
    /// `(q−1)t²/8`.
    pub bound: f64,
    pub violated: bool,
    /// Witness of the parent `ℓ_q^d` at the same `t` (quotient mode only).
    pub parent_delta: Option<f64>,
}

/// A witness is a violation only below `bound − MODULUS_SLACK`.
pub const MODULUS_SLACK: f64 = 1e-6;
const ARC_ITERS: usize = 100;

pub fn lq_norm(x: &[f64], q: f64) -> f64 {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v.abs() / scale).powf(q)).sum::<f64>().powf(1.0 / q)
}

/// Orthonormal basis of the Euclidean complement of `span(basis)` in `ℝ^d`.
/// Orthonormal bases of `span(basis)` and of its orthogonal complement in `ℝᵈ`.
fn complement(basis: &[Vec<f64>], d: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut push = |v: &[f64]| {
        let mut u = v.to_vec();
        for _ in 0..2 {
            for o in ortho.iter() {
                let c = dot(o, &u);
                axpy(&mut u, -c, o);
            }
        }
        let r = norm2(&u);
        if r > 1e-8 * norm2(v).max(1.0) {
            ortho.push(u.iter().map(|x| x / r).collect());
            true
        } else {
            false
        }
    };
    for b in basis {
        if b.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: b.len() });
        }
        if !push(b) {
            return Err(Error::DependentBasis);
        }
    }
    for i in 0..d {
        let e: Vec<f64> = (0..d).map(|j| f64::from(i == j)).collect();
        push(&e);
    }
    let comp = ortho.split_off(basis.len());
    Ok((ortho, comp))
}

const QUOTIENT_NEWTON_ITERS: usize = 200;

/// `min_c ||x − Σ c_j u_j||_q` for orthonormal `u_j`, by damped Newton on
/// `Σ|y_i|^q` with analytic derivatives.
///
/// Each iteration tries the Newton weights `q(q−1)|y_i|^{q−2}`, the
/// reweighted least-squares weights `q|y_i|^{q−2}`, and a mix using the latter
/// only on coordinates near zero, and keeps the best Armijo step. Pure Newton
/// oscillates across a coordinate whose minimizing value is zero.
pub fn lq_quotient_distance(x: &[f64], ortho: &[Vec<f64>], q: f64) -> Result<f64> {
    let k = ortho.len();
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if k == 0 || scale == 0.0 {
        return Ok(lq_norm(x, q));
    }
    let residual = |c: &[f64]| {
        let mut y = x.to_vec();
        for (cj, u) in c.iter().zip(ortho) {
            axpy(&mut y, -cj, u);
        }
        y
    };
    let phi = |y: &[f64]| y.iter().map(|v| (v.abs() / scale).powf(q)).sum::<f64>();
    let mut c: Vec<f64> = ortho.iter().map(|u| dot(u, x)).collect();
    let mut y = residual(&c);
    let mut fy = phi(&y);
    for _ in 0..QUOTIENT_NEWTON_ITERS {
        let a: Vec<f64> = y.iter().map(|v| (v.abs() / scale).max(1e-14)).collect();
        let mut grad = vec![0.0; k];
        for (i, yi) in y.iter().enumerate() {
            let g = q * (yi.abs() / scale).powf(q - 1.0) * yi.signum();
            for j in 0..k {
                grad[j] -= g * ortho[j][i];
            }
        }
        let mut best: Option<(Vec<f64>, Vec<f64>, f64)> = None;
        for mode in 0..3 {
            let mut hess = vec![0.0; k * k];
            for (i, ai) in a.iter().enumerate() {
                let irls = mode == 1 || (mode == 2 && *ai < 1e-3);
                let w = q * if irls { 1.0 } else { q - 1.0 } * ai.powf(q - 2.0);
                for j in 0..k {
                    for l in 0..k {
                        hess[j * k + l] += w * ortho[j][i] * ortho[l][i];
                    }
                }
            }
            let Ok(inv) = Matrix::new(k, k, hess).and_then(|h| h.inverse()) else { continue };
            let step: Vec<f64> = inv.mul_vec(&grad).iter().map(|v| -v * scale).collect();
            let slope = dot(&grad, &step) / scale;
            if !(slope < 0.0) {
                continue;
            }
            let mut t = 1.0;
            for _ in 0..60 {
                let trial: Vec<f64> = c.iter().zip(&step).map(|(ci, si)| ci + t * si).collect();
                let ty = residual(&trial);
                let ft = phi(&ty);
                if ft <= fy + 1e-4 * t * slope {
                    if best.as_ref().is_none_or(|b| ft < b.2) {
                        best = Some((trial, ty, ft));
                    }
                    break;
                }
                t *= 0.5;
            }
        }
        let Some((nc, ny, nf)) = best else { break };
        let gain = fy - nf;
        (c, y, fy) = (nc, ny, nf);
        if gain <= 1e-15 * fy {
            break;
        }
    }
    Ok((scale * fy.powf(1.0 / q)).min(lq_norm(x, q)))
}

/// `1 − ||(x+y)/2||` for `x = p/||p||` and the point `y` on the arc from `x`
/// to `−x` through the direction `w` with `||x − y|| = t`.
fn arc_witness<N: Fn(&[f64]) -> f64>(norm: &N, p: &[f64], w: &[f64], t: f64) -> f64 {
    let np = norm(p);
    let nw = norm2(w);
    if np == 0.0 || nw == 0.0 {
        return 1.0;
    }
    let x: Vec<f64> = p.iter().map(|v| v / np).collect();
    let w: Vec<f64> = w.iter().map(|v| v / nw).collect();
    let xe = norm2(&x);
    if (dot(&x, &w) / xe).abs() > 1.0 - 1e-12 {
        return 1.0;
    }
    let y_at = |theta: f64| {
        let mut y: Vec<f64> = x.iter().map(|v| v * theta.cos()).collect();
        axpy(&mut y, theta.sin(), &w);
        let ny = norm(&y);
        y.iter().map(|v| v / ny).collect::<Vec<f64>>()
    };
    let dist = |y: &[f64]| norm(&x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<f64>>());
    // Illinois iteration on the monotone gap ||x − y(θ)|| − t, keeping the
    // far end of the bracket so the returned pair has ||x − y|| ≥ t
    let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
    let (mut f_lo, mut f_hi) = (-t, dist(&y_at(hi)) - t);
    let mut side = 0;
    for _ in 0..ARC_ITERS {
        if hi - lo <= 1e-14 || f_hi - f_lo <= 0.0 {
            break;
        }
        let theta = ((lo * f_hi - hi * f_lo) / (f_hi - f_lo)).clamp(lo, hi);
        let f = dist(&y_at(theta)) - t;
        if f >= 0.0 {
            (hi, f_hi) = (theta, f);
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
            if f <= 1e-15 {
                break;
            }
        } else {
            (lo, f_lo) = (theta, f);
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        }
    }
    let y = y_at(hi);
    let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
    (1.0 - norm(&mid)).max(0.0)
}

fn search_modulus<N: Fn(&[f64]) -> f64 + Sync>(norm: N, dim: usize, t: f64, config: &SearchConfig) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    // offsets from (e₁, e₂) keep the box centre non-degenerate
    let residual = |z: &[f64]| {
        let mut p = z[..dim].to_vec();
        let mut w = z[dim..].to_vec();
        p[0] += 1.0;
        w[1] += 1.0;
        arc_witness(&norm, &p, &w, t)
    };
    let out = falsify_inequality(residual, &BoxDomain::cube(2 * dim, 1.0), config)?;
    Ok(out.min_residual)
}

/// Searches each `t` of `t_grid` for pairs driving `1 − ||(x+y)/2||` below `(q−1)t²/8`.
pub fn modulus_falsify(spec: &NormSpec, t_grid: &[f64], config: &SearchConfig) -> Result<Vec<ModulusProbe>> {
    let q = spec.exponent();
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::BadExponent(q));
    }
    if let Some(t) = t_grid.iter().find(|t| !(0.0..=2.0).contains(*t)) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, 2]")));
    }
    let inner = config.fixed(1);
    let probe = |t: f64, idx: usize| -> Result<ModulusProbe> {
        let cfg = config.derive(idx as u64);
        let (delta_upper, parent_delta) = match spec {
            NormSpec::Lq { d, .. } => {
                check_plane(*d)?;
                (search_modulus(|x: &[f64]| lq_norm(x, q), *d, t, &cfg)?, None)
            }
            NormSpec::DualOf(space) => {
                check_plane(space.n())?;
                let norm = |g: &[f64]| {
                    if g.iter().all(|v| *v == 0.0) {
                        return 0.0;
                    }
                    dual_norm_search(space, g, &inner, &[]).map_or(f64::NAN, |r| r.value)
                };
                (search_modulus(norm, space.n(), t, &cfg)?, None)
            }
            NormSpec::Quotient { d, basis, .. } => {
                let (ortho, comp) = complement(basis, *d)?;
                check_plane(comp.len())?;
                let norm = |z: &[f64]| {
                    let mut x = vec![0.0; *d];
                    for (zi, c) in z.iter().zip(&comp) {
                        axpy(&mut x, *zi, c);
                    }
                    lq_quotient_distance(&x, &ortho, q).unwrap_or(f64::NAN)
                };
                let quotient = search_modulus(norm, comp.len(), t, &cfg)?;
                let parent = search_modulus(|x: &[f64]| lq_norm(x, q), *d, t, &cfg)?;
                (quotient, Some(parent))
            }
        };
        if !delta_upper.is_finite() {
            return Err(Error::NonFinite(format!("modulus witness at t = {t}")));
        }
        let bound = (q - 1.0) * t * t / 8.0;
        Ok(ModulusProbe { t, delta_upper, bound, violated: delta_upper < bound - MODULUS_SLACK, parent_delta })
    };
    t_grid.iter().enumerate().map(|(i, t)| probe(*t, i)).collect()
}

fn check_plane(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("modulus needs dimension at least 2, got {dim}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovReport {
    pub degree: usize,
    pub k: usize,
    pub trials: usize,
    /// `∏_{j<k} (d−j)²`.
    pub bound: f64,
    /// Largest `|P^{(k)}(0)| / max_{[−1,1]}|P|` seen.
    pub max_ratio: f64,
    /// `|T_d^{(k)}(0)|`.
    pub chebyshev_ratio: f64,
    pub violations: usize,
}

const MARKOV_GRID: usize = 20_001;
pub const MARKOV_SLACK: f64 = 1e-6;

/// Monomial coefficients of the Chebyshev polynomial `T_d`.
pub fn chebyshev_coefficients(d: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 1.0];
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

fn grid_max(c: &[f64]) -> f64 {
    (0..MARKOV_GRID).map(|i| horner(c, -1.0 + 2.0 * i as f64 / (MARKOV_GRID - 1) as f64).abs()).fold(0.0, f64::max)
}

fn kth_derivative_at_zero(c: &[f64], k: usize) -> f64 {
    c.get(k).map_or(0.0, |ck| ck * (1..=k).map(|j| j as f64).product::<f64>())
}

/// Checks `|P^{(k)}(0)| ≤ ∏_{j<k}(d−j)²·max_{[−1,1]}|P|` on `T_d` and on random
/// polynomials of degree `d` (alternately Gaussian in the Chebyshev and the
/// monomial basis).
pub fn markov_chain_check(degree: usize, k: usize, trials: usize, config: &SearchConfig) -> Result<MarkovReport> {
    if k == 0 || k > degree {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= d, got k = {k}, d = {degree}")));
    }
    let bound: f64 = (0..k).map(|j| ((degree - j) as f64).powi(2)).product();
    let cheb = chebyshev_coefficients(degree);
    let chebyshev_ratio = kth_derivative_at_zero(&cheb, k).abs() / grid_max(&cheb);
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(config.seed, r as u64);
            let g: Vec<f64> = (0..=degree).map(|_| rng.sample(StandardNormal)).collect();
            let c = if r % 2 == 0 {
                let mut c = vec![0.0; degree + 1];
                for (j, gj) in g.iter().enumerate() {
                    axpy(&mut c[..=j], *gj, &chebyshev_coefficients(j));
                }
                c
            } else {
                g
            };
            let top = grid_max(&c);
            if top == 0.0 {
                0.0
            } else {
                kth_derivative_at_zero(&c, k).abs() / top
            }
        })
        .collect();
    let max_ratio = ratios.iter().copied().fold(chebyshev_ratio, f64::max);
    let violations = ratios.iter().chain([&chebyshev_ratio]).filter(|r| **r > bound + MARKOV_SLACK).count();
    Ok(MarkovReport { degree, k, trials, bound, max_ratio, chebyshev_ratio, violations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeReport {
    pub trials: usize,
    /// Largest `||V⁻¹||∞ / bound` seen.
    pub max_ratio: f64,
    pub violations: usize,
}

/// Compares `||V⁻¹||∞` with `max_i ∏_{j≠i} (1+|x_j|)/|x_j−x_i|` on random node
/// sets in `[−1, 1]` of sizes cycling through `2..=max_size`.
pub fn vandermonde_falsify(trials: usize, max_size: usize, seed: u64) -> Result<VandermondeReport> {
    if max_size < 2 {
        return Err(Error::InvalidArgument("node sets need at least 2 nodes".into()));
    }
    let ratios = (0..trials)
        .into_par_iter()
        .map(|r| {
            let size = 2 + r % (max_size - 1);
            let mut rng = stream_rng(seed, r as u64);
            let mut nodes: Vec<f64> = Vec::with_capacity(size);
            while nodes.len() < size {
                let x = rng.gen_range(-1.0..=1.0);
                if nodes.iter().all(|y: &f64| (x - y).abs() > 1e-3) {
                    nodes.push(x);
                }
            }
            let exact = exact_inf_norm_inverse(&vandermonde(&nodes))?;
            Ok(exact / vandermonde_inverse_norm_bound(&nodes)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    // two nodes attain the bound, so allow rounding
    let violations = ratios.iter().filter(|r| **r > 1.0 + 1e-9).count();
    Ok(VandermondeReport { trials, max_ratio, violations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionReport {
    pub trials: usize,
    /// Smallest `||g|ker h|| − min_r ||g − r·h||⋆` seen.
    pub min_slack: f64,
    pub violations: usize,
}

pub const RESTRICTION_SLACK: f64 = 1e-7;

/// Checks `||g|ker h|| ≥ min_r ||g − r·h||⋆ − 1e−7` on random pairs `(g, h)`.
pub fn restriction_check(space: &FunctionalFamily, trials: usize, config: &SearchConfig) -> Result<RestrictionReport> {
    if space.n() < 2 {
        return Err(Error::InvalidArgument("restriction to a kernel needs n >= 2".into()));
    }
    let inner = config.fixed(4);
    let slacks = (0..trials)
        .map(|r| {
            let mut rng = stream_rng(config.seed, r as u64);
            let g = random_unit(&mut rng, space.n());
            let h = random_unit(&mut rng, space.n());
            let cfg = inner.derive(r as u64);
            let restricted = restricted_dual_norm_with(space, &g, &h, &cfg)?;
            let along = |c: &[f64]| {
                let mut d = g.clone();
                axpy(&mut d, -c[0], &h);
                dual_norm_search(space, &d, &cfg.fixed(1), &[]).map_or(f64::NAN, |s| s.value)
            };
            let best = minimize_convex_lowdim(along, &[dot(&g, &h)], 0.5, &cfg)?;
            Ok(restricted - best.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = slacks.iter().filter(|s| **s < -RESTRICTION_SLACK).count();
    Ok(RestrictionReport { trials, min_slack, violations })
}

/// Rows `e₁ … e_n`, `(1, …, 1)` and `(1/n, 2/n, …, n/n)` with `p = ⌈(n+2)/2⌉`.
pub fn build_corollary_space(n: usize) -> Result<FunctionalFamily> {
    if n < 4 {
        return Err(Error::HypothesisViolation(vec![format!("the construction needs n >= 4, got n = {n}")]));
    }
    FunctionalFamily::from_rationals(corollary_rows(n), corollary_p(n))
}

fn corollary_p(n: usize) -> u32 {
    (n as u32 + 2).div_ceil(2)
}

fn corollary_rows(n: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| rational::int(i64::from(i == j))).collect()).collect();
    rows.push(vec![rational::int(1); n]);
    rows.push((1..=n as i64).map(|j| rational::frac(j, n as i64)).collect());
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaRecord {
    /// Case 1..=8 of the distance argument.
    pub bullet: u8,
    /// `(i, j, k, l)`, 1-based.
    pub tuple: (usize, usize, usize, usize),
    pub v: Vec<Rational>,
    pub fi_v: Rational,
    /// `||v||^{2p}`.
    pub norm_pow: Rational,
    /// Crude radius `B` with `||v|| ≤ B`.
    pub radius: Rational,
    /// `|fᵢ(v)|^{2p} / ||v||^{2p}`.
    pub ratio_pow: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaRecord {
    /// Case 1..=4 of the combination argument.
    pub bullet: u8,
    /// `(j, k)`, 1-based.
    pub pair: (usize, usize),
    /// Functional written as the combination.
    pub target: usize,
    /// `(index, coefficient)` over the functionals outside the pair.
    pub coefficients: Vec<(usize, Rational)>,
    pub abs_sum: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessRecord {
    Alpha(AlphaRecord),
    Beta(BetaRecord),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryCertificate {
    pub n: usize,
    pub m: usize,
    pub p: u32,
    pub alpha_bound: Rational,
    pub beta_bound: Rational,
    pub witness_log: Vec<WitnessRecord>,
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (1..=n).map(|j| rational::int(i64::from(j == i))).collect()
}

/// Smallest indices of `1..=n` outside `taken`.
fn free_indices(n: usize, taken: &[usize], count: usize) -> Vec<usize> {
    (1..=n).filter(|s| !taken.contains(s)).take(count).collect()
}

/// The case number and witness vector for `(i, j, k, l)` on the `n + 2` construction.
fn alpha_case(n: usize, tuple: (usize, usize, usize, usize)) -> (u8, Vec<Rational>, Rational) {
    let (i, j, k, l) = tuple;
    let (n1, n2) = (n + 1, n + 2);
    let small: Vec<usize> = [j, k, l].into_iter().filter(|s| *s <= n).collect();
    let has1 = [j, k, l].contains(&n1);
    let has2 = [j, k, l].contains(&n2);
    let int = |v: usize| rational::int(v as i64);
    let scaled = |a: Rational, s: usize| unit(n, s).into_iter().map(|e| e * &a).collect::<Vec<_>>();
    let add = |a: Vec<Rational>, b: Vec<Rational>| a.into_iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
    let two = int(2);
    let two_n = int(2 * n);
    if i <= n {
        let mut taken = small.clone();
        taken.push(i);
        match (has1, has2) {
            (false, false) => (1, unit(n, i), two),
            (true, false) => {
                let s = free_indices(n, &taken, 1)[0];
                (2, add(unit(n, i), scaled(int(1).neg(), s)), int(4))
            }
            (false, true) => {
                let s = free_indices(n, &taken, 1)[0];
                (3, add(scaled(int(s), i), scaled(int(i).neg(), s)), two_n)
            }
            (true, true) => {
                let f = free_indices(n, &taken, 2);
                let (s1, s2) = (f[0], f[1]);
                let den = int(s2) - int(s1);
                let v = add(
                    unit(n, i),
                    add(scaled((int(i) - int(s2)) / &den, s1), scaled((int(s1) - int(i)) / &den, s2)),
                );
                (4, v, two_n)
            }
        }
    } else if i == n1 {
        if has2 {
            let f = free_indices(n, &small, 2);
            let (s1, s2) = (f[0], f[1]);
            (6, add(scaled(int(s2), s1), scaled(int(s1).neg(), s2)), two_n)
        } else {
            (5, unit(n, free_indices(n, &small, 1)[0]), two)
        }
    } else if has1 {
        let f = free_indices(n, &small, 2);
        // ||e(s₁) − e(s₂)||^{2p} = 2 + |s₁−s₂|^{2p}/n^{2p} ≤ 2^{2p}
        (8, add(unit(n, f[0]), scaled(int(1).neg(), f[1])), two)
    } else {
        (7, unit(n, free_indices(n, &small, 1)[0]), two)
    }
}

/// Exact witnesses for every `(i, j, k, l)` of the `n + 2` construction.
pub fn corollary_witnesses(n: usize) -> Result<WitnessMap> {
    build_corollary_space(n)?;
    Ok(crate::params::alpha_tuples(n + 2)
        .into_iter()
        .map(|t| (t, Witness::Exact(alpha_case(n, t).1)))
        .collect())
}

fn failure(bullet: String, indices: Vec<usize>, residual: &Rational) -> Error {
    Error::CertificateFailure { bullet, indices, residual: residual.to_string() }
}

fn certify_alpha(n: usize, rows: &[Vec<Rational>], p: u32, t: (usize, usize, usize, usize)) -> Result<AlphaRecord> {
    let (bullet, v, radius) = alpha_case(n, t);
    let (i, j, k, l) = t;
    let name = format!("alpha-{bullet}");
    let indices = vec![i, j, k, l];
    let values: Vec<Rational> = rows.iter().map(|r| rational::dot(r, &v)).collect();
    for s in [j, k, l] {
        if !values[s - 1].is_zero() {
            return Err(failure(name, indices, &values[s - 1]));
        }
    }
    let e = 2 * p;
    let norm_pow = values.iter().fold(Rational::zero(), |acc, x| acc + rational::pow(x, e));
    let radius_pow = rational::pow(&radius, e);
    if norm_pow > radius_pow {
        return Err(failure(name, indices, &(&norm_pow - &radius_pow)));
    }
    let fi_v = values[i - 1].abs();
    let ratio_pow = rational::pow(&fi_v, e) / &norm_pow;
    let target = rational::pow(&rational::frac(1, 2 * n as i64), e);
    if ratio_pow < target {
        return Err(failure(name, indices, &(&target - &ratio_pow)));
    }
    // the crude radius alone must also give 1/(2n)
    let crude = &fi_v / &radius - rational::frac(1, 2 * n as i64);
    if crude.is_negative() {
        return Err(failure(name, indices, &crude));
    }
    Ok(AlphaRecord { bullet, tuple: t, v, fi_v, norm_pow, radius, ratio_pow })
}

/// Combinations writing `f_j` and `f_k` through the functionals outside `{j, k}`.
fn beta_case(n: usize, j: usize, k: usize) -> (u8, [(usize, Vec<(usize, Rational)>); 2]) {
    let (n1, n2) = (n + 1, n + 2);
    let q = |a: i64, b: i64| rational::frac(a, b);
    let ni = n as i64;
    let coords = |skip: [usize; 2]| (1..=n).filter(move |i| !skip.contains(i));
    if j == n1 && k == n2 {
        let a = coords([0, 0]).map(|i| (i, q(1, 1))).collect();
        let b = coords([0, 0]).map(|i| (i, q(i as i64, ni))).collect();
        (1, [(n1, a), (n2, b)])
    } else if k == n2 {
        let jj = j as i64;
        let mut a = vec![(n1, q(1, 1))];
        a.extend(coords([j, 0]).map(|i| (i, q(-1, 1))));
        let mut b = vec![(n1, q(jj, ni))];
        b.extend(coords([j, 0]).map(|i| (i, q(i as i64 - jj, ni))));
        (2, [(j, a), (n2, b)])
    } else if k == n1 {
        let jj = j as i64;
        let mut a = vec![(n2, q(ni, jj))];
        a.extend(coords([j, 0]).map(|i| (i, q(-(i as i64), jj))));
        let mut b = vec![(n2, q(ni, jj))];
        b.extend(coords([j, 0]).map(|i| (i, q(jj - i as i64, jj))));
        (3, [(j, a), (n1, b)])
    } else {
        let (jj, kk) = (j as i64, k as i64);
        let gap = kk - jj;
        let mut a = vec![(n1, q(kk, gap)), (n2, q(-ni, gap))];
        a.extend(coords([j, k]).map(|i| (i, q(i as i64 - kk, gap))));
        let mut b = vec![(n1, q(-jj, gap)), (n2, q(ni, gap))];
        b.extend(coords([j, k]).map(|i| (i, q(jj - i as i64, gap))));
        (4, [(j, a), (k, b)])
    }
}

fn certify_beta(n: usize, rows: &[Vec<Rational>], j: usize, k: usize) -> Result<[BetaRecord; 2]> {
    let (bullet, combos) = beta_case(n, j, k);
    let beta_bound = rational::int((n * n) as i64);
    let check = |(target, coefficients): (usize, Vec<(usize, Rational)>)| -> Result<BetaRecord> {
        let name = format!("beta-{bullet}");
        let indices = vec![j, k, target];
        if let Some((s, c)) = coefficients.iter().find(|(s, _)| *s == j || *s == k) {
            return Err(failure(name, vec![j, k, *s], c));
        }
        let mut combo = vec![Rational::zero(); n];
        for (s, c) in &coefficients {
            for (acc, r) in combo.iter_mut().zip(&rows[s - 1]) {
                *acc += c * r;
            }
        }
        let residual = combo
            .iter()
            .zip(&rows[target - 1])
            .map(|(a, b)| (a - b).abs())
            .fold(Rational::zero(), |m, x| if x > m { x } else { m });
        if !residual.is_zero() {
            return Err(failure(name, indices, &residual));
        }
        let abs_sum = coefficients.iter().fold(Rational::zero(), |acc, (_, c)| acc + c.abs());
        if abs_sum > beta_bound {
            return Err(failure(name, indices, &(&abs_sum - &beta_bound)));
        }
        Ok(BetaRecord { bullet, pair: (j, k), target, coefficients, abs_sum })
    };
    let [a, b] = combos;
    Ok([check(a)?, check(b)?])
}

/// Certifies `α ≥ 1/(2n)` and `β ≤ n²` for the `n + 2` construction in exact arithmetic.
pub fn corollary_exact_verify(n: usize) -> Result<CorollaryCertificate> {
    let space = build_corollary_space(n)?;
    let rows = corollary_rows(n);
    let (m, p) = (space.m(), space.p());
    let alpha = crate::params::alpha_tuples(m)
        .into_par_iter()
        .map(|t| certify_alpha(n, &rows, p, t).map(WitnessRecord::Alpha))
        .collect::<Result<Vec<_>>>()?;
    let mut witness_log = alpha;
    for (j, k) in crate::params::beta_pairs(m) {
        let [a, b] = certify_beta(n, &rows, j, k)?;
        witness_log.push(WitnessRecord::Beta(a));
        witness_log.push(WitnessRecord::Beta(b));
    }
    Ok(CorollaryCertificate {
        n,
        m,
        p,
        alpha_bound: rational::frac(1, 2 * n as i64),
        beta_bound: rational::int((n * n) as i64),
        witness_log,
    })
}

impl CorollaryCertificate {
    pub fn alpha_records(&self) -> impl Iterator<Item = &AlphaRecord> {
        self.witness_log.iter().filter_map(|r| match r {
            WitnessRecord::Alpha(a) => Some(a),
            WitnessRecord::Beta(_) => None,
        })
    }

    pub fn beta_records(&self) -> impl Iterator<Item = &BetaRecord> {
        self.witness_log.iter().filter_map(|r| match r {
            WitnessRecord::Beta(b) => Some(b),
            WitnessRecord::Alpha(_) => None,
        })
    }

    /// Smallest certified `|fᵢ(v)|^{2p}/||v||^{2p}`.
    pub fn min_ratio_pow(&self) -> Rational {
        self.alpha_records().map(|a| a.ratio_pow.clone()).min().unwrap_or_else(Rational::one)
    }

    /// Largest coefficient sum over all combinations.
    pub fn max_abs_sum(&self) -> Rational {
        self.beta_records().map(|b| b.abs_sum.clone()).max().unwrap_or_else(Rational::zero)
    }
}
