//! Seeded multi-start search primitives.
//!
//! Every routine here is deterministic for a fixed [`SearchConfig::seed`]:
//! restart `r` draws its start point from a ChaCha stream keyed by
//! `(seed, r)`, restarts may run in parallel, and results are folded in
//! restart order. Maximization results are lower bounds of the true maxima and
//! falsification results mean "no counterexample found", never "proved".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{axpy, dot, norm2, Matrix};

/// Largest dimension accepted by [`minimize_convex_lowdim`].
pub const LOWDIM_MAX: usize = 4;

/// Batches whose best values differ by more than this trigger a doubled budget.
pub const BATCH_AGREEMENT: f64 = 1e-7;

const MAX_DOUBLINGS: usize = 2;
const GOLDEN: f64 = 0.381_966_011_250_105_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    /// Double the restart budget (twice at most) when the two halves of the
    /// restarts disagree by more than [`BATCH_AGREEMENT`].
    pub adaptive: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0, restarts: 64, max_iters: 500, tol: 1e-10, adaptive: true }
    }
}

impl SearchConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        SearchConfig { seed, ..self }
    }

    pub fn with_restarts(self, restarts: usize) -> Self {
        SearchConfig { restarts, ..self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        SearchConfig { tol, ..self }
    }

    /// Fixed budget of `restarts`, no adaptive doubling; for searches nested
    /// inside another search's objective.
    pub fn fixed(self, restarts: usize) -> Self {
        SearchConfig { restarts, adaptive: false, ..self }
    }

    /// Same budget, decorrelated random stream.
    pub fn derive(self, salt: u64) -> Self {
        let mixed = self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        SearchConfig { seed: mixed.rotate_left(17), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidFamily("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidFamily("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    IterLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub status: Status,
    pub evaluations: usize,
}

/// Deterministic random stream for restart `stream` of a search seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point on the Euclidean unit sphere of `R^dim`.
pub fn random_unit(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm2(&v);
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

fn normalize(mut x: Vec<f64>) -> Option<Vec<f64>> {
    let r = norm2(&x);
    if r == 0.0 || !r.is_finite() {
        return None;
    }
    x.iter_mut().for_each(|v| *v /= r);
    Some(x)
}

fn tangent(g: &[f64], x: &[f64]) -> Vec<f64> {
    let radial = dot(g, x);
    g.iter().zip(x).map(|(gi, xi)| gi - radial * xi).collect()
}

/// `a` beats `b`: larger value, ties to the lexicographically smaller point.
fn better(a: (f64, &[f64]), b: (f64, &[f64])) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            a.1.iter().zip(b.1).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
        }
    }
}

struct Local {
    point: Vec<f64>,
    value: f64,
    converged: bool,
    evals: usize,
}

/// Riemannian gradient ascent on the unit sphere with Barzilai-Borwein steps
/// and an Armijo safeguard.
fn sphere_ascent<F, G>(f: &F, grad: &G, x0: Vec<f64>, cfg: &SearchConfig, restart: usize) -> Result<Local>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let Some(mut x) = normalize(x0) else {
        return Err(Error::ZeroVector);
    };
    let mut v = f(&x);
    let mut evals = 1;
    if !v.is_finite() {
        return Err(Error::NonFiniteObjective { restart });
    }
    let gtol = 0.1 * cfg.tol.sqrt();
    let mut t = tangent(&grad(&x), &x);
    let mut tn = norm2(&t);
    let mut step = if tn > 0.0 { 0.1 / tn } else { 1.0 };
    for _ in 0..cfg.max_iters {
        if tn <= gtol * v.abs().max(1.0) {
            return Ok(Local { point: x, value: v, converged: true, evals });
        }
        let mut accepted = None;
        while step * tn > 1e-15 {
            let mut trial = x.clone();
            axpy(&mut trial, step, &t);
            let Some(trial) = normalize(trial) else { break };
            let tv = f(&trial);
            evals += 1;
            if !tv.is_finite() {
                return Err(Error::NonFiniteObjective { restart });
            }
            if tv >= v + 1e-4 * step * tn * tn {
                accepted = Some((trial, tv));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, vn)) = accepted else {
            // no representable improvement along the gradient
            return Ok(Local { point: x, value: v, converged: true, evals });
        };
        let tnew = tangent(&grad(&xn), &xn);
        let dx: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = tnew.iter().zip(&t).map(|(a, b)| a - b).collect();
        let curv = dot(&dx, &dg).abs();
        let bb = dot(&dx, &dx) / curv;
        step = if bb.is_finite() && bb > 0.0 { bb } else { step * 2.0 };
        // keep a single step below a quarter turn
        let tn_new = norm2(&tnew);
        if tn_new > 0.0 {
            step = step.min(0.5 / tn_new);
        }
        x = xn;
        v = vn;
        t = tnew;
        tn = tn_new;
    }
    Ok(Local { point: x, value: v, converged: false, evals })
}

fn run_restarts<S>(indices: std::ops::Range<usize>, solve: &S) -> Result<Vec<Local>>
where
    S: Fn(usize) -> Result<Local> + Sync,
{
    if indices.len() >= 8 {
        indices.into_par_iter().map(solve).collect()
    } else {
        indices.map(solve).collect()
    }
}

fn fold_best(locals: &[Local]) -> Option<&Local> {
    locals.iter().fold(None, |best: Option<&Local>, l| match best {
        Some(b) if !better((l.value, &l.point), (b.value, &b.point)) => Some(b),
        _ => Some(l),
    })
}

/// Multi-start maximization driver shared by the smooth and piecewise searches.
fn multistart<S>(cfg: &SearchConfig, solve: S) -> Result<SearchResult>
where
    S: Fn(usize) -> Result<Local> + Sync,
{
    cfg.validate()?;
    let mut locals = run_restarts(0..cfg.restarts, &solve)?;
    let mut total = cfg.restarts;
    for _ in 0..MAX_DOUBLINGS {
        if total < 2 || !cfg.adaptive {
            break;
        }
        let half = total / 2;
        let (a, b) = (fold_best(&locals[..half]), fold_best(&locals[half..]));
        let (Some(a), Some(b)) = (a, b) else { break };
        let scale = a.value.abs().max(b.value.abs()).max(1.0);
        if (a.value - b.value).abs() <= BATCH_AGREEMENT * scale {
            break;
        }
        locals.extend(run_restarts(total..2 * total, &solve)?);
        total *= 2;
    }
    let evaluations = locals.iter().map(|l| l.evals).sum();
    let best = fold_best(&locals).expect("at least one restart");
    Ok(SearchResult {
        point: best.point.clone(),
        value: best.value,
        status: if best.converged { Status::Converged } else { Status::IterLimit },
        evaluations,
    })
}

fn start_point(seed: u64, r: usize, dim: usize, starts: &[Vec<f64>]) -> Vec<f64> {
    match starts.get(r) {
        Some(s) if norm2(s) > 0.0 => s.clone(),
        _ => random_unit(&mut stream_rng(seed, r as u64), dim),
    }
}

/// Maximizes `objective` over the Euclidean unit sphere of `R^dimension`.
pub fn maximize_on_sphere<F, G>(objective: F, gradient: G, dimension: usize, config: &SearchConfig) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Sync,
{
    maximize_on_sphere_from(objective, gradient, dimension, config, &[])
}

/// As [`maximize_on_sphere`], with restart `r < starts.len()` beginning at `starts[r]`.
pub fn maximize_on_sphere_from<F, G>(
    objective: F,
    gradient: G,
    dimension: usize,
    config: &SearchConfig,
    starts: &[Vec<f64>],
) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Sync,
{
    if dimension == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if dimension == 1 {
        // the sphere is {-1, 1}
        let (lo, hi) = (objective(&[-1.0]), objective(&[1.0]));
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFiniteObjective { restart: 0 });
        }
        let (point, value) = if hi >= lo { (vec![1.0], hi) } else { (vec![-1.0], lo) };
        return Ok(SearchResult { point, value, status: Status::Converged, evaluations: 2 });
    }
    multistart(config, |r| {
        let x0 = start_point(config.seed, r, dimension, starts);
        sphere_ascent(&objective, &gradient, x0, config, r)
    })
}

/// Maximizes `min_i h_i(x)` over the unit sphere, where `pieces(x)` returns
/// each `(h_i(x), ∇h_i(x))`.
///
/// Each restart follows a soft-min continuation (smooth ascent at increasing
/// sharpness) and then takes subgradient steps on the exact min-function; the
/// reported value is always the exact minimum at the returned point.
pub fn maximize_min_on_sphere<P>(pieces: P, dimension: usize, config: &SearchConfig, starts: &[Vec<f64>]) -> Result<SearchResult>
where
    P: Fn(&[f64]) -> Vec<(f64, Vec<f64>)> + Sync,
{
    let exact = |x: &[f64]| pieces(x).iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if dimension == 1 {
        let (lo, hi) = (exact(&[-1.0]), exact(&[1.0]));
        let (point, value) = if hi >= lo { (vec![1.0], hi) } else { (vec![-1.0], lo) };
        return Ok(SearchResult { point, value, status: Status::Converged, evaluations: 2 });
    }
    multistart(config, |r| {
        let mut x = start_point(config.seed, r, dimension, starts);
        x = normalize(x).ok_or(Error::ZeroVector)?;
        let mut evals = 0;
        let mut converged = false;
        for sharp in [20.0, 200.0, 2000.0, 20000.0] {
            let level = exact(&x);
            evals += 1;
            if !level.is_finite() || level <= 0.0 {
                break;
            }
            let kappa = sharp / level;
            let soft = |y: &[f64]| softmin(&pieces(y), kappa).0;
            let soft_grad = |y: &[f64]| softmin(&pieces(y), kappa).1;
            let local = sphere_ascent(&soft, &soft_grad, x.clone(), config, r)?;
            evals += local.evals;
            if exact(&local.point) >= level {
                x = local.point;
            }
        }
        // subgradient polish on the exact objective
        let mut v = exact(&x);
        let mut step = 1e-3;
        for _ in 0..config.max_iters {
            let ps = pieces(&x);
            evals += 1;
            let Some(active) = ps.iter().min_by(|a, b| a.0.total_cmp(&b.0)) else { break };
            let d = tangent(&active.1, &x);
            let dn = norm2(&d);
            if dn == 0.0 || step < 1e-14 {
                converged = true;
                break;
            }
            let mut trial = x.clone();
            axpy(&mut trial, step / dn, &d);
            let trial = normalize(trial).ok_or(Error::ZeroVector)?;
            let tv = exact(&trial);
            if tv > v {
                x = trial;
                v = tv;
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective { restart: r });
        }
        Ok(Local { point: x, value: v, converged, evals })
    })
}

/// `(-1/κ)·ln Σ exp(-κ hᵢ)` and its gradient; infinite pieces get zero weight.
fn softmin(pieces: &[(f64, Vec<f64>)], kappa: f64) -> (f64, Vec<f64>) {
    let dim = pieces.first().map_or(0, |p| p.1.len());
    let lo = pieces.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if !lo.is_finite() {
        return (lo, vec![0.0; dim]);
    }
    let weights: Vec<f64> = pieces.iter().map(|p| (-kappa * (p.0 - lo)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut grad = vec![0.0; dim];
    for (w, p) in weights.iter().zip(pieces) {
        if *w > 0.0 {
            axpy(&mut grad, w / total, &p.1);
        }
    }
    (lo - total.ln() / kappa, grad)
}

/// Minimizes a convex function along the line `x + t·dir`, updating `x` in
/// place; returns the new value and the evaluation count.
fn line_minimize<F>(f: &F, x: &mut [f64], fx: f64, dir: &[f64], h: f64, bounds: Option<(&[f64], &[f64])>) -> (f64, usize)
where
    F: Fn(&[f64]) -> f64,
{
    let mut evals = 0;
    // admissible t-range from the box
    let (mut tmin, mut tmax) = (f64::NEG_INFINITY, f64::INFINITY);
    if let Some((lo, hi)) = bounds {
        for i in 0..x.len() {
            if dir[i] > 0.0 {
                tmax = tmax.min((hi[i] - x[i]) / dir[i]);
                tmin = tmin.max((lo[i] - x[i]) / dir[i]);
            } else if dir[i] < 0.0 {
                tmax = tmax.min((lo[i] - x[i]) / dir[i]);
                tmin = tmin.max((hi[i] - x[i]) / dir[i]);
            }
        }
    }
    let at = |t: f64| -> Vec<f64> { x.iter().zip(dir).map(|(a, d)| a + t * d).collect() };
    let mut eval = |t: f64| {
        evals += 1;
        let v = f(&at(t));
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let h = h.max(1e-12);
    let fp = if h <= tmax { eval(h) } else { f64::INFINITY };
    let fm = if -h >= tmin { eval(-h) } else { f64::INFINITY };
    // bracket (a, b) containing the minimizer, with interior guess m
    let (a, b) = if fp < fx || fm < fx {
        let sgn = if fp <= fm { 1.0 } else { -1.0 };
        let limit = if sgn > 0.0 { tmax } else { -tmin };
        let (mut prev, mut cur, mut fcur) = (0.0, h, fp.min(fm));
        let mut next = 2.0 * cur;
        let mut hit = false;
        for _ in 0..80 {
            if next > limit {
                next = limit;
                hit = true;
            }
            let fnext = eval(sgn * next);
            if fnext >= fcur || hit {
                if fnext < fcur {
                    prev = cur;
                    cur = next;
                    fcur = fnext;
                }
                break;
            }
            prev = cur;
            cur = next;
            fcur = fnext;
            next *= 2.0;
        }
        let _ = fcur;
        let far = if hit { next.max(cur) } else { next };
        if sgn > 0.0 {
            (prev, far)
        } else {
            (-far, -prev)
        }
    } else {
        (if -h >= tmin { -h } else { tmin.max(-h) }, if h <= tmax { h } else { tmax.min(h) })
    };
    // golden section on [a, b]
    let (mut lo, mut hi) = (a, b);
    let mut c = lo + GOLDEN * (hi - lo);
    let mut d = hi - GOLDEN * (hi - lo);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..120 {
        if (hi - lo) <= 1e-15 * (lo.abs() + hi.abs()) + 1e-300 {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = lo + GOLDEN * (hi - lo);
            fc = eval(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = hi - GOLDEN * (hi - lo);
            fd = eval(d);
        }
    }
    let (t, ft) = if fc <= fd { (c, fc) } else { (d, fd) };
    if ft < fx {
        let moved = at(t);
        x.copy_from_slice(&moved);
        (ft, evals)
    } else {
        (fx, evals)
    }
}

/// Coordinate descent with golden-section line searches plus a pattern move
/// along each sweep's net displacement.
fn coordinate_descent<F>(f: &F, mut x: Vec<f64>, scale: f64, cfg: &SearchConfig, bounds: Option<(&[f64], &[f64])>) -> (Vec<f64>, f64, Status, usize)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x.len();
    let mut fx = f(&x);
    let mut evals = 1;
    let mut steps = vec![scale; dim];
    for _ in 0..cfg.max_iters {
        let start = x.clone();
        let f_start = fx;
        for i in 0..dim {
            let mut dir = vec![0.0; dim];
            dir[i] = 1.0;
            let before = x[i];
            let (v, e) = line_minimize(f, &mut x, fx, &dir, steps[i], bounds);
            evals += e;
            fx = v;
            let moved = (x[i] - before).abs();
            steps[i] = if moved > 0.0 { (2.0 * moved).min(scale * 1e3) } else { (steps[i] * 0.5).max(1e-12 * scale) };
        }
        let disp: Vec<f64> = x.iter().zip(&start).map(|(a, b)| a - b).collect();
        let dn = norm2(&disp);
        if dim > 1 && dn > 0.0 {
            let unit: Vec<f64> = disp.iter().map(|d| d / dn).collect();
            let (v, e) = line_minimize(f, &mut x, fx, &unit, dn, bounds);
            evals += e;
            fx = v;
        }
        if f_start - fx <= cfg.tol * f_start.abs() || fx == f64::NEG_INFINITY {
            return (x, fx, Status::Converged, evals);
        }
    }
    (x, fx, Status::IterLimit, evals)
}

/// Minimizes a convex, coercive function of at most [`LOWDIM_MAX`] variables.
///
/// A coarse `5^d` grid of spacing `scale` around `start` picks the initial
/// point; coordinate descent with golden-section line searches refines it,
/// and Newton steps on a finite-difference model finish it when the function
/// is smooth there.
pub fn minimize_convex_lowdim<F>(objective: F, start: &[f64], scale: f64, config: &SearchConfig) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    if dim > LOWDIM_MAX {
        return Err(Error::DimensionTooLarge { dim, max: LOWDIM_MAX });
    }
    if dim == 0 {
        let value = objective(&[]);
        return Ok(SearchResult { point: vec![], value, status: Status::Converged, evaluations: 1 });
    }
    let mut best = start.to_vec();
    let mut best_v = objective(start);
    let mut evals = 1;
    let total = 5usize.pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let p: Vec<f64> = start
            .iter()
            .map(|s| {
                let k = (c % 5) as f64 - 2.0;
                c /= 5;
                s + k * scale
            })
            .collect();
        let v = objective(&p);
        evals += 1;
        if v < best_v {
            best_v = v;
            best = p;
        }
    }
    if !best_v.is_finite() {
        return Err(Error::NonFiniteObjective { restart: 0 });
    }
    let (point, value, status, e) = coordinate_descent(&objective, best, scale, config, None);
    let (point, value, e2) = newton_polish(&objective, point, value, scale);
    Ok(SearchResult { point, value, status, evaluations: evals + e + e2 })
}

/// Newton iterations with a central-difference gradient and Hessian, each
/// step halved until it decreases `f`. Stops at the first step that fails or
/// when the model is not positive definite.
fn newton_polish<F>(f: &F, mut x: Vec<f64>, mut fx: f64, scale: f64) -> (Vec<f64>, f64, usize)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x.len();
    let h = 1e-4 * scale;
    let mut evals = 0;
    for _ in 0..30 {
        let shifted = |x: &[f64], moves: &[(usize, f64)]| {
            let mut y = x.to_vec();
            moves.iter().for_each(|&(i, d)| y[i] += d);
            y
        };
        let plus: Vec<f64> = (0..dim).map(|i| f(&shifted(&x, &[(i, h)]))).collect();
        let minus: Vec<f64> = (0..dim).map(|i| f(&shifted(&x, &[(i, -h)]))).collect();
        evals += 2 * dim;
        let grad: Vec<f64> = (0..dim).map(|i| (plus[i] - minus[i]) / (2.0 * h)).collect();
        let mut hess = vec![0.0; dim * dim];
        for i in 0..dim {
            hess[i * dim + i] = (plus[i] - 2.0 * fx + minus[i]) / (h * h);
            for j in 0..i {
                let fij = f(&shifted(&x, &[(i, h), (j, h)]));
                evals += 1;
                let v = (fij - plus[i] - plus[j] + fx) / (h * h);
                hess[i * dim + j] = v;
                hess[j * dim + i] = v;
            }
        }
        if (0..dim).any(|i| !(hess[i * dim + i] > 0.0)) {
            break;
        }
        let Ok(inv) = Matrix::new(dim, dim, hess).and_then(|m| m.inverse()) else { break };
        let step: Vec<f64> = inv.mul_vec(&grad).iter().map(|v| -v).collect();
        if dot(&step, &grad) >= 0.0 {
            break;
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..12 {
            let mut y = x.clone();
            axpy(&mut y, t, &step);
            let fy = f(&y);
            evals += 1;
            if fy < fx {
                accepted = Some((y, fy));
                break;
            }
            t *= 0.5;
        }
        let Some((y, fy)) = accepted else { break };
        let gain = fx - fy;
        x = y;
        fx = fy;
        if gain <= 1e-15 * fx.abs() {
            break;
        }
    }
    (x, fx, evals)
}

/// Axis-aligned box `[lo_i, hi_i]` searched by [`falsify_inequality`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn cube(dim: usize, half_width: f64) -> Self {
        BoxDomain { lo: vec![-half_width; dim], hi: vec![half_width; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| l + (h - l) * rng.gen::<f64>()).collect()
    }

    fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FalsifyOutcome {
    /// A point with residual below `-tol`, if one was found.
    pub counterexample: Option<Vec<f64>>,
    pub min_residual: f64,
    pub argmin: Vec<f64>,
    pub evaluations: usize,
}

/// Searches `domain` for a point where `residual < -config.tol`.
///
/// Restart 0 starts at the box centre, the rest at seeded uniform points; each
/// runs a box-clipped coordinate descent. The smallest residual seen is
/// reported either way.
pub fn falsify_inequality<F>(residual: F, domain: &BoxDomain, config: &SearchConfig) -> Result<FalsifyOutcome>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let width = domain.lo.iter().zip(&domain.hi).map(|(l, h)| h - l).fold(0.0, f64::max);
    let bounds = Some((domain.lo.as_slice(), domain.hi.as_slice()));
    let solve = |r: usize| {
        let x0 = if r == 0 { domain.center() } else { domain.sample(&mut stream_rng(config.seed, r as u64)) };
        let (x, v, _, e) = coordinate_descent(&residual, x0, 0.1 * width.max(1e-12), config, bounds);
        (x, v, e)
    };
    let runs: Vec<(Vec<f64>, f64, usize)> = if config.restarts >= 8 {
        (0..config.restarts).into_par_iter().map(solve).collect()
    } else {
        (0..config.restarts).map(solve).collect()
    };
    let evaluations = runs.iter().map(|r| r.2).sum();
    let (argmin, min_residual, _) = runs
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("restarts >= 1");
    let counterexample = (min_residual < -config.tol).then(|| argmin.clone());
    Ok(FalsifyOutcome { counterexample, min_residual, argmin, evaluations })
}

/// One step of the record kept by [`ellipsoid_minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub value: f64,
    pub best: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidOutcome {
    pub result: SearchResult,
    /// Certified `best − lower bound`, valid when the minimizer lies in the start ball.
    pub gap: f64,
    pub trace: Vec<TraceEntry>,
}

/// Central-cut ellipsoid method for a convex function given by a
/// value/subgradient oracle, started from the ball of `radius` about `center`.
pub fn ellipsoid_minimize<O>(mut oracle: O, center: &[f64], radius: f64, tol: f64, max_iters: usize) -> Result<EllipsoidOutcome>
where
    O: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let d = center.len();
    let mut c = center.to_vec();
    let mut trace = Vec::new();
    let mut best = (f64::INFINITY, c.clone());
    let mut lower = f64::NEG_INFINITY;
    if d == 0 {
        let (v, _) = oracle(&c)?;
        let result = SearchResult { point: c, value: v, status: Status::Converged, evaluations: 1 };
        return Ok(EllipsoidOutcome { result, gap: 0.0, trace });
    }
    // shape matrix P (row-major), E = {z : (z-c)ᵀ P⁻¹ (z-c) ≤ 1}
    let mut p = vec![0.0; d * d];
    for i in 0..d {
        p[i * d + i] = radius * radius;
    }
    let (mut lo1, mut hi1) = (center[0] - radius, center[0] + radius);
    let mut status = Status::IterLimit;
    let mut iters = 0;
    for k in 0..max_iters {
        iters = k + 1;
        let (v, g) = oracle(&c)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective { restart: k });
        }
        if better((-v, &c), (-best.0, &best.1)) {
            best = (v, c.clone());
        }
        let pg: Vec<f64> = (0..d).map(|i| dot(&p[i * d..(i + 1) * d], &g)).collect();
        let gpg = dot(&g, &pg).max(0.0);
        let width = gpg.sqrt();
        lower = lower.max(v - width);
        let gap = best.0 - lower;
        trace.push(TraceEntry { iteration: k, value: v, best: best.0, gap });
        if width == 0.0 || gap <= tol {
            status = Status::Converged;
            break;
        }
        if d == 1 {
            if g[0] > 0.0 {
                hi1 = c[0];
            } else {
                lo1 = c[0];
            }
            c[0] = 0.5 * (lo1 + hi1);
            let half = 0.5 * (hi1 - lo1);
            p[0] = half * half;
            continue;
        }
        let df = d as f64;
        let gt: Vec<f64> = pg.iter().map(|x| x / width).collect();
        for i in 0..d {
            c[i] -= gt[i] / (df + 1.0);
        }
        let factor = df * df / (df * df - 1.0);
        let shrink = 2.0 / (df + 1.0);
        for i in 0..d {
            for j in 0..d {
                p[i * d + j] = factor * (p[i * d + j] - shrink * gt[i] * gt[j]);
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let s = 0.5 * (p[i * d + j] + p[j * d + i]);
                p[i * d + j] = s;
                p[j * d + i] = s;
            }
        }
    }
    let gap = best.0 - lower;
    let result = SearchResult { point: best.1, value: best.0, status, evaluations: iters };
    Ok(EllipsoidOutcome { result, gap, trace })
}

/// Largest relative mismatch between `gradient` and central differences of
/// `objective` at `x` (step `h`).
pub fn gradient_mismatch<F, G>(objective: F, gradient: G, x: &[f64], h: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let g = gradient(x);
    let scale = norm2(&g).max(1e-12);
    (0..x.len())
        .map(|i| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fd = (objective(&xp) - objective(&xm)) / (2.0 * h);
            (fd - g[i]).abs() / scale
        })
        .fold(0.0, f64::max)
}
