//! Projections `P(x) = x − f(x)·w` onto a hyperplane `ker f`: norm estimates,
//! minimal-projection search, and the smoothness-gap diagnostics.

use std::cell::RefCell;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{
    axpy, dot, exact_inf_norm_inverse, norm2, null_space_basis, stable_power_sum, vandermonde,
    vandermonde_inverse_norm_bound,
};
use crate::optimize::{
    ellipsoid_minimize, falsify_inequality, maximize_on_sphere_from, random_unit, stream_rng, BoxDomain,
    SearchConfig, Status, TraceEntry,
};
use crate::space::{dual_norm_search, norm_eval, norm_gradient, supporting_functional, FunctionalFamily, Hyperplane};

/// Two outer searches agreeing to this tolerance mark a result as stable.
pub const STABILITY_TOL: f64 = 1e-7;

const ARCHIVE: usize = 24;
const VERIFY_ROUNDS: usize = 4;
/// Relative slack between the oracle's best value and its full re-evaluation.
const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub f: Hyperplane,
    pub w: Vec<f64>,
}

impl Projection {
    /// Requires `f(w) = 1` within `1e-10`.
    pub fn new(f: Hyperplane, w: Vec<f64>) -> Result<Self> {
        if w.len() != f.functional().len() {
            return Err(Error::DimensionMismatch { expected: f.functional().len(), found: w.len() });
        }
        let fw = f.eval(&w);
        if (fw - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidFamily(format!("f(w) = {fw}, expected 1")));
        }
        Ok(Projection { f, w })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        axpy(&mut out, -self.f.eval(x), &self.w);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionNorm {
    pub value: f64,
    /// Unit vector attaining `value`.
    pub point: Vec<f64>,
    /// `1 + ||f||⋆·||w||`.
    pub crude_upper: f64,
}

/// `||x − f(x)·w|| / ||x||` and its gradient in `x`.
fn ratio(space: &FunctionalFamily, f: &[f64], w: &[f64], x: &[f64]) -> f64 {
    let nx = stable_power_sum(&space.values(x), space.exponent());
    if nx == 0.0 {
        return 0.0;
    }
    let mut px = x.to_vec();
    axpy(&mut px, -dot(f, x), w);
    stable_power_sum(&space.values(&px), space.exponent()) / nx
}

fn ratio_gradient(space: &FunctionalFamily, f: &[f64], w: &[f64], x: &[f64]) -> Vec<f64> {
    let nx = stable_power_sum(&space.values(x), space.exponent());
    let mut px = x.to_vec();
    axpy(&mut px, -dot(f, x), w);
    let npx = stable_power_sum(&space.values(&px), space.exponent());
    let (Ok(gp), Ok(gx)) = (norm_gradient(space, &px), norm_gradient(space, x)) else {
        return vec![0.0; x.len()];
    };
    // Pᵀg = g − ⟨w, g⟩·f
    let mut out = gp.clone();
    axpy(&mut out, -dot(w, &gp), f);
    out.iter_mut().for_each(|v| *v /= nx);
    axpy(&mut out, -npx / (nx * nx), &gx);
    out
}

fn projection_norm_from(
    space: &FunctionalFamily,
    f: &[f64],
    w: &[f64],
    config: &SearchConfig,
    starts: &[Vec<f64>],
) -> Result<(f64, Vec<f64>)> {
    let r = maximize_on_sphere_from(
        |x| ratio(space, f, w, x),
        |x| ratio_gradient(space, f, w, x),
        space.n(),
        config,
        starts,
    )?;
    let scale = stable_power_sum(&space.values(&r.point), space.exponent());
    Ok((r.value, r.point.iter().map(|v| v / scale).collect()))
}

/// A unit vector of `ker f`, where `P` acts as the identity.
fn kernel_start(f: &[f64]) -> Result<Vec<f64>> {
    Ok(null_space_basis(f)?.into_iter().next().unwrap_or_else(|| vec![1.0]))
}

/// `max_{||x||=1} ||P x||`, a lower bound on `||P||`; restart 0 starts in `ker f`
/// so the estimate is never below one.
pub fn projection_norm_estimate(space: &FunctionalFamily, proj: &Projection, config: &SearchConfig) -> Result<ProjectionNorm> {
    let f = proj.f.functional();
    let mut starts = vec![];
    if space.n() > 1 {
        starts.push(kernel_start(f)?);
    }
    starts.push(proj.w.clone());
    let (value, point) = projection_norm_from(space, f, &proj.w, config, &starts)?;
    let crude_upper = 1.0 + norm_eval(space, &proj.w)?;
    Ok(ProjectionNorm { value, point, crude_upper })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinProjResult {
    pub projection: Projection,
    pub norm_estimate: f64,
    pub crude_upper: f64,
    /// Unit vector attaining `norm_estimate`.
    pub maximizer: Vec<f64>,
    pub status: Status,
    /// Verified value minus the ellipsoid lower bound, for the best outer run.
    pub gap: f64,
    /// Best values of the two outer runs.
    pub outer_values: [f64; 2],
    pub stable: bool,
    pub trace: Vec<TraceEntry>,
}

/// Inner maximization with an archive of earlier maximizers as warm starts.
struct InnerOracle<'a> {
    space: &'a FunctionalFamily,
    f: &'a [f64],
    basis: &'a [Vec<f64>],
    w0: &'a [f64],
    config: SearchConfig,
    archive: RefCell<Vec<Vec<f64>>>,
    calls: RefCell<u64>,
}

impl InnerOracle<'_> {
    fn w_of(&self, c: &[f64]) -> Vec<f64> {
        let mut w = self.w0.to_vec();
        for (ci, b) in c.iter().zip(self.basis) {
            axpy(&mut w, *ci, b);
        }
        w
    }

    /// `(||P_w||, subgradient in c)` by Danskin's rule at the inner maximizer.
    fn evaluate(&self, c: &[f64]) -> Result<(f64, Vec<f64>)> {
        let w = self.w_of(c);
        let call = {
            let mut k = self.calls.borrow_mut();
            *k += 1;
            *k
        };
        let mut starts = self.archive.borrow().clone();
        starts.push(self.basis[0].clone());
        let cfg = self.config.derive(call).fixed(starts.len() + 2);
        let (value, x) = projection_norm_from(self.space, self.f, &w, &cfg, &starts)?;
        self.remember(&x);
        // ∂/∂w ||x − f(x)w|| = −f(x)·∇||·||(Px), for unit x
        let mut px = x.clone();
        axpy(&mut px, -dot(self.f, &x), &w);
        let grad_w = match norm_gradient(self.space, &px) {
            Ok(g) => g.iter().map(|v| -dot(self.f, &x) * v).collect(),
            Err(_) => vec![0.0; w.len()],
        };
        Ok((value, self.basis.iter().map(|b| dot(b, &grad_w)).collect()))
    }

    fn remember(&self, x: &[f64]) {
        let mut archive = self.archive.borrow_mut();
        let close = archive.iter().any(|a| {
            let d1: f64 = a.iter().zip(x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            let d2: f64 = a.iter().zip(x).map(|(p, q)| (p + q).abs()).fold(0.0, f64::max);
            d1.min(d2) < 1e-3
        });
        if !close {
            if archive.len() == ARCHIVE {
                archive.remove(0);
            }
            archive.push(x.to_vec());
        }
    }
}

/// Ellipsoid iterations needed to shrink a ball of radius `radius` to `tol` in dimension `d`.
fn ellipsoid_budget(d: usize, radius: f64, tol: f64) -> usize {
    let df = d as f64;
    let shrink = (radius.max(1.0) / tol).ln().max(1.0);
    (2.0 * df * (df + 1.0) * shrink) as usize + 50
}

/// Minimizes `w ↦ ||P_w||` over `{w : f(w) = 1}` and returns the best projection found.
///
/// The objective is convex in `w`; it is minimized by the central-cut
/// ellipsoid method in coordinates of `ker f`, with subgradients taken at the
/// inner maximizer. Two outer runs (the canonical start and one seeded
/// offset start) must agree to [`STABILITY_TOL`] for the result to count as
/// stable. The reported estimate is a final full-budget evaluation at the
/// best `w`.
pub fn minimal_projection_search(space: &FunctionalFamily, f: &Hyperplane, config: &SearchConfig) -> Result<MinProjResult> {
    let n = space.n();
    let fv = f.functional();
    let basis = if n > 1 { null_space_basis(fv)? } else { vec![] };
    // norming point: f(x_f) = ||f||⋆ at ||x_f|| = 1
    let norming = dual_norm_search(space, fv, config, &[])?;
    let w0: Vec<f64> = norming.point.iter().map(|v| v / dot(fv, &norming.point)).collect();
    if basis.is_empty() {
        let projection = Projection::new(f.clone(), w0)?;
        let est = projection_norm_estimate(space, &projection, config)?;
        return Ok(MinProjResult {
            projection,
            norm_estimate: est.value,
            crude_upper: est.crude_upper,
            maximizer: est.point,
            status: Status::Converged,
            gap: 0.0,
            outer_values: [est.value; 2],
            stable: true,
            trace: vec![],
        });
    }
    let d = basis.len();
    let sigma = space.functionals().min_singular_value();
    let m = space.m() as f64;
    let lift = m.powf(0.5 - 1.0 / f64::from(space.exponent()));
    let radius = (3.0 + norm_eval(space, &w0)?) * lift / sigma;
    let budget = ellipsoid_budget(d, radius, config.tol).max(config.max_iters);
    let oracle = InnerOracle {
        space,
        f: fv,
        basis: &basis,
        w0: &w0,
        config: *config,
        archive: RefCell::new(vec![norming.point.clone()]),
        calls: RefCell::new(0),
    };

    let full = config.with_restarts(config.restarts.max(2));
    let first = outer_run(&oracle, &vec![0.0; d], radius, budget, &full)?;
    let mut rng = stream_rng(config.seed, u64::MAX);
    let offset: Vec<f64> = random_unit(&mut rng, d).iter().map(|v| v * 0.25 * radius * rng.gen::<f64>()).collect();
    let second = outer_run(&oracle, &offset, 1.25 * radius, budget, &full.derive(1))?;

    let outer_values = [first.value, second.value];
    let stable = (outer_values[0] - outer_values[1]).abs() <= STABILITY_TOL;
    let best = if second.value < first.value { second } else { first };
    let projection = Projection::new(f.clone(), best.w)?;
    let crude_upper = 1.0 + norm_eval(space, &projection.w)?;
    Ok(MinProjResult {
        projection,
        norm_estimate: best.value,
        crude_upper,
        maximizer: best.maximizer,
        status: best.status,
        gap: best.gap,
        outer_values,
        stable,
        trace: best.trace,
    })
}

struct OuterRun {
    w: Vec<f64>,
    value: f64,
    maximizer: Vec<f64>,
    gap: f64,
    status: Status,
    trace: Vec<TraceEntry>,
}

/// Ellipsoid runs from `center`, each followed by a full-budget evaluation at
/// the best point. A run whose inner oracle missed the global maximizer is
/// repeated with that maximizer added to the warm starts.
fn outer_run(oracle: &InnerOracle<'_>, center: &[f64], radius: f64, budget: usize, full: &SearchConfig) -> Result<OuterRun> {
    let mut round = 0;
    loop {
        let out = ellipsoid_minimize(|c| oracle.evaluate(c), center, radius, full.tol, budget)?;
        let w = oracle.w_of(&out.result.point);
        // renormalize against rounding so that f(w) = 1
        let fw = dot(oracle.f, &w);
        let w: Vec<f64> = w.iter().map(|v| v / fw).collect();
        let mut starts = oracle.archive.borrow().clone();
        starts.push(oracle.basis[0].clone());
        let cfg = full.derive(round as u64).with_restarts(full.restarts + starts.len());
        let (value, maximizer) = projection_norm_from(oracle.space, oracle.f, &w, &cfg, &starts)?;
        oracle.remember(&maximizer);
        let lower = out.result.value - out.gap;
        let verified = value <= out.result.value + VERIFY_TOL * value;
        round += 1;
        if verified || round == VERIFY_ROUNDS {
            let status = if verified { out.result.status } else { Status::IterLimit };
            return Ok(OuterRun { w, value, maximizer, gap: value - lower, status, trace: out.trace });
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessReport {
    pub epsilon: f64,
    pub t0: f64,
    /// `t₀·(2+ε)`.
    pub gap_bound: f64,
    /// `8·√(εp)`.
    pub radius_bound: f64,
    pub max_sampled: f64,
    /// Smallest `bound − |f_y(w)|` found by the worst-case search.
    pub worst_case_margin: f64,
    pub norm_w: f64,
    pub samples: usize,
}

/// Slack added to each bound before a sample counts as a violation.
pub const GAP_SLACK: f64 = 1e-7;

/// Checks `|f_y(w)| ≤ t₀(2+ε)` and `|f_y(w)| ≤ 8√(εp)` on `samples` random unit
/// `y ∈ ker f` plus a worst-case search, and `1 ≤ ||w|| ≤ 2+ε`, `||w|| < 4`.
pub fn smoothness_gap_check(space: &FunctionalFamily, result: &MinProjResult, samples: usize, config: &SearchConfig) -> Result<SmoothnessReport> {
    let proj = &result.projection;
    let f = proj.f.functional();
    let w = &proj.w;
    let eps = (result.norm_estimate - 1.0).max(0.0);
    let p = f64::from(space.p());
    let t0 = 4.0 * (eps * p / (2.0 + 2.0 * eps)).sqrt();
    let gap_bound = t0 * (2.0 + eps);
    let radius_bound = 8.0 * (eps * p).sqrt();
    let limit = gap_bound.min(radius_bound) + GAP_SLACK;
    let norm_w = norm_eval(space, w)?;

    let violation = |sample: Vec<f64>, detail: String| Err(Error::ViolationFound { sample, detail });
    if norm_w > 2.0 + eps + GAP_SLACK || norm_w >= 4.0 {
        return violation(w.clone(), format!("||w|| = {norm_w} exceeds 2 + eps = {}", 2.0 + eps));
    }
    if norm_w < 1.0 - 1e-9 {
        return violation(w.clone(), format!("||w|| = {norm_w} < 1 although f(w) = 1"));
    }
    let basis = null_space_basis(f)?;
    let lift = |c: &[f64]| {
        let mut y = vec![0.0; space.n()];
        for (ci, b) in c.iter().zip(&basis) {
            axpy(&mut y, *ci, b);
        }
        y
    };
    let gap = |y: &[f64]| supporting_functional(space, y).map_or(0.0, |s| s.eval(space, w).abs());

    let mut max_sampled = 0.0_f64;
    if !basis.is_empty() {
        let mut rng = stream_rng(config.seed, 0x5eed);
        for _ in 0..samples {
            let c = random_unit(&mut rng, basis.len());
            let y = lift(&c);
            let ny = norm_eval(space, &y)?;
            let y: Vec<f64> = y.iter().map(|v| v / ny).collect();
            let g = gap(&y);
            max_sampled = max_sampled.max(g);
            if g > limit {
                return violation(y, format!("|f_y(w)| = {g} exceeds {limit}"));
            }
        }
    }
    let mut worst_case_margin = limit - max_sampled;
    if !basis.is_empty() {
        let residual = |c: &[f64]| {
            if norm2(c) == 0.0 {
                return limit;
            }
            limit - gap(&lift(c))
        };
        let cfg = config.derive(0x9a9).fixed(config.restarts.min(8));
        let out = falsify_inequality(residual, &BoxDomain::cube(basis.len(), 1.0), &cfg)?;
        worst_case_margin = worst_case_margin.min(out.min_residual);
        if out.min_residual < 0.0 {
            return violation(lift(&out.argmin), format!("worst-case |f_y(w)| exceeds {limit}"));
        }
    }
    Ok(SmoothnessReport { epsilon: eps, t0, gap_bound, radius_bound, max_sampled, worst_case_margin, norm_w, samples })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink {
    pub name: String,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    /// `y`, `z` after projection onto `ker f` and normalization.
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub nodes: Vec<f64>,
    pub v: Vec<f64>,
    /// Coefficients of `P(t)` in powers of `t`.
    pub coefficients: Vec<f64>,
    pub max_abs_p: f64,
    /// `P^{(k)}(0)` for `k = 0..=2p−1`.
    pub derivatives: Vec<f64>,
    /// `∏_{j<k}(2p−1−j)²·max|P|` for `k = 0..=2p−1`.
    pub markov_bounds: Vec<f64>,
    pub gautschi_bound: f64,
    pub exact_inverse_norm: f64,
    pub av_inf: f64,
    pub v_inf: f64,
    pub links: Vec<ChainLink>,
}

impl ChainReport {
    pub fn all_hold(&self) -> bool {
        self.links.iter().all(|l| l.holds)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Grid points used for `max_{[−1,1]} |P|`.
pub const REPLAY_GRID: usize = 20_001;

/// Replays the interpolation step: nodes `fᵢ(z)/fᵢ(y)`, weights
/// `vᵢ = fᵢ(y)^{2p−1} fᵢ(w)`, the polynomial `P(t) = Σ fᵢ(y+tz)^{2p−1} fᵢ(w)`,
/// its Markov derivative bounds and the Vandermonde inverse bounds.
///
/// `y` and `z` are first projected onto `ker f` (Euclidean) and scaled to unit norm.
pub fn proof_chain_replay(space: &FunctionalFamily, f: &Hyperplane, result: &MinProjResult, y: &[f64], z: &[f64]) -> Result<ChainReport> {
    let fv = f.functional();
    let onto_kernel = |u: &[f64]| -> Result<Vec<f64>> {
        let mut out = u.to_vec();
        axpy(&mut out, -dot(fv, u) / dot(fv, fv), fv);
        let nu = norm_eval(space, &out)?;
        if nu == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(out.iter().map(|v| v / nu).collect())
    };
    let (y, z) = (onto_kernel(y)?, onto_kernel(z)?);
    let w = &result.projection.w;
    let (fy, fz, fw) = (space.values(&y), space.values(&z), space.values(w));
    if let Some(index) = fy.iter().position(|v| v.abs() <= 1e-12) {
        return Err(Error::DegenerateY { index: index + 1 });
    }
    let d = 2 * space.p() - 1;
    let nodes: Vec<f64> = fz.iter().zip(&fy).map(|(a, b)| a / b).collect();
    let v: Vec<f64> = fy.iter().zip(&fw).map(|(a, b)| a.powi(d as i32) * b).collect();
    let coefficients: Vec<f64> = (0..=d)
        .map(|k| binomial(d, k) * nodes.iter().zip(&v).map(|(x, vi)| x.powi(k as i32) * vi).sum::<f64>())
        .collect();
    let p_at = |t: f64| coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c);
    let max_abs_p = (0..REPLAY_GRID)
        .map(|i| p_at(-1.0 + 2.0 * i as f64 / (REPLAY_GRID - 1) as f64).abs())
        .fold(0.0, f64::max);
    let mut fact = 1.0;
    let mut derivatives = Vec::new();
    let mut markov_bounds = Vec::new();
    let mut chain = 1.0;
    for k in 0..=d {
        if k > 0 {
            fact *= f64::from(k);
            chain *= f64::from(d - (k - 1)).powi(2);
        }
        derivatives.push(fact * coefficients[k as usize]);
        markov_bounds.push(chain * max_abs_p);
    }
    let mut links = Vec::new();
    for k in 1..=d {
        let (lhs, rhs) = (derivatives[k as usize].abs(), markov_bounds[k as usize]);
        links.push(ChainLink { name: format!("markov k={k}"), holds: lhs <= rhs * (1.0 + 1e-6) + 1e-12, lhs, rhs });
    }
    let a = vandermonde(&nodes);
    let gautschi_bound = vandermonde_inverse_norm_bound(&nodes)?;
    let exact_inverse_norm = exact_inf_norm_inverse(&a)?;
    links.push(ChainLink {
        name: "gautschi >= exact".into(),
        holds: gautschi_bound >= exact_inverse_norm * (1.0 - 1e-9),
        lhs: gautschi_bound,
        rhs: exact_inverse_norm,
    });
    let av_inf = a.mul_vec(&v).iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let v_inf = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    links.push(ChainLink {
        name: "|Av| >= |v|/|A^-1|".into(),
        holds: av_inf >= v_inf / exact_inverse_norm * (1.0 - 1e-9),
        lhs: av_inf,
        rhs: v_inf / exact_inverse_norm,
    });
    Ok(ChainReport {
        y,
        z,
        nodes,
        v,
        coefficients,
        max_abs_p,
        derivatives,
        markov_bounds,
        gautschi_bound,
        exact_inverse_norm,
        av_inf,
        v_inf,
        links,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Matrix;

    fn corollary4() -> FunctionalFamily {
        let mut rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| f64::from(i == j)).collect()).collect();
        rows.push(vec![1.0; 4]);
        rows.push((1..=4).map(|i| f64::from(i) / 4.0).collect());
        FunctionalFamily::new(Matrix::from_rows(&rows).unwrap(), 3).unwrap()
    }

    fn quick() -> SearchConfig {
        SearchConfig::default().with_restarts(8)
    }

    #[test]
    fn orthogonal_projection_has_norm_one() {
        let e = FunctionalFamily::euclidean(3);
        let f = Hyperplane::new(&e, &[1.0, 0.0, 0.0], &quick()).unwrap();
        let p = Projection::new(f, vec![1.0, 0.0, 0.0]).unwrap();
        let r = projection_norm_estimate(&e, &p, &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        assert!(r.crude_upper >= r.value);
    }

    #[test]
    fn projection_requires_unit_value() {
        let e = FunctionalFamily::euclidean(2);
        let f = Hyperplane::new(&e, &[1.0, 0.0], &quick()).unwrap();
        assert!(Projection::new(f, vec![2.0, 0.0]).is_err());
    }

    #[test]
    fn ratio_gradient_is_consistent() {
        let c = corollary4();
        let f = [0.3, -0.2, 0.5, 0.1];
        let w: Vec<f64> = f.iter().map(|v| v / dot(&f, &f)).collect();
        let x = [0.4, 0.1, -0.7, 0.2];
        let err = crate::optimize::gradient_mismatch(|x| ratio(&c, &f, &w, x), |x| ratio_gradient(&c, &f, &w, x), &x, 1e-6);
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn euclidean_search_finds_one() {
        let e = FunctionalFamily::euclidean(3);
        let f = Hyperplane::new(&e, &[1.0, 2.0, -0.5], &quick()).unwrap();
        let r = minimal_projection_search(&e, &f, &quick()).unwrap();
        assert!((r.norm_estimate - 1.0).abs() < 1e-6, "{}", r.norm_estimate);
        let report = smoothness_gap_check(&e, &r, 50, &quick()).unwrap();
        assert!(report.max_sampled < 1e-7);
    }

    #[test]
    fn corollary_search_beats_start_and_stays_above_one() {
        let c = corollary4();
        let f = Hyperplane::new(&c, &[1.0, 0.0, 0.0, 0.0], &quick()).unwrap();
        let r = minimal_projection_search(&c, &f, &quick()).unwrap();
        assert!(r.norm_estimate > 1.0 + 1e-8);
        assert!(r.norm_estimate <= r.crude_upper + 1e-9);
        let w0 = Projection::new(f.clone(), vec![1.0 / f.functional()[0], 0.0, 0.0, 0.0]).unwrap();
        let at_w0 = projection_norm_estimate(&c, &w0, &quick()).unwrap();
        assert!(r.norm_estimate <= at_w0.value + 1e-8);
        smoothness_gap_check(&c, &r, 100, &quick()).unwrap();
    }

    #[test]
    fn chain_replay_links_hold() {
        let c = corollary4();
        let f = Hyperplane::new(&c, &[0.3, -1.0, 0.4, 0.9], &quick()).unwrap();
        let r = minimal_projection_search(&c, &f, &quick()).unwrap();
        let rep = proof_chain_replay(&c, &f, &r, &[0.2, 0.5, -0.3, 0.1], &[0.7, -0.1, 0.2, 0.4]).unwrap();
        assert!(rep.all_hold(), "{:?}", rep.links);
        // P(0) = Σ vᵢ
        assert!((rep.derivatives[0] - rep.v.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn chain_replay_rejects_degenerate_y() {
        let c = corollary4();
        let f = Hyperplane::new(&c, &[1.0, 0.0, 0.0, 0.0], &quick()).unwrap();
        let r = minimal_projection_search(&c, &f, &quick()).unwrap();
        // y ∈ ker f₁ means f₁(y) = 0
        let out = proof_chain_replay(&c, &f, &r, &[0.0, 1.0, 0.5, 0.2], &[0.0, 0.3, 1.0, -0.4]);
        assert_eq!(out, Err(Error::DegenerateY { index: 1 }));
    }
}
