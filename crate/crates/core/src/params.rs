//! The separation parameter α, the domination parameter β, and the three-way
//! classification of a hyperplane functional against the family.
//!
//! Index tuples in this module are 1-based, matching how functionals are
//! numbered in reports and configs.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::bounds::{EpsilonLedger, Verdict};
use crate::error::{Error, Result};
use crate::numerics::{axpy, dot, norm2, rational, stable_power_sum, LogScalar, Matrix, Rational};
use crate::optimize::{falsify_inequality, maximize_min_on_sphere, minimize_convex_lowdim, BoxDomain, SearchConfig};
use crate::space::{dual_norm_search, FunctionalFamily, Hyperplane};

/// Relative residual below which a functional counts as lying in a span exactly.
pub const SPAN_SNAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    NumericSearch,
    WitnessCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    /// `min(raw, 1/2)`.
    pub value: f64,
    pub raw: f64,
    pub mode: AlphaMode,
    /// `(i, j, k, l)` attaining the minimum.
    pub worst_tuple: (usize, usize, usize, usize),
}

/// A vector annihilated by `f_j, f_k, f_l`.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Float(Vec<f64>),
    Exact(Vec<Rational>),
}

/// Witnesses keyed by `(i, j, k, l)` with `j < k < l` and `i ∉ {j, k, l}`.
pub type WitnessMap = BTreeMap<(usize, usize, usize, usize), Witness>;

/// All `(i, j, k, l)` with `j < k < l` and `i ∉ {j, k, l}`, 1-based.
pub fn alpha_tuples(m: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            for k in (j + 1)..=m {
                for l in (k + 1)..=m {
                    if i != j && i != k && i != l {
                        out.push((i, j, k, l));
                    }
                }
            }
        }
    }
    out
}

/// Minimum over an ordered list, ties to the earliest entry.
fn first_min<T: Clone>(items: &[(T, f64)]) -> Option<(T, f64)> {
    items.iter().fold(None, |best: Option<(T, f64)>, (t, v)| match best {
        Some((_, b)) if b <= *v => best,
        _ => Some((t.clone(), *v)),
    })
}

/// Dual-norm evaluator that warm-starts each call from the previous maximizer.
///
/// The ratio `⟨g,x⟩/||x||` has no spurious local maxima, so a single ascent
/// from a nearby point recovers the global value.
struct WarmDual<'a> {
    space: &'a FunctionalFamily,
    config: SearchConfig,
    last: RefCell<Option<Vec<f64>>>,
}

impl<'a> WarmDual<'a> {
    fn new(space: &'a FunctionalFamily, config: &SearchConfig) -> Self {
        WarmDual { space, config: config.fixed(1), last: RefCell::new(None) }
    }

    fn eval(&self, g: &[f64]) -> f64 {
        if norm2(g) == 0.0 {
            return 0.0;
        }
        let warm = self.last.borrow().clone();
        let starts = match warm {
            Some(x) => vec![x, g.to_vec()],
            None => vec![g.to_vec()],
        };
        let cfg = self.config.fixed(starts.len());
        match dual_norm_search(self.space, g, &cfg, &starts) {
            Ok(r) => {
                *self.last.borrow_mut() = Some(r.point);
                r.value
            }
            Err(_) => f64::NAN,
        }
    }
}

/// Cold-start dual norm safe to call from parallel restarts.
fn dual_norm_cold(space: &FunctionalFamily, g: &[f64], config: &SearchConfig) -> f64 {
    if norm2(g) == 0.0 {
        return 0.0;
    }
    dual_norm_search(space, g, &config.fixed(1), &[g.to_vec()]).map_or(f64::NAN, |r| r.value)
}

/// `min_c ||target + Σ c_t·others_t||⋆`, with the minimizing `c`.
///
/// When `target` lies in the span of `others` to relative precision
/// [`SPAN_SNAP_TOL`], the distance is reported as exactly zero.
fn span_distance(space: &FunctionalFamily, target: &[f64], others: &[&[f64]], config: &SearchConfig) -> Result<(f64, Vec<f64>)> {
    let cols: Vec<Vec<f64>> = others.iter().map(|o| o.to_vec()).collect();
    let a = Matrix::from_rows(&cols)?.transpose();
    let neg: Vec<f64> = target.iter().map(|v| -v).collect();
    let start = a.least_squares(&neg)?;
    let mut resid = target.to_vec();
    for (c, o) in start.iter().zip(others) {
        axpy(&mut resid, *c, o);
    }
    if norm2(&resid) <= SPAN_SNAP_TOL * norm2(target) {
        return Ok((0.0, start));
    }
    let dual = WarmDual::new(space, config);
    let objective = |c: &[f64]| {
        let mut g = target.to_vec();
        for (ci, o) in c.iter().zip(others) {
            axpy(&mut g, *ci, o);
        }
        dual.eval(&g)
    };
    let r = minimize_convex_lowdim(objective, &start, 0.5, config)?;
    Ok((r.value, r.point))
}

pub fn alpha_estimate(space: &FunctionalFamily, witnesses: Option<&WitnessMap>, config: &SearchConfig) -> Result<AlphaEstimate> {
    let m = space.m();
    if m < 4 {
        return Err(Error::TooFewFunctionals(m));
    }
    let tuples = alpha_tuples(m);
    let (mode, values) = match witnesses {
        Some(map) => {
            let vals = tuples
                .iter()
                .map(|t| {
                    let w = map.get(t).ok_or(Error::MissingWitness(*t))?;
                    Ok((*t, witness_bound(space, *t, w)?))
                })
                .collect::<Result<Vec<_>>>()?;
            (AlphaMode::WitnessCertificate, vals)
        }
        None => {
            let vals = tuples
                .par_iter()
                .map(|&(i, j, k, l)| {
                    let f = |s: usize| space.functional(s - 1);
                    let (d, _) = span_distance(space, f(i), &[f(j), f(k), f(l)], config)?;
                    Ok(((i, j, k, l), d))
                })
                .collect::<Result<Vec<_>>>()?;
            (AlphaMode::NumericSearch, vals)
        }
    };
    let (worst_tuple, raw) = first_min(&values).expect("m >= 4 gives tuples");
    Ok(AlphaEstimate { value: raw.min(0.5), raw, mode, worst_tuple })
}

/// Lower bound `|fᵢ(v)|/||v||` on the distance from `fᵢ` to `span{f_j, f_k, f_l}`.
fn witness_bound(space: &FunctionalFamily, t: (usize, usize, usize, usize), w: &Witness) -> Result<f64> {
    let (i, j, k, l) = t;
    let v: Vec<f64> = match w {
        Witness::Float(v) => v.clone(),
        Witness::Exact(v) => v.iter().map(rational::to_f64).collect(),
    };
    if v.len() != space.n() {
        return Err(Error::DimensionMismatch { expected: space.n(), found: v.len() });
    }
    let numer = match w {
        Witness::Exact(v) => {
            let rows: Vec<Vec<Rational>> = match space.exact_rows() {
                Some(r) => r.to_vec(),
                None => (0..space.m())
                    .map(|s| space.functional(s).iter().map(|x| rational::from_f64(*x).expect("finite")).collect())
                    .collect(),
            };
            for s in [j, k, l] {
                let r = rational::dot(&rows[s - 1], v);
                if !r.is_zero() {
                    return Err(Error::BadWitness { tuple: t, residual: rational::to_f64(&r.abs()) });
                }
            }
            rational::to_f64(&rational::dot(&rows[i - 1], v).abs())
        }
        Witness::Float(_) => {
            let scale = norm2(&v);
            for s in [j, k, l] {
                let r = dot(space.functional(s - 1), &v);
                if r.abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::BadWitness { tuple: t, residual: r.abs() });
                }
            }
            dot(space.functional(i - 1), &v).abs()
        }
    };
    let norm = stable_power_sum(&space.values(&v), space.exponent());
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    // shave a few ulps so float rounding cannot overstate the bound
    Ok(numer / norm * (1.0 - 1e-12))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaMode {
    CoefficientCertificate,
    NumericSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaEstimate {
    pub value: f64,
    pub mode: BetaMode,
    pub worst_pair: (usize, usize),
}

/// All `(j, k)` with `j < k`, 1-based.
pub fn beta_pairs(m: usize) -> Vec<(usize, usize)> {
    (1..=m).flat_map(|j| ((j + 1)..=m).map(move |k| (j, k))).collect()
}

fn remaining(m: usize, pair: (usize, usize)) -> Vec<usize> {
    (1..=m).filter(|&i| i != pair.0 && i != pair.1).collect()
}

fn check_spanning(space: &FunctionalFamily) -> Result<()> {
    for pair in beta_pairs(space.m()) {
        let rest: Vec<Vec<f64>> = remaining(space.m(), pair).iter().map(|&i| space.functional(i - 1).to_vec()).collect();
        let spans = match space.exact_rows() {
            Some(rows) => {
                let exact: Vec<Vec<Rational>> = remaining(space.m(), pair).iter().map(|&i| rows[i - 1].clone()).collect();
                rational::rank(&exact) == space.n()
            }
            None => !rest.is_empty() && Matrix::from_rows(&rest)?.rank(crate::space::RANK_TOL) == space.n(),
        };
        if !spans {
            return Err(Error::NotSpanning(pair.0, pair.1));
        }
    }
    Ok(())
}

/// Upper bound on β: each of `f_j, f_k` written as a combination of the rest,
/// maximal absolute-coefficient sum over all pairs.
pub fn beta_certificate(space: &FunctionalFamily) -> Result<BetaEstimate> {
    check_spanning(space)?;
    let n = space.n();
    let mut sums = Vec::new();
    for pair in beta_pairs(space.m()) {
        let rest = remaining(space.m(), pair);
        let mut worst = 0.0_f64;
        for target in [pair.0, pair.1] {
            let sum = match space.exact_rows() {
                Some(rows) if rest.len() == n => {
                    let basis: Vec<Vec<Rational>> = rest.iter().map(|&i| rows[i - 1].clone()).collect();
                    let c = rational::solve_combination(&basis, &rows[target - 1])?;
                    rational::to_f64(&rational::abs_sum(&c))
                }
                _ => {
                    let cols: Vec<Vec<f64>> = rest.iter().map(|&i| space.functional(i - 1).to_vec()).collect();
                    let c = Matrix::from_rows(&cols)?.transpose().least_squares(space.functional(target - 1))?;
                    c.iter().map(|v| v.abs()).sum()
                }
            };
            worst = worst.max(sum);
        }
        sums.push((pair, worst));
    }
    let (worst_pair, value) = sums.iter().fold(((0, 0), f64::NEG_INFINITY), |b, &(p, v)| if v > b.1 { (p, v) } else { b });
    Ok(BetaEstimate { value, mode: BetaMode::CoefficientCertificate, worst_pair })
}

/// Lower bound on β: the best ratio `max(|f_j(x)|,|f_k(x)|)/max_{i∉{j,k}}|fᵢ(x)|` found on the sphere.
pub fn beta_numeric(space: &FunctionalFamily, config: &SearchConfig) -> Result<BetaEstimate> {
    check_spanning(space)?;
    let mut best = ((0, 0), f64::NEG_INFINITY);
    for pair in beta_pairs(space.m()) {
        let rest = remaining(space.m(), pair);
        for s in [pair.0, pair.1] {
            let fs = space.functional(s - 1);
            // |f_s(x)| / max_i |f_i(x)| = min_i |f_s(x)|/|f_i(x)|
            let pieces = |x: &[f64]| -> Vec<(f64, Vec<f64>)> {
                let a = dot(fs, x);
                rest.iter()
                    .map(|&i| {
                        let fi = space.functional(i - 1);
                        let b = dot(fi, x);
                        if b == 0.0 {
                            return (f64::INFINITY, vec![0.0; x.len()]);
                        }
                        let mut g: Vec<f64> = fs.iter().map(|v| a.signum() * v / b.abs()).collect();
                        axpy(&mut g, -a.abs() * b.signum() / (b * b), fi);
                        (a.abs() / b.abs(), g)
                    })
                    .collect()
            };
            let cfg = config.derive((pair.0 * 1000 + s) as u64);
            let r = maximize_min_on_sphere(pieces, space.n(), &cfg, &[fs.to_vec()])?;
            let value = vertex_snap(space, s, &rest, &r.point).map_or(r.value, |v| v.max(r.value));
            if value > best.1 {
                best = (pair, value);
            }
        }
    }
    Ok(BetaEstimate { value: best.1, mode: BetaMode::NumericSearch, worst_pair: best.0 })
}

/// Ratio `|f_s(x)| / max_i |fᵢ(x)|` at the vertex of `{|fᵢ| ≤ 1}` picked out
/// by the constraints nearly active at `x`, when that vertex is nondegenerate.
fn vertex_snap(space: &FunctionalFamily, s: usize, rest: &[usize], x: &[f64]) -> Option<f64> {
    let n = space.n();
    let mut active: Vec<(usize, f64)> = rest.iter().map(|&i| (i, dot(space.functional(i - 1), x))).collect();
    let top = active.iter().fold(0.0_f64, |m, (_, v)| m.max(v.abs()));
    if top == 0.0 {
        return None;
    }
    active.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    let chosen = active.get(..n)?;
    if chosen.iter().any(|(_, v)| v.abs() < (1.0 - 1e-3) * top) {
        return None;
    }
    let rows: Vec<Vec<f64>> = chosen.iter().map(|(i, _)| space.functional(i - 1).to_vec()).collect();
    let inv = Matrix::from_rows(&rows).ok()?.inverse().ok()?;
    let vertex = inv.mul_vec(&chosen.iter().map(|(_, v)| v.signum()).collect::<Vec<f64>>());
    let denom = rest.iter().fold(0.0_f64, |m, &i| m.max(dot(space.functional(i - 1), &vertex).abs()));
    (denom > 0.0).then(|| dot(space.functional(s - 1), &vertex).abs() / denom)
}

pub fn beta_estimate(space: &FunctionalFamily) -> Result<BetaEstimate> {
    beta_certificate(space)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CaseTag {
    NearSingle { k: usize, r0: f64 },
    NearPair { k: usize, l: usize, a0: f64, r0: f64 },
    Generic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleDistance {
    pub k: usize,
    pub r: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDistance {
    pub k: usize,
    pub l: usize,
    pub a: f64,
    pub r: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseLabel {
    pub tag: CaseTag,
    pub achieved_distance: f64,
    pub singles: Vec<SingleDistance>,
    pub pairs: Vec<PairDistance>,
}

fn leq(x: f64, threshold: LogScalar) -> bool {
    LogScalar::from_f64(x).is_ok_and(|v| v <= threshold)
}

fn geq(x: f64, threshold: LogScalar) -> bool {
    LogScalar::from_f64(x).is_ok_and(|v| v >= threshold)
}

/// `min_r ||f_k + r·f||⋆` for every `k`.
pub fn single_distances(space: &FunctionalFamily, f: &Hyperplane, config: &SearchConfig) -> Result<Vec<SingleDistance>> {
    (1..=space.m())
        .map(|k| {
            let (d, c) = span_distance(space, space.functional(k - 1), &[f.functional()], config)?;
            Ok(SingleDistance { k, r: c[0], distance: d })
        })
        .collect()
}

/// `min_{a,r} ||f_k + a·f_l + r·f||⋆` for every ordered pair `k ≠ l`.
pub fn pair_distances(space: &FunctionalFamily, f: &Hyperplane, config: &SearchConfig) -> Result<Vec<PairDistance>> {
    let pairs: Vec<(usize, usize)> = (1..=space.m())
        .flat_map(|k| (1..=space.m()).filter(move |&l| l != k).map(move |l| (k, l)))
        .collect();
    pairs
        .par_iter()
        .map(|&(k, l)| {
            let (d, c) = span_distance(space, space.functional(k - 1), &[space.functional(l - 1), f.functional()], config)?;
            Ok(PairDistance { k, l, a: c[0], r: c[1], distance: d })
        })
        .collect()
}

/// Assigns the first matching case: near a single functional (within `K`),
/// near a pair (within `L`), or generic.
pub fn classify_hyperplane(space: &FunctionalFamily, f: &Hyperplane, ledger: &EpsilonLedger, config: &SearchConfig) -> Result<CaseLabel> {
    let singles = single_distances(space, f, config)?;
    let pairs = pair_distances(space, f, config)?;
    let near_single: Vec<(usize, f64)> =
        singles.iter().enumerate().filter(|(_, s)| leq(s.distance, ledger.k)).map(|(i, s)| (i, s.distance)).collect();
    let near_pair: Vec<(usize, f64)> =
        pairs.iter().enumerate().filter(|(_, p)| leq(p.distance, ledger.l)).map(|(i, p)| (i, p.distance)).collect();
    let (tag, achieved_distance) = if let Some((i, d)) = first_min(&near_single) {
        (CaseTag::NearSingle { k: singles[i].k, r0: singles[i].r }, d)
    } else if let Some((i, d)) = first_min(&near_pair) {
        let p = &pairs[i];
        (CaseTag::NearPair { k: p.k, l: p.l, a0: p.a, r0: p.r }, d)
    } else {
        let s = singles.iter().map(|s| s.distance).fold(f64::INFINITY, f64::min);
        let p = pairs.iter().map(|p| p.distance).fold(f64::INFINITY, f64::min);
        (CaseTag::Generic, s.min(p))
    };
    Ok(CaseLabel { tag, achieved_distance, singles, pairs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    /// `"alpha/2"` or `"K*alpha/2"`.
    pub bound_name: &'static str,
    pub bound: f64,
    pub min_residual: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExclusivityReport {
    /// `Kα > 4L`.
    pub precondition: Verdict,
    /// `(k, l, a₀, r₀, distance)` of the near-pair witness, if one exists.
    pub witness: Option<(usize, usize, f64, f64, f64)>,
    pub residuals: Vec<PairResidual>,
}

impl ExclusivityReport {
    pub fn violation_found(&self) -> bool {
        self.residuals.iter().any(|r| r.violated)
    }
}

/// Searches for `(a, r)` with `||fᵢ + a·f_j + r·f||⋆` below the bound of the
/// exclusivity lemmas, given a near-pair witness for `f`.
pub fn exclusivity_check(
    space: &FunctionalFamily,
    f: &Hyperplane,
    alpha: f64,
    k_threshold: LogScalar,
    l_threshold: LogScalar,
    config: &SearchConfig,
) -> Result<ExclusivityReport> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::HypothesisViolation(vec![format!("alpha = {alpha} outside (0, 1/2]")]));
    }
    let alpha_ls = LogScalar::from_f64(alpha)?;
    let precondition = Verdict::strict("K*alpha > 4L", k_threshold * alpha_ls, LogScalar::from_f64(4.0)? * l_threshold);
    let singles = single_distances(space, f, config)?;
    let pairs = pair_distances(space, f, config)?;
    let witness = pairs
        .iter()
        .filter(|p| leq(p.distance, l_threshold) && geq(singles[p.l - 1].distance, k_threshold))
        .map(|p| (p.k, p.l, p.a, p.r, p.distance))
        .next();
    let mut residuals = Vec::new();
    if let Some((k, l, a0, r0, _)) = witness {
        let m = space.m();
        let half_alpha = alpha / 2.0;
        let k_alpha = (k_threshold * alpha_ls).to_f64() / 2.0;
        let span = 4.0 * (1.0 + a0.abs().max(r0.abs()));
        let domain = BoxDomain::cube(2, span);
        let mut run = |i: usize, j: usize, bound_name: &'static str, bound: f64| -> Result<()> {
            let (fi, fj) = (space.functional(i - 1), space.functional(j - 1));
            let residual = |c: &[f64]| {
                let mut g = fi.to_vec();
                axpy(&mut g, c[0], fj);
                axpy(&mut g, c[1], f.functional());
                dual_norm_cold(space, &g, config) - bound
            };
            let cfg = config.derive((i * 1000 + j) as u64).with_restarts(config.restarts.min(8)).with_tol(1e-12 * bound.max(f64::MIN_POSITIVE));
            let out = falsify_inequality(residual, &domain, &cfg)?;
            residuals.push(PairResidual { i, j, bound_name, bound, min_residual: out.min_residual, violated: out.counterexample.is_some() });
            Ok(())
        };
        for j in (1..=m).filter(|&j| j != k) {
            for i in (1..=m).filter(|&i| i != j && i != k && i != l) {
                run(i, j, "alpha/2", half_alpha)?;
            }
        }
        for j in (1..=m).filter(|&j| j != k && j != l) {
            run(l, j, "K*alpha/2", k_alpha)?;
        }
    }
    Ok(ExclusivityReport { precondition, witness, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{compute_ledger, LedgerInputs};

    fn corollary_family(n: usize) -> FunctionalFamily {
        let mut rows: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| rational::int(i64::from(i == j))).collect()).collect();
        rows.push(vec![rational::int(1); n]);
        rows.push((1..=n).map(|i| rational::frac(i as i64, n as i64)).collect());
        FunctionalFamily::from_rationals(rows, (n as u32 + 2).div_ceil(2)).unwrap()
    }

    fn quick() -> SearchConfig {
        SearchConfig::default().with_restarts(4)
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(alpha_tuples(4).len(), 4);
        assert_eq!(alpha_tuples(6).len(), 6 * 10);
        assert!(alpha_tuples(5).iter().all(|&(i, j, k, l)| j < k && k < l && ![j, k, l].contains(&i)));
        assert_eq!(beta_pairs(4), vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
    }

    #[test]
    fn alpha_degenerate_and_too_few() {
        let rows = Matrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let fam = FunctionalFamily::new(rows, 1).unwrap();
        let a = alpha_estimate(&fam, None, &quick()).unwrap();
        assert_eq!(a.value, 0.0);
        let e = FunctionalFamily::euclidean(3);
        assert_eq!(alpha_estimate(&e, None, &quick()), Err(Error::TooFewFunctionals(3)));
    }

    #[test]
    fn float_witness_checked() {
        let fam = corollary_family(4);
        let mut map = WitnessMap::new();
        for t in alpha_tuples(6) {
            map.insert(t, Witness::Float(vec![1.0, 0.0, 0.0, 0.0]));
        }
        assert!(matches!(alpha_estimate(&fam, Some(&map), &quick()), Err(Error::BadWitness { .. })));
        map.clear();
        assert!(matches!(alpha_estimate(&fam, Some(&map), &quick()), Err(Error::MissingWitness(_))));
    }

    #[test]
    fn beta_identity_not_spanning() {
        let e = FunctionalFamily::euclidean(4);
        assert_eq!(beta_certificate(&e), Err(Error::NotSpanning(1, 2)));
    }

    #[test]
    fn beta_corollary_sandwich() {
        let fam = corollary_family(4);
        let cert = beta_certificate(&fam).unwrap();
        assert!(cert.value <= 16.0);
        let num = beta_numeric(&fam, &quick()).unwrap();
        assert!(num.value <= cert.value + 1e-7, "{} {}", num.value, cert.value);
        assert!(num.value >= 1.0);
    }

    #[test]
    fn classify_near_single() {
        let fam = corollary_family(4);
        let c = LedgerInputs::corollary(4);
        let ledger = compute_ledger(c.n, c.m, c.p, c.alpha, c.beta).unwrap();
        let f = Hyperplane::new(&fam, &[0.25, 0.5, 0.75, 1.0], &quick()).unwrap();
        let label = classify_hyperplane(&fam, &f, &ledger, &quick()).unwrap();
        assert!(matches!(label.tag, CaseTag::NearSingle { k: 6, .. }), "{:?}", label.tag);
        assert_eq!(label.achieved_distance, 0.0);
    }
}
