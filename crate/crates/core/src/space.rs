//! The space `(ℝⁿ, ||·||)` with `||x|| = (Σᵢ|fᵢ(x)|^{2p})^{1/2p}`, its dual,
//! restricted and quotient norms, and supporting functionals.
//!
//! Functionals are represented by their coefficient vectors: `g(x) = ⟨g, x⟩`.

use crate::error::{Error, Result};
use crate::numerics::{axpy, dot, norm2, null_space_basis, rational, stable_power_sum, Matrix, Rational};
use crate::optimize::{maximize_on_sphere_from, minimize_convex_lowdim, SearchConfig, SearchResult};

/// Relative tolerance of the numeric rank test on the functional matrix.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalFamily {
    p: u32,
    rows: Matrix,
    exact: Option<Vec<Vec<Rational>>>,
}

impl FunctionalFamily {
    /// Family with functionals given by the rows of `rows`.
    pub fn new(rows: Matrix, p: u32) -> Result<Self> {
        validate(&rows, p)?;
        let rank = rows.rank(RANK_TOL);
        if rank != rows.cols() {
            return Err(Error::RankDeficient { rank, expected: rows.cols() });
        }
        Ok(FunctionalFamily { p, rows, exact: None })
    }

    /// Family with exact rational entries; the rank test is exact.
    pub fn from_rationals(rows: Vec<Vec<Rational>>, p: u32) -> Result<Self> {
        let float: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(rational::to_f64).collect()).collect();
        let matrix = Matrix::from_rows(&float)?;
        validate(&matrix, p)?;
        if rows.iter().any(|r| r.iter().all(num_traits::Zero::is_zero)) {
            return Err(Error::InvalidFamily("zero functional".into()));
        }
        let rank = rational::rank(&rows);
        if rank != matrix.cols() {
            return Err(Error::RankDeficient { rank, expected: matrix.cols() });
        }
        Ok(FunctionalFamily { p, rows: matrix, exact: Some(rows) })
    }

    /// Coordinate functionals with `p = 1`: the Euclidean space `ℓ₂ⁿ`.
    pub fn euclidean(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| rational::int(i64::from(i == j))).collect())
            .collect();
        FunctionalFamily::from_rationals(rows, 1).expect("identity family is valid")
    }

    pub fn n(&self) -> usize {
        self.rows.cols()
    }

    pub fn m(&self) -> usize {
        self.rows.rows()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// The even exponent `2p`.
    pub fn exponent(&self) -> u32 {
        2 * self.p
    }

    pub fn functionals(&self) -> &Matrix {
        &self.rows
    }

    pub fn functional(&self, i: usize) -> &[f64] {
        self.rows.row(i)
    }

    pub fn exact_rows(&self) -> Option<&[Vec<Rational>]> {
        self.exact.as_deref()
    }

    /// `(f₁(x), …, f_m(x))`.
    pub fn values(&self, x: &[f64]) -> Vec<f64> {
        self.rows.mul_vec(x)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: x.len() });
        }
        Ok(())
    }
}

fn validate(rows: &Matrix, p: u32) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidFamily("p must be a positive integer".into()));
    }
    if rows.rows() == 0 || rows.cols() == 0 {
        return Err(Error::InvalidFamily("need at least one functional on a nonzero space".into()));
    }
    if let Some(i) = (0..rows.rows()).find(|&i| rows.row(i).iter().all(|v| *v == 0.0)) {
        return Err(Error::InvalidFamily(format!("functional {} is zero", i + 1)));
    }
    Ok(())
}

pub fn norm_eval(space: &FunctionalFamily, x: &[f64]) -> Result<f64> {
    space.check_dim(x)?;
    Ok(stable_power_sum(&space.values(x), space.exponent()))
}

/// Coefficients `cᵢ = fᵢ(x)^{2p−1} / ||x||^{2p−1}`, evaluated scale-free.
fn gradient_coefficients(space: &FunctionalFamily, x: &[f64]) -> Result<Vec<f64>> {
    let vals = space.values(x);
    let scale = vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let e = space.exponent() as i32;
    let s: f64 = vals.iter().map(|v| (v / scale).powi(e)).sum();
    let denom = s.powf(1.0 - 1.0 / f64::from(space.exponent()));
    Ok(vals.iter().map(|v| (v / scale).powi(e - 1) / denom).collect())
}

pub fn norm_gradient(space: &FunctionalFamily, x: &[f64]) -> Result<Vec<f64>> {
    space.check_dim(x)?;
    let c = gradient_coefficients(space, x)?;
    Ok(space.functionals().tr_mul_vec(&c))
}

/// `f_y(x) = ||y||^{−(2p−1)} Σᵢ fᵢ(y)^{2p−1} fᵢ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunctional {
    pub base_point: Vec<f64>,
    /// Weights on `f₁, …, f_m`.
    pub coefficients: Vec<f64>,
}

impl SupportFunctional {
    /// Coefficient vector in `ℝⁿ`.
    pub fn vector(&self, space: &FunctionalFamily) -> Vec<f64> {
        space.functionals().tr_mul_vec(&self.coefficients)
    }

    pub fn eval(&self, space: &FunctionalFamily, x: &[f64]) -> f64 {
        dot(&self.coefficients, &space.values(x))
    }
}

pub fn supporting_functional(space: &FunctionalFamily, y: &[f64]) -> Result<SupportFunctional> {
    space.check_dim(y)?;
    let coefficients = gradient_coefficients(space, y)?;
    Ok(SupportFunctional { base_point: y.to_vec(), coefficients })
}

/// Config used by [`dual_norm`] and [`restricted_dual_norm`].
pub fn default_config() -> SearchConfig {
    SearchConfig::default()
}

/// `g(x)/||x||` restricted to `span(basis)` and its gradient in basis coordinates.
fn ratio_objective<'a>(
    space: &'a FunctionalFamily,
    g: &'a [f64],
    basis: Option<&'a [Vec<f64>]>,
) -> (impl Fn(&[f64]) -> f64 + Sync + 'a, impl Fn(&[f64]) -> Vec<f64> + Sync + 'a) {
    let lift = move |c: &[f64]| -> Vec<f64> {
        match basis {
            None => c.to_vec(),
            Some(b) => {
                let mut x = vec![0.0; space.n()];
                for (ci, bi) in c.iter().zip(b) {
                    axpy(&mut x, *ci, bi);
                }
                x
            }
        }
    };
    let value = move |c: &[f64]| {
        let x = lift(c);
        let r = stable_power_sum(&space.values(&x), space.exponent());
        if r == 0.0 {
            0.0
        } else {
            dot(g, &x) / r
        }
    };
    let gradient = move |c: &[f64]| {
        let x = lift(c);
        let r = stable_power_sum(&space.values(&x), space.exponent());
        let Ok(coef) = gradient_coefficients(space, &x) else {
            return vec![0.0; c.len()];
        };
        let ng = space.functionals().tr_mul_vec(&coef);
        let gx = dot(g, &x);
        let full: Vec<f64> = g.iter().zip(&ng).map(|(gi, ni)| gi / r - gx * ni / (r * r)).collect();
        match basis {
            None => full,
            Some(b) => b.iter().map(|bi| dot(bi, &full)).collect(),
        }
    };
    (value, gradient)
}

/// `max_{||x||=1} ⟨g, x⟩` by multi-start ascent, with optional warm starts.
///
/// The objective `⟨g,x⟩/||x||` has convex superlevel cones, so every local
/// maximum on the sphere is global and nested callers may use few restarts.
pub fn dual_norm_search(space: &FunctionalFamily, g: &[f64], config: &SearchConfig, starts: &[Vec<f64>]) -> Result<SearchResult> {
    space.check_dim(g)?;
    let (value, gradient) = ratio_objective(space, g, None);
    let mut all = Vec::with_capacity(starts.len() + 1);
    all.extend_from_slice(starts);
    if starts.is_empty() && norm2(g) > 0.0 {
        all.push(g.to_vec());
    }
    let mut r = maximize_on_sphere_from(value, gradient, space.n(), config, &all)?;
    if let Some(scale) = Some(stable_power_sum(&space.values(&r.point), space.exponent())).filter(|s| *s > 0.0) {
        r.point.iter_mut().for_each(|v| *v /= scale);
    }
    Ok(r)
}

pub fn dual_norm(space: &FunctionalFamily, g: &[f64]) -> Result<f64> {
    dual_norm_with(space, g, &default_config())
}

pub fn dual_norm_with(space: &FunctionalFamily, g: &[f64], config: &SearchConfig) -> Result<f64> {
    if norm2(g) == 0.0 {
        space.check_dim(g)?;
        return Ok(0.0);
    }
    Ok(dual_norm_search(space, g, config, &[])?.value)
}

/// Norm of `g` restricted to `ker h`.
pub fn restricted_dual_norm(space: &FunctionalFamily, g: &[f64], h: &[f64]) -> Result<f64> {
    restricted_dual_norm_with(space, g, h, &default_config())
}

pub fn restricted_dual_norm_with(space: &FunctionalFamily, g: &[f64], h: &[f64], config: &SearchConfig) -> Result<f64> {
    space.check_dim(g)?;
    space.check_dim(h)?;
    let basis = null_space_basis(h)?;
    if basis.is_empty() {
        return Ok(0.0);
    }
    let projected: Vec<f64> = basis.iter().map(|b| dot(b, g)).collect();
    if norm2(&projected) == 0.0 {
        return Ok(0.0);
    }
    let (value, gradient) = ratio_objective(space, g, Some(&basis));
    Ok(maximize_on_sphere_from(value, gradient, basis.len(), config, &[projected])?.value.max(0.0))
}

/// `min_c ||x − Σ cᵢ bᵢ||` for the norm `norm`; at most four basis vectors.
pub fn quotient_distance_by<N>(norm: N, x: &[f64], basis: &[Vec<f64>], config: &SearchConfig) -> Result<f64>
where
    N: Fn(&[f64]) -> f64,
{
    if basis.is_empty() {
        return Ok(norm(x));
    }
    let b = Matrix::from_rows(basis)?;
    if b.rank(RANK_TOL) < basis.len() {
        return Err(Error::DependentBasis);
    }
    let nx = norm2(x);
    if nx == 0.0 {
        return Ok(0.0);
    }
    let shortest = basis.iter().map(|v| norm2(v)).fold(f64::INFINITY, f64::min);
    // Euclidean projection coefficients are a good start
    let start = b.transpose().least_squares(x)?;
    let objective = |c: &[f64]| {
        let mut y = x.to_vec();
        for (ci, bi) in c.iter().zip(basis) {
            axpy(&mut y, -ci, bi);
        }
        norm(&y)
    };
    let r = minimize_convex_lowdim(objective, &start, 0.25 * nx / shortest, config)?;
    Ok(r.value.min(norm(x)))
}

pub fn quotient_distance(space: &FunctionalFamily, x: &[f64], basis: &[Vec<f64>]) -> Result<f64> {
    space.check_dim(x)?;
    for b in basis {
        space.check_dim(b)?;
    }
    let norm = |y: &[f64]| stable_power_sum(&space.values(y), space.exponent());
    quotient_distance_by(norm, x, basis, &default_config())
}

/// A hyperplane `ker f` with `f` scaled to dual norm one.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    f: Vec<f64>,
    original_dual_norm: f64,
}

impl Hyperplane {
    pub fn new(space: &FunctionalFamily, f: &[f64], config: &SearchConfig) -> Result<Self> {
        space.check_dim(f)?;
        if norm2(f) == 0.0 {
            return Err(Error::ZeroFunctional);
        }
        let d = dual_norm_with(space, f, config)?;
        Ok(Hyperplane { f: f.iter().map(|v| v / d).collect(), original_dual_norm: d })
    }

    pub fn functional(&self) -> &[f64] {
        &self.f
    }

    /// Dual norm of the functional as supplied, before scaling.
    pub fn original_dual_norm(&self) -> f64 {
        self.original_dual_norm
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.f, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::gradient_mismatch;
    use rand::{Rng, SeedableRng};

    fn family(rows: &[Vec<f64>], p: u32) -> FunctionalFamily {
        FunctionalFamily::new(Matrix::from_rows(rows).unwrap(), p).unwrap()
    }

    fn corollary4() -> FunctionalFamily {
        let mut rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| f64::from(i == j)).collect()).collect();
        rows.push(vec![1.0; 4]);
        rows.push((1..=4).map(|i| f64::from(i) / 4.0).collect());
        family(&rows, 3)
    }

    #[test]
    fn construction_rejects_bad_families() {
        let dup = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(FunctionalFamily::new(dup, 1), Err(Error::RankDeficient { rank: 1, expected: 2 }));
        let zero = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(FunctionalFamily::new(zero, 1), Err(Error::InvalidFamily(_))));
    }

    #[test]
    fn norm_examples() {
        let e = FunctionalFamily::euclidean(2);
        assert_eq!(norm_eval(&e, &[3.0, 4.0]).unwrap(), 5.0);
        let c = corollary4();
        assert_eq!(norm_eval(&c, &[0.0; 4]).unwrap(), 0.0);
        let expect = (2.0 + 0.25f64.powi(6)).powf(1.0 / 6.0);
        assert!((norm_eval(&c, &[1.0, 0.0, 0.0, 0.0]).unwrap() - expect).abs() < 1e-15);
        assert!(norm_eval(&c, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let c = corollary4();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let h = 1e-6 * norm2(&x);
            let err = gradient_mismatch(|y| norm_eval(&c, y).unwrap(), |y| norm_gradient(&c, y).unwrap(), &x, h);
            assert!(err < 1e-5, "{err}");
            let g = norm_gradient(&c, &x).unwrap();
            assert!((dot(&g, &x) - norm_eval(&c, &x).unwrap()).abs() < 1e-12);
        }
        assert_eq!(norm_gradient(&c, &[0.0; 4]), Err(Error::ZeroVector));
    }

    #[test]
    fn supporting_functional_properties() {
        let e = FunctionalFamily::euclidean(3);
        let s = supporting_functional(&e, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.vector(&e), vec![1.0, 0.0, 0.0]);
        let c = corollary4();
        let y = [0.3, -0.2, 0.9, 0.1];
        let fy = supporting_functional(&c, &y).unwrap();
        assert!((fy.eval(&c, &y) - norm_eval(&c, &y).unwrap()).abs() < 1e-14);
        assert!(dual_norm(&c, &fy.vector(&c)).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn dual_norm_examples() {
        let e = FunctionalFamily::euclidean(3);
        assert!((dual_norm(&e, &[1.0, 2.0, 2.0]).unwrap() - 3.0).abs() < 1e-10);
        let l4 = family(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], 2);
        assert!((dual_norm(&l4, &[1.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-10);
        // ℓ₄ has dual ℓ_{4/3}
        let g = [0.7, -1.3, 0.4];
        let q = 4.0 / 3.0;
        let closed = g.iter().map(|v: &f64| v.abs().powf(q)).sum::<f64>().powf(1.0 / q);
        assert!((dual_norm(&l4, &g).unwrap() - closed).abs() < 1e-8);
        assert_eq!(dual_norm(&l4, &[0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn restricted_dual_norm_examples() {
        let c = corollary4();
        let g = [0.3, 1.0, -0.5, 0.2];
        assert!(restricted_dual_norm(&c, &g, &g).unwrap() < 1e-12);
        let e = FunctionalFamily::euclidean(3);
        let r = restricted_dual_norm(&e, &[0.0, 3.0, 4.0], &[1.0, 0.0, 0.0]).unwrap();
        assert!((r - 5.0).abs() < 1e-10);
    }

    #[test]
    fn quotient_distance_examples() {
        let e = FunctionalFamily::euclidean(2);
        assert!((quotient_distance(&e, &[3.0, 4.0], &[vec![0.0, 1.0]]).unwrap() - 3.0).abs() < 1e-9);
        assert_eq!(quotient_distance(&e, &[3.0, 4.0], &[]).unwrap(), 5.0);
        let c = corollary4();
        let b = vec![vec![1.0, 2.0, 0.0, -1.0]];
        assert!(quotient_distance(&c, &[2.0, 4.0, 0.0, -2.0], &b).unwrap() < 1e-9);
        let dep = vec![vec![1.0, 0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0, 0.0]];
        assert_eq!(quotient_distance(&c, &[1.0; 4], &dep), Err(Error::DependentBasis));
    }

    #[test]
    fn hyperplane_is_normalized() {
        let c = corollary4();
        let h = Hyperplane::new(&c, &[2.0, 1.0, 0.0, -1.0], &SearchConfig::default()).unwrap();
        assert!((dual_norm(&c, h.functional()).unwrap() - 1.0).abs() < 1e-9);
        assert!(Hyperplane::new(&c, &[0.0; 4], &SearchConfig::default()).is_err());
    }
}
