//! Searches against independent brute-force oracles: a dense sphere grid with
//! local zoom for `n = 3`, and LP vertex enumeration for β.

use projconst::minproj::{projection_norm_estimate, Projection};
use projconst::numerics::{dot, Matrix};
use projconst::optimize::{maximize_on_sphere, SearchConfig};
use projconst::params::{beta_certificate, beta_numeric, beta_pairs};
use projconst::space::{FunctionalFamily, Hyperplane};
use projconst::verify::build_corollary_space;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: usize = 1_000_000;

fn from_angles(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Max over `S²` by a Fibonacci grid of 10⁶ points, then nested angular grids
/// around the best point.
fn sphere_max(h: impl Fn(&[f64]) -> f64) -> f64 {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let (mut best, mut angles) = (f64::NEG_INFINITY, (0.0, 0.0));
    for i in 0..GRID {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / GRID as f64;
        let theta = z.acos();
        let phi = golden * i as f64;
        let v = h(&from_angles(theta, phi));
        if v > best {
            best = v;
            angles = (theta, phi);
        }
    }
    let mut width = 0.01;
    for _ in 0..14 {
        let (t0, p0) = angles;
        for a in -20..=20 {
            for b in -20..=20 {
                let (t, p) = (t0 + width * f64::from(a) / 20.0, p0 + width * f64::from(b) / 20.0);
                let v = h(&from_angles(t, p));
                if v > best {
                    best = v;
                    angles = (t, p);
                }
            }
        }
        width /= 4.0;
    }
    best
}

fn random_family(rng: &mut ChaCha8Rng, m: usize, p: u32) -> FunctionalFamily {
    let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    FunctionalFamily::new(Matrix::from_rows(&rows).unwrap(), p).unwrap()
}

#[test]
fn sphere_search_matches_grid_on_quartic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let a: Vec<[f64; 3]> = (0..4).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        // Σ (aᵢ·x)⁴ on the sphere has several local maxima
        let h = |x: &[f64]| a.iter().map(|ai| dot(ai, x).powi(4)).sum::<f64>();
        let g = |x: &[f64]| {
            let mut out = vec![0.0; 3];
            for ai in &a {
                let s = 4.0 * dot(ai, x).powi(3);
                out.iter_mut().zip(ai).for_each(|(o, v)| *o += s * v);
            }
            out
        };
        let want = sphere_max(h);
        let got = maximize_on_sphere(h, g, 3, &SearchConfig::default()).unwrap();
        assert!((got.value - want).abs() <= 1e-6, "{} vs {want}", got.value);
    }
}

#[test]
fn projection_norm_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = SearchConfig::default();
    for trial in 0..3 {
        let space = random_family(&mut rng, 5, 2);
        let f: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let hyper = Hyperplane::new(&space, &f, &cfg).unwrap();
        let mut w: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let fw = hyper.eval(&w);
        w.iter_mut().for_each(|v| *v /= fw);
        let proj = Projection::new(hyper.clone(), w.clone()).unwrap();
        let norm = |x: &[f64]| space.values(x).iter().map(|v| v.powi(4)).sum::<f64>().powf(0.25);
        let ratio = |x: &[f64]| {
            let fx = hyper.eval(x);
            let px: Vec<f64> = x.iter().zip(&w).map(|(a, b)| a - fx * b).collect();
            norm(&px) / norm(x)
        };
        let want = sphere_max(ratio);
        let got = projection_norm_estimate(&space, &proj, &cfg).unwrap();
        assert!((got.value - want).abs() <= 1e-6, "trial {trial}: {} vs {want}", got.value);
    }
}

/// `max f_s(x)` subject to `|fᵢ(x)| ≤ 1` for the remaining `i`, by enumerating
/// all vertices of the (bounded) feasible polytope.
fn lp_vertex_max(space: &FunctionalFamily, target: usize, rest: &[usize]) -> f64 {
    let n = space.n();
    let mut best = 0.0_f64;
    let mut choose = vec![0usize; n];
    fn combos(start: usize, depth: usize, rest: &[usize], choose: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if depth == choose.len() {
            out.push(choose.clone());
            return;
        }
        for i in start..rest.len() {
            choose[depth] = rest[i];
            combos(i + 1, depth + 1, rest, choose, out);
        }
    }
    let mut subsets = Vec::new();
    combos(0, 0, rest, &mut choose, &mut subsets);
    for subset in subsets {
        let a = Matrix::from_rows(&subset.iter().map(|&i| space.functional(i - 1).to_vec()).collect::<Vec<_>>()).unwrap();
        let Ok(inv) = a.inverse() else { continue };
        for signs in 0..(1u32 << n) {
            let rhs: Vec<f64> = (0..n).map(|b| if signs >> b & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let x = inv.mul_vec(&rhs);
            let feasible = rest.iter().all(|&i| dot(space.functional(i - 1), &x).abs() <= 1.0 + 1e-9);
            if feasible {
                best = best.max(dot(space.functional(target - 1), &x).abs());
            }
        }
    }
    best
}

fn beta_lp(space: &FunctionalFamily) -> f64 {
    let m = space.m();
    beta_pairs(m)
        .into_iter()
        .flat_map(|(j, k)| {
            let rest: Vec<usize> = (1..=m).filter(|&i| i != j && i != k).collect();
            [j, k].map(|s| lp_vertex_max(space, s, &rest))
        })
        .fold(0.0, f64::max)
}

#[test]
fn beta_sandwiches_lp_optimum() {
    let cfg = SearchConfig::default().with_restarts(8);
    let mut spaces = vec![build_corollary_space(4).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for m in [5, 6] {
        spaces.push(random_family(&mut rng, m, 3));
    }
    for space in spaces {
        let exact = beta_lp(&space);
        let upper = beta_certificate(&space).unwrap().value;
        let lower = beta_numeric(&space, &cfg).unwrap().value;
        assert!(lower <= exact + 1e-9, "numeric {lower} above LP optimum {exact}");
        assert!(exact <= upper + 1e-9, "certificate {upper} below LP optimum {exact}");
        assert!(lower >= exact - 1e-6, "numeric {lower} misses LP optimum {exact}");
    }
    // square systems: the unique combination is the LP dual optimum
    let c = build_corollary_space(4).unwrap();
    assert!((beta_lp(&c) - beta_certificate(&c).unwrap().value).abs() < 1e-9);
}
