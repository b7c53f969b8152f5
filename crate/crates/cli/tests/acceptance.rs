//! Acceptance criteria 1 to 11, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed even when all
//! criteria pass.

#[path = "../../core/tests/support/big_ledger.rs"]
mod big_ledger;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use big_ledger::{oracle, Big};
use projconst::bounds::{compute_ledger, corollary_verdict, ledger_checks, LedgerInputs};
use projconst::minproj::{minimal_projection_search, smoothness_gap_check, MinProjResult};
use projconst::numerics::Matrix;
use projconst::optimize::{stream_rng, SearchConfig};
use projconst::space::{FunctionalFamily, Hyperplane};
use projconst::verify::{
    build_corollary_space, cap_measure_mc, markov_chain_check, maxmin_floor, maxmin_search, modulus_falsify,
    vandermonde_falsify, NormSpec, MODULUS_SLACK,
};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn projconst(args: &[&str]) -> (i32, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_projconst")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("UTF-8 report"))
}

fn criterion_1() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 4..=8 {
        let start = Instant::now();
        let (code, out) = projconst(&["corollary", "--n", &n.to_string(), "--json"]);
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure!(code == 0, "n = {n}: exit {code}");
        let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let alpha = format!("1/{}", 2 * n);
        let beta = (n * n).to_string();
        ensure!(v["results"]["alpha_bound"] == Value::from(alpha.clone()), "n = {n}: alpha_bound {}", v["results"]["alpha_bound"]);
        ensure!(v["results"]["beta_bound"] == Value::from(beta.clone()), "n = {n}: beta_bound {}", v["results"]["beta_bound"]);
        ensure!(v["all_hold"] == Value::Bool(true), "n = {n}: a verdict failed");
        ensure!(took < Duration::from_secs(10), "n = {n} took {took:?}");
    }
    Ok(format!("exact certificates for n = 4..8, slowest {:.2} s", slowest.as_secs_f64()))
}

fn rel_close(got: f64, want: f64) -> bool {
    (got - want).abs() <= 1e-6 * want.abs().max(1.0)
}

fn criterion_2() -> Outcome {
    let mut big = Big::new();
    let mut compute = Duration::ZERO;
    let mut min_margin = f64::INFINITY;
    for n in 4..=8u32 {
        let c = LedgerInputs::corollary(n);
        let start = Instant::now();
        let ledger = compute_ledger(c.n, c.m, c.p, c.alpha, c.beta).map_err(|e| e.to_string())?;
        let checks = ledger_checks(&ledger).map_err(|e| e.to_string())?;
        let cor = corollary_verdict(&ledger).map_err(|e| e.to_string())?;
        compute += start.elapsed();
        let chain = checks.verdicts.iter().find(|v| v.name == "eps3 >= eps0").ok_or("missing eps3 >= eps0")?;
        ensure!(chain.holds && chain.margin_log10 > 0.0, "n = {n}: eps3 >= eps0 margin {}", chain.margin_log10);
        ensure!(cor.holds && cor.margin_log10 > 0.0, "n = {n}: corollary margin {}", cor.margin_log10);
        min_margin = min_margin.min(chain.margin_log10).min(cor.margin_log10);
        let o = oracle(&mut big, f64::from(n), f64::from(c.m), f64::from(c.p), c.alpha, c.beta);
        let pairs = [
            ("eps1", ledger.eps1, &o.eps1),
            ("R1", ledger.r1, &o.r1),
            ("K", ledger.k, &o.k),
            ("eps2", ledger.eps2, &o.eps2),
            ("R2", ledger.r2, &o.r2),
            ("L", ledger.l, &o.l),
            ("eps3", ledger.eps3, &o.eps3),
            ("R3", ledger.r3, &o.r3),
            ("eps0", ledger.eps0, &o.eps0),
        ];
        for (name, got, want) in pairs {
            let want = big.log10(want);
            ensure!(rel_close(got.log10_abs(), want), "n = {n} {name}: log10 {} vs oracle {want}", got.log10_abs());
        }
    }
    ensure!(compute < Duration::from_secs(1), "ledger took {compute:?}");
    Ok(format!("chain holds for n = 4..8, min margin {min_margin:.3e} decades, 200-bit oracle agrees"))
}

fn criterion_3() -> Outcome {
    let mut min_margin = f64::INFINITY;
    for n in 4..=8u32 {
        let c = LedgerInputs::corollary(n);
        let ledger = compute_ledger(c.n, c.m, c.p, c.alpha, c.beta).map_err(|e| e.to_string())?;
        let checks = ledger_checks(&ledger).map_err(|e| e.to_string())?;
        for name in ["0 < L < K < 1/2", "K*alpha > 4L", "t0 <= 2"] {
            let v = checks.verdicts.iter().find(|v| v.name == name).ok_or(format!("missing {name}"))?;
            ensure!(v.holds && !v.margin_log10.is_nan(), "n = {n}: {name} fails (margin {})", v.margin_log10);
            min_margin = min_margin.min(v.margin_log10);
        }
        ensure!(checks.t0.sign() >= 0, "n = {n}: t0 negative");
    }
    Ok(format!("preconditions hold for n = 4..8, min margin {min_margin:.3e} decades"))
}

fn random_hyperplane(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if f.iter().map(|v| v * v).sum::<f64>() > 1e-2 {
            return f;
        }
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig::default().with_restarts(8);
    let mut rng = stream_rng(4, 0);
    let mut worst = 0.0_f64;
    for i in 0..20 {
        let n = 3 + i % 3;
        let space = FunctionalFamily::euclidean(n);
        let f = random_hyperplane(&mut rng, n);
        let h = Hyperplane::new(&space, &f, &cfg).map_err(|e| e.to_string())?;
        let r = minimal_projection_search(&space, &h, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((r.norm_estimate - 1.0).abs());
    }
    let took = start.elapsed();
    ensure!(worst <= 1e-6, "largest |norm - 1| = {worst:e}");
    ensure!(took < Duration::from_secs(30), "took {took:?}");
    Ok(format!("20 hyperplanes, largest |norm - 1| = {worst:.1e}, {:.1} s", took.as_secs_f64()))
}

/// Projections of criterion 5, shared with criterion 6.
fn corollary_projections() -> Result<(Vec<MinProjResult>, f64, f64, Duration), String> {
    let start = Instant::now();
    let space = build_corollary_space(4).map_err(|e| e.to_string())?;
    let mut rng = stream_rng(5, 0);
    let mut targets: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    targets.extend((0..20).map(|_| random_hyperplane(&mut rng, 4)));
    let (mut results, mut min_norm, mut drift) = (Vec::new(), f64::INFINITY, 0.0_f64);
    for f in &targets {
        let cfg = SearchConfig::default().with_restarts(8);
        let h = Hyperplane::new(&space, f, &cfg).map_err(|e| e.to_string())?;
        let a = minimal_projection_search(&space, &h, &cfg).map_err(|e| e.to_string())?;
        let b = minimal_projection_search(&space, &h, &cfg.with_seed(1)).map_err(|e| e.to_string())?;
        min_norm = min_norm.min(a.norm_estimate);
        drift = drift.max((a.norm_estimate - b.norm_estimate).abs());
        results.push(a);
    }
    Ok((results, min_norm, drift, start.elapsed()))
}

fn criterion_5(data: &Result<(Vec<MinProjResult>, f64, f64, Duration), String>) -> Outcome {
    let (results, min_norm, drift, took) = data.as_ref().map_err(Clone::clone)?;
    ensure!(results.len() == 24, "expected 24 projections");
    ensure!(*min_norm > 1.0 + 1e-8, "smallest norm {min_norm}");
    ensure!(*drift <= 1e-7, "cross-seed drift {drift:e}");
    ensure!(*took < Duration::from_secs(300), "took {took:?}");
    Ok(format!("24 hyperplanes, smallest norm {min_norm:.10}, seed drift {drift:.1e}, {:.0} s", took.as_secs_f64()))
}

fn criterion_6(data: &Result<(Vec<MinProjResult>, f64, f64, Duration), String>) -> Outcome {
    let (results, ..) = data.as_ref().map_err(Clone::clone)?;
    let space = build_corollary_space(4).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::default().with_restarts(8);
    let mut min_margin = f64::INFINITY;
    for (i, r) in results.iter().enumerate() {
        let s = smoothness_gap_check(&space, r, 100, &cfg.derive(i as u64)).map_err(|e| format!("projection {i}: {e}"))?;
        min_margin = min_margin.min(s.worst_case_margin);
    }
    Ok(format!("{} projections, 100 samples each, min worst-case margin {min_margin:.3e}", results.len()))
}

fn criterion_7() -> Outcome {
    let cfg = SearchConfig::default().with_restarts(8);
    let mut spaces = vec![build_corollary_space(4).map_err(|e| e.to_string())?, build_corollary_space(5).map_err(|e| e.to_string())?];
    let mut rng = stream_rng(7, 0);
    while spaces.len() < 52 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(n..=8);
        let p = rng.gen_range(1..=3);
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let mat = Matrix::from_rows(&rows).map_err(|e| e.to_string())?;
        if let Ok(space) = FunctionalFamily::new(mat, p) {
            spaces.push(space);
        }
    }
    let mut min_ratio = f64::INFINITY;
    for (i, space) in spaces.iter().enumerate() {
        let r = maxmin_search(space, None, &cfg.derive(i as u64)).map_err(|e| e.to_string())?;
        let floor = maxmin_floor(space.n(), space.m());
        ensure!(r.certified_value >= floor, "space {i}: certified {} below floor {floor}", r.certified_value);
        min_ratio = min_ratio.min(r.certified_value / floor);
    }
    Ok(format!("52 families, smallest certified/floor ratio {min_ratio:.3}"))
}

fn criterion_8() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut worst_exact = f64::INFINITY;
    for n in 3..=6 {
        for (i, t) in [0.05, 0.1, 0.2, 0.5].into_iter().enumerate() {
            let s = cap_measure_mc(n, t, 1_000_000, (n * 16 + i) as u64).map_err(|e| e.to_string())?;
            let slack = t * (n as f64 - 1.0) + 3.0 * s.std_error - s.estimate;
            ensure!(slack >= 0.0, "n = {n}, t = {t}: estimate {} above bound", s.estimate);
            worst = worst.min(slack);
            if n == 3 {
                let z = (s.estimate - t).abs() / s.std_error;
                ensure!(z <= 3.0, "n = 3, t = {t}: estimate {} is {z:.2} std errors from t", s.estimate);
                worst_exact = worst_exact.min(3.0 - z);
            }
        }
    }
    Ok(format!("16 grid points, min slack {worst:.3e}, n = 3 within {:.2} std errors", 3.0 - worst_exact))
}

fn criterion_9() -> Outcome {
    let cfg = SearchConfig::default().with_restarts(8);
    let grid = [0.2, 0.5, 1.0, 1.5];
    let (mut worst, mut closed) = (f64::INFINITY, 0.0_f64);
    for q in [1.2, 1.5, 2.0] {
        for d in 2..=4 {
            let probes = modulus_falsify(&NormSpec::Lq { q, d }, &grid, &cfg.derive(d as u64)).map_err(|e| e.to_string())?;
            for p in probes {
                ensure!(!p.violated, "q = {q}, d = {d}, t = {}: witness {} below {}", p.t, p.delta_upper, p.bound);
                worst = worst.min(p.delta_upper - p.bound);
                if q == 2.0 {
                    closed = closed.max((p.delta_upper - (1.0 - (1.0 - p.t * p.t / 4.0).sqrt())).abs());
                }
            }
        }
    }
    ensure!(closed <= 1e-6, "q = 2 witnesses differ from the closed form by {closed:e}");
    let quotient_cfg = cfg.with_restarts(2);
    let mut rng = stream_rng(9, 0);
    for s in 0..20 {
        let d = 3 + s % 2;
        let q = [1.2, 1.5, 2.0][s % 3];
        let dim = rng.gen_range(1..=d - 2);
        let basis: Vec<Vec<f64>> = (0..dim).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let probes = modulus_falsify(&NormSpec::Quotient { q, d, basis }, &[0.5, 1.0], &quotient_cfg.derive(s as u64)).map_err(|e| e.to_string())?;
        for p in probes {
            ensure!(p.delta_upper >= p.bound - MODULUS_SLACK, "subspace {s}, t = {}: quotient witness {} below {}", p.t, p.delta_upper, p.bound);
        }
    }
    Ok(format!("no counterexample, min margin {worst:.3e}, q = 2 closed-form error {closed:.1e}, 20 quotients"))
}

fn criterion_10() -> Outcome {
    let v = vandermonde_falsify(200, 8, 10).map_err(|e| e.to_string())?;
    ensure!(v.violations == 0, "{} Vandermonde violations, max ratio {}", v.violations, v.max_ratio);
    let cfg = SearchConfig::default().with_seed(10);
    let combos: Vec<(usize, usize)> = (1..=8).flat_map(|d| (1..=d.min(4)).map(move |k| (d, k))).collect();
    let per = 1000usize.div_ceil(combos.len());
    let (mut trials, mut worst) = (0, 0.0_f64);
    for (d, k) in combos {
        let r = markov_chain_check(d, k, per, &cfg.derive((d * 16 + k) as u64)).map_err(|e| e.to_string())?;
        ensure!(r.violations == 0, "degree {d}, k = {k}: {} violations", r.violations);
        trials += r.trials;
        worst = worst.max(r.max_ratio / r.bound);
    }
    ensure!(trials >= 1000, "only {trials} polynomials");
    Ok(format!("Vandermonde max ratio {:.6}, {trials} polynomials with max ratio/bound {worst:.3e}", v.max_ratio))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("corollary4.json");
    let config = r#"{"n": 4, "m": 6, "p": 3,
        "functionals": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1], ["1/4", "1/2", "3/4", 1]],
        "hyperplane": [1, -2, "1/2", 3], "alpha": "1/8", "beta": 16}"#;
    std::fs::write(&path, config).map_err(|e| e.to_string())?;
    let file = path.to_str().ok_or("temp path is not UTF-8")?;
    let suite: Vec<Vec<&str>> = vec![
        vec!["corollary", "--n", "4"],
        vec!["ledger", "--n", "6"],
        vec!["space", "--config", file],
        vec!["ledger", "--config", file],
        vec!["classify", "--config", file, "--restarts", "2"],
        vec!["minproj", "--config", file, "--restarts", "4"],
        vec!["verify", "--lemma", "funkcjonaly"],
        vec!["verify", "--lemma", "objetosc"],
        vec!["verify", "--lemma", "modul", "--restarts", "2"],
        vec!["verify", "--lemma", "modul2", "--restarts", "2"],
        vec!["verify", "--lemma", "markov"],
        vec!["verify", "--lemma", "vandermonde"],
        vec!["verify", "--lemma", "zawezenie", "--restarts", "4"],
    ];
    let mut bytes = 0;
    for args in &suite {
        let mut full = args.clone();
        full.extend(["--json", "--seed", "11"]);
        let (c1, a) = projconst(&full);
        let (c2, b) = projconst(&full);
        ensure!(c1 == c2, "{args:?}: exit codes {c1} and {c2}");
        ensure!(!a.is_empty() && a == b, "{args:?}: reports differ");
        bytes += a.len();
    }
    Ok(format!("{} commands run twice, {bytes} report bytes identical", suite.len()))
}

fn run(index: usize, criterion: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(criterion));
    let took = start.elapsed().as_secs_f64();
    let (verdict, detail) = match outcome {
        Ok(Ok(detail)) => ("PASS", detail),
        Ok(Err(detail)) => ("FAIL", detail),
        Err(_) => ("FAIL", "panicked".to_owned()),
    };
    println!("criterion {index:>2}: {verdict}  {detail} [{took:.1} s]");
    verdict == "PASS"
}

fn main() {
    let projections = std::cell::OnceCell::new();
    let shared = || projections.get_or_init(|| catch_unwind(corollary_projections).unwrap_or_else(|_| Err("projection search panicked".into())));
    let results = [
        run(1, criterion_1),
        run(2, criterion_2),
        run(3, criterion_3),
        run(4, criterion_4),
        run(5, || criterion_5(shared())),
        run(6, || criterion_6(shared())),
        run(7, criterion_7),
        run(8, criterion_8),
        run(9, criterion_9),
        run(10, criterion_10),
        run(11, criterion_11),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 11 acceptance criteria passed");
}
