//! Subcommand dispatch.

use projconst::bounds::{compute_ledger, corollary_bound, corollary_verdict, ledger_checks, EpsilonLedger, LedgerInputs};
use projconst::minproj::{minimal_projection_search, smoothness_gap_check};
use projconst::numerics::rational;
use projconst::optimize::{stream_rng, SearchConfig};
use projconst::params::{
    alpha_estimate, beta_certificate, beta_numeric, classify_hyperplane, exclusivity_check, AlphaEstimate, CaseTag,
};
use projconst::space::{FunctionalFamily, Hyperplane};
use projconst::verify::{
    build_corollary_space, cap_measure_mc, corollary_exact_verify, markov_chain_check, maxmin_floor, maxmin_search,
    modulus_falsify, restriction_check, vandermonde_falsify, NormSpec, MODULUS_SLACK,
};
use projconst::Error;
use rand::Rng;
use serde_json::{json, Value};

use crate::config::SpaceConfig;
use crate::error::CliError;
use crate::report::{check, log_scalar, num, nums, rational as rat, verdict, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Space,
    Params,
    Ledger,
    Classify,
    Minproj,
    Verify,
    Corollary,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Space => "space",
            Command::Params => "params",
            Command::Ledger => "ledger",
            Command::Classify => "classify",
            Command::Minproj => "minproj",
            Command::Verify => "verify",
            Command::Corollary => "corollary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    Funkcjonaly,
    Objetosc,
    Modul,
    Modul2,
    Markov,
    Vandermonde,
    Zawezenie,
}

impl Lemma {
    pub const ALL: [Lemma; 7] =
        [Lemma::Funkcjonaly, Lemma::Objetosc, Lemma::Modul, Lemma::Modul2, Lemma::Markov, Lemma::Vandermonde, Lemma::Zawezenie];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Funkcjonaly => "funkcjonaly",
            Lemma::Objetosc => "objetosc",
            Lemma::Modul => "modul",
            Lemma::Modul2 => "modul2",
            Lemma::Markov => "markov",
            Lemma::Vandermonde => "vandermonde",
            Lemma::Zawezenie => "zawezenie",
        }
    }

    pub fn parse(s: &str) -> Option<Lemma> {
        Lemma::ALL.into_iter().find(|l| l.name() == s)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub n: Option<usize>,
    pub lemma: Option<Lemma>,
}

/// Restarts used when neither the config nor the flags set them.
const DEFAULT_RESTARTS: usize = 16;
/// Restarts for the falsification suites, whose searches nest.
const VERIFY_RESTARTS: usize = 8;
const SMOOTHNESS_SAMPLES: usize = 100;
const CAP_SAMPLES: usize = 1_000_000;
const MARKOV_TRIALS: usize = 1000;
const VANDERMONDE_TRIALS: usize = 200;
const QUOTIENT_SUBSPACES: usize = 20;
const RESTRICTION_TRIALS: usize = 50;
const T_GRID: [f64; 4] = [0.2, 0.5, 1.0, 1.5];

fn search_config(config: Option<&SpaceConfig>, flags: &Flags, default_restarts: usize) -> Result<SearchConfig, CliError> {
    let mut cfg = config
        .and_then(|c| c.search)
        .unwrap_or_else(|| SearchConfig::default().with_restarts(default_restarts));
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(r) = flags.restarts {
        cfg.restarts = r;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn need_config<'a>(config: Option<&'a SpaceConfig>, command: Command) -> Result<&'a SpaceConfig, CliError> {
    config.ok_or_else(|| CliError::Usage(format!("`{}` needs --config FILE", command.name())))
}

fn corollary_n(flags: &Flags) -> Result<usize, CliError> {
    let n = flags.n.unwrap_or(4);
    if !(4..=64).contains(&n) {
        return Err(CliError::Usage(format!("--n {n} outside 4..=64")));
    }
    Ok(n)
}

fn echo_config(report: &mut Report, c: &SpaceConfig, cfg: &SearchConfig) {
    report.input("n", json!(c.n));
    report.input("m", json!(c.m));
    report.input("p", json!(c.p));
    report.input("functionals", json!(c.functionals));
    if let Some(h) = &c.hyperplane {
        report.input("hyperplane", nums(h));
    }
    if let Some(a) = c.alpha {
        report.input("alpha", num(a));
    }
    if let Some(b) = c.beta {
        report.input("beta", num(b));
    }
    echo_search(report, cfg);
}

fn echo_search(report: &mut Report, cfg: &SearchConfig) {
    report.input(
        "search",
        json!({ "seed": cfg.seed, "restarts": cfg.restarts, "max_iters": cfg.max_iters, "tol": num(cfg.tol), "adaptive": cfg.adaptive }),
    );
}

/// Runs one subcommand. Verdicts that fail leave `report.all_hold()` false;
/// errors are input problems, except certificate failures and counterexamples.
pub fn run_suite(command: Command, config: Option<&SpaceConfig>, flags: &Flags) -> Result<Report, CliError> {
    let default_restarts = if command == Command::Verify { VERIFY_RESTARTS } else { DEFAULT_RESTARTS };
    let cfg = search_config(config, flags, default_restarts)?;
    let mut report = Report::new(command.name(), cfg.seed);
    match command {
        Command::Space => space(&mut report, need_config(config, command)?, &cfg)?,
        Command::Params => params(&mut report, need_config(config, command)?, &cfg)?,
        Command::Ledger => ledger_cmd(&mut report, config, flags, &cfg)?,
        Command::Classify => classify(&mut report, need_config(config, command)?, &cfg)?,
        Command::Minproj => minproj(&mut report, need_config(config, command)?, &cfg)?,
        Command::Verify => verify(&mut report, config, flags, &cfg)?,
        Command::Corollary => corollary(&mut report, corollary_n(flags)?)?,
    }
    Ok(report)
}

/// Exit code for a finished run.
pub fn exit_code(outcome: &Result<Report, CliError>) -> i32 {
    match outcome {
        Ok(r) if r.all_hold() => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}

fn hypotheses(report: &mut Report, n: usize, m: usize, p: u32) {
    let (n, m, p) = (n as f64, m as f64, f64::from(p));
    report.push(check("n >= 4", n >= 4.0, n - 4.0));
    report.push(check("m >= n + 2", m >= n + 2.0, m - n - 2.0));
    report.push(check("p >= m/2", 2.0 * p >= m, p - m / 2.0));
}

fn space(report: &mut Report, c: &SpaceConfig, cfg: &SearchConfig) -> Result<(), CliError> {
    echo_config(report, c, cfg);
    report.result("rank", json!(c.n));
    report.result("exact", json!(c.family.exact_rows().is_some()));
    report.result("exponent", json!(c.family.exponent()));
    hypotheses(report, c.n, c.m, c.p);
    Ok(())
}

fn alpha_json(a: &AlphaEstimate) -> Value {
    json!({
        "value": num(a.value),
        "raw": num(a.raw),
        "mode": format!("{:?}", a.mode),
        "worst_tuple": [a.worst_tuple.0, a.worst_tuple.1, a.worst_tuple.2, a.worst_tuple.3],
    })
}

fn params(report: &mut Report, c: &SpaceConfig, cfg: &SearchConfig) -> Result<(), CliError> {
    echo_config(report, c, cfg);
    let numeric = alpha_estimate(&c.family, None, cfg)?;
    report.result("alpha_numeric", alpha_json(&numeric));
    report.push(check("alpha > 0", numeric.value > 0.0, numeric.value));
    if let Some(w) = &c.witnesses {
        let cert = alpha_estimate(&c.family, Some(w), cfg)?;
        report.result("alpha_witness", alpha_json(&cert));
        let margin = numeric.raw + 1e-7 - cert.raw;
        report.push(check("alpha witness <= alpha numeric", margin >= 0.0, margin));
    }
    let cert = beta_certificate(&c.family)?;
    let found = beta_numeric(&c.family, cfg)?;
    report.result("beta_certificate", json!({ "value": num(cert.value), "worst_pair": [cert.worst_pair.0, cert.worst_pair.1] }));
    report.result("beta_numeric", json!({ "value": num(found.value), "worst_pair": [found.worst_pair.0, found.worst_pair.1] }));
    let margin = cert.value * (1.0 + 1e-9) - found.value;
    report.push(check("beta numeric <= beta certificate", margin >= 0.0, margin));
    Ok(())
}

/// α and β for a config: overrides first, then witnesses, then searches.
fn ledger_inputs(c: &SpaceConfig, cfg: &SearchConfig) -> Result<(LedgerInputs, Value), CliError> {
    let (alpha, alpha_source) = match c.alpha {
        Some(a) => (a, "config"),
        None => {
            let est = alpha_estimate(&c.family, c.witnesses.as_ref(), cfg)?;
            (est.value, if c.witnesses.is_some() { "witness" } else { "numeric" })
        }
    };
    let (beta, beta_source) = match c.beta {
        Some(b) => (b, "config"),
        None => (beta_certificate(&c.family)?.value, "certificate"),
    };
    let inputs = LedgerInputs { n: c.n as u32, m: c.m as u32, p: c.p, alpha, beta };
    Ok((inputs, json!({ "alpha": alpha_source, "beta": beta_source })))
}

fn ledger_json(ledger: &EpsilonLedger) -> Value {
    let mut map = serde_json::Map::new();
    for (name, value) in ledger.entries() {
        map.insert(name.to_string(), log_scalar(value));
    }
    map.insert("q".into(), num(ledger.q));
    Value::Object(map)
}

fn echo_ledger_inputs(report: &mut Report, i: &LedgerInputs) {
    report.input("ledger_inputs", json!({ "n": i.n, "m": i.m, "p": i.p, "alpha": num(i.alpha), "beta": num(i.beta) }));
}

fn push_ledger(report: &mut Report, ledger: &EpsilonLedger) -> Result<(), CliError> {
    report.result("ledger", ledger_json(ledger));
    let checks = ledger_checks(ledger)?;
    report.result("t0", log_scalar(checks.t0));
    for v in &checks.verdicts {
        report.push(verdict(v));
    }
    Ok(())
}

fn ledger_cmd(report: &mut Report, config: Option<&SpaceConfig>, flags: &Flags, cfg: &SearchConfig) -> Result<(), CliError> {
    let (inputs, corollary) = match (config, flags.n) {
        (Some(c), None) => {
            echo_config(report, c, cfg);
            let (inputs, sources) = ledger_inputs(c, cfg)?;
            report.result("sources", sources);
            (inputs, false)
        }
        (None, Some(_)) => (LedgerInputs::corollary(corollary_n(flags)? as u32), true),
        _ => return Err(CliError::Usage("`ledger` needs exactly one of --config FILE and --n N".into())),
    };
    echo_ledger_inputs(report, &inputs);
    let ledger = compute_ledger(inputs.n, inputs.m, inputs.p, inputs.alpha, inputs.beta)?;
    push_ledger(report, &ledger)?;
    if corollary {
        report.result("corollary_bound", log_scalar(corollary_bound(inputs.n)?));
        report.push(verdict(&corollary_verdict(&ledger)?));
    }
    Ok(())
}

fn hyperplane(c: &SpaceConfig, cfg: &SearchConfig) -> Result<Hyperplane, CliError> {
    let h = c.hyperplane.as_ref().ok_or_else(|| CliError::Usage("config has no \"hyperplane\"".into()))?;
    Ok(Hyperplane::new(&c.family, h, cfg)?)
}

fn tag_json(tag: &CaseTag) -> Value {
    match tag {
        CaseTag::NearSingle { k, r0 } => json!({ "kind": "near_single", "k": k, "r0": num(*r0) }),
        CaseTag::NearPair { k, l, a0, r0 } => json!({ "kind": "near_pair", "k": k, "l": l, "a0": num(*a0), "r0": num(*r0) }),
        CaseTag::Generic => json!({ "kind": "generic" }),
    }
}

fn classify(report: &mut Report, c: &SpaceConfig, cfg: &SearchConfig) -> Result<(), CliError> {
    echo_config(report, c, cfg);
    let h = hyperplane(c, cfg)?;
    let (inputs, sources) = ledger_inputs(c, cfg)?;
    echo_ledger_inputs(report, &inputs);
    report.result("sources", sources);
    let ledger = compute_ledger(inputs.n, inputs.m, inputs.p, inputs.alpha, inputs.beta)?;
    report.result("thresholds", json!({ "K": log_scalar(ledger.k), "L": log_scalar(ledger.l) }));
    let label = classify_hyperplane(&c.family, &h, &ledger, cfg)?;
    report.result("tag", tag_json(&label.tag));
    report.result("achieved_distance", num(label.achieved_distance));
    report.result(
        "singles",
        Value::Array(label.singles.iter().map(|s| json!({ "k": s.k, "r": num(s.r), "distance": num(s.distance) })).collect()),
    );
    report.result(
        "pairs",
        Value::Array(
            label
                .pairs
                .iter()
                .map(|p| json!({ "k": p.k, "l": p.l, "a": num(p.a), "r": num(p.r), "distance": num(p.distance) }))
                .collect(),
        ),
    );
    if matches!(label.tag, CaseTag::NearPair { .. }) {
        let ex = exclusivity_check(&c.family, &h, inputs.alpha, ledger.k, ledger.l, cfg)?;
        report.push(verdict(&ex.precondition));
        let worst = ex.residuals.iter().map(|r| r.min_residual).fold(f64::INFINITY, f64::min);
        report.push(check("no exclusivity counterexample", !ex.violation_found(), worst));
    }
    Ok(())
}

fn coordinate_hyperplanes(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect()
}

fn minproj(report: &mut Report, c: &SpaceConfig, cfg: &SearchConfig) -> Result<(), CliError> {
    echo_config(report, c, cfg);
    let targets = match &c.hyperplane {
        Some(h) => vec![h.clone()],
        None => coordinate_hyperplanes(c.n),
    };
    let mut out = Vec::new();
    for (idx, f) in targets.iter().enumerate() {
        let h = Hyperplane::new(&c.family, f, cfg)?;
        let r = minimal_projection_search(&c.family, &h, cfg)?;
        let mut entry = json!({
            "f": nums(f),
            "w": nums(&r.projection.w),
            "norm_estimate": num(r.norm_estimate),
            "crude_upper": num(r.crude_upper),
            "gap": num(r.gap),
            "outer_values": nums(&r.outer_values),
            "stable": r.stable,
            "status": format!("{:?}", r.status),
        });
        let name = |what: &str| format!("hyperplane {}: {what}", idx + 1);
        let lower = r.norm_estimate - 1.0 + 1e-10;
        report.push(check(&name("norm >= 1"), lower >= 0.0, lower));
        report.push(check(&name("outer runs agree"), r.stable, projconst::minproj::STABILITY_TOL - (r.outer_values[0] - r.outer_values[1]).abs()));
        match smoothness_gap_check(&c.family, &r, SMOOTHNESS_SAMPLES, &cfg.derive(idx as u64)) {
            Ok(s) => {
                entry["smoothness"] = json!({
                    "epsilon": num(s.epsilon),
                    "t0": num(s.t0),
                    "gap_bound": num(s.gap_bound),
                    "radius_bound": num(s.radius_bound),
                    "max_sampled": num(s.max_sampled),
                    "worst_case_margin": num(s.worst_case_margin),
                    "norm_w": num(s.norm_w),
                    "samples": s.samples,
                });
                report.push(check(&name("smoothness gap"), true, s.worst_case_margin));
            }
            Err(Error::ViolationFound { sample, detail }) => {
                entry["smoothness"] = json!({ "violation": detail, "sample": nums(&sample) });
                report.push(check(&name("smoothness gap"), false, f64::NAN));
            }
            Err(e) => return Err(e.into()),
        }
        out.push(entry);
    }
    report.result("projections", Value::Array(out));
    Ok(())
}

fn verify(report: &mut Report, config: Option<&SpaceConfig>, flags: &Flags, cfg: &SearchConfig) -> Result<(), CliError> {
    let family = match config {
        Some(c) => {
            echo_config(report, c, cfg);
            c.family.clone()
        }
        None => {
            let n = corollary_n(flags)?;
            report.input("n", json!(n));
            echo_search(report, cfg);
            build_corollary_space(n)?
        }
    };
    let lemmas: Vec<Lemma> = flags.lemma.map_or_else(|| Lemma::ALL.to_vec(), |l| vec![l]);
    report.input("lemmas", json!(lemmas.iter().map(|l| l.name()).collect::<Vec<_>>()));
    for lemma in lemmas {
        let value = match lemma {
            Lemma::Funkcjonaly => funkcjonaly(report, &family, cfg)?,
            Lemma::Objetosc => objetosc(report, cfg.seed)?,
            Lemma::Modul => modul(report, cfg)?,
            Lemma::Modul2 => modul2(report, cfg)?,
            Lemma::Markov => markov(report, cfg)?,
            Lemma::Vandermonde => {
                let v = vandermonde_falsify(VANDERMONDE_TRIALS, 8, cfg.seed)?;
                report.push(check("vandermonde: inverse norm <= bound", v.violations == 0, 1.0 - v.max_ratio));
                json!({ "trials": v.trials, "max_ratio": num(v.max_ratio), "violations": v.violations })
            }
            Lemma::Zawezenie => {
                let r = restriction_check(&family, RESTRICTION_TRIALS, cfg)?;
                report.push(check("zawezenie: restricted norm >= distance", r.violations == 0, r.min_slack));
                json!({ "trials": r.trials, "min_slack": num(r.min_slack), "violations": r.violations })
            }
        };
        report.result(lemma.name(), value);
    }
    Ok(())
}

fn funkcjonaly(report: &mut Report, family: &FunctionalFamily, cfg: &SearchConfig) -> Result<Value, CliError> {
    let r = maxmin_search(family, None, cfg)?;
    let floor = maxmin_floor(family.n(), family.m());
    report.push(check("funkcjonaly: certified max-min >= floor", r.certified_value >= floor, r.certified_value - floor));
    Ok(json!({
        "point": nums(&r.point),
        "value": num(r.value),
        "certified_value": num(r.certified_value),
        "floor": num(floor),
        "dual_norms": nums(&r.dual_norms),
        "dual_upper": nums(&r.dual_upper),
    }))
}

fn objetosc(report: &mut Report, seed: u64) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let mut worst = f64::INFINITY;
    let mut exact_worst = f64::INFINITY;
    for n in 3..=6 {
        for (i, t) in [0.05, 0.1, 0.2, 0.5].into_iter().enumerate() {
            let s = cap_measure_mc(n, t, CAP_SAMPLES, seed.wrapping_add((n * 16 + i) as u64))?;
            let bound = t * (n as f64 - 1.0);
            worst = worst.min(bound + 3.0 * s.std_error - s.estimate);
            if n == 3 {
                // the slab |x₁| ≤ t has measure exactly t on S²
                exact_worst = exact_worst.min(3.0 * s.std_error - (s.estimate - t).abs());
            }
            rows.push(json!({ "n": n, "t": num(t), "estimate": num(s.estimate), "std_error": num(s.std_error), "bound": num(bound) }));
        }
    }
    report.push(check("objetosc: cap measure <= t(n-1)", worst >= 0.0, worst));
    report.push(check("objetosc: n = 3 matches t", exact_worst >= 0.0, exact_worst));
    Ok(json!({ "samples": CAP_SAMPLES, "grid": rows }))
}

fn probes_json(probes: &[projconst::verify::ModulusProbe]) -> Value {
    Value::Array(
        probes
            .iter()
            .map(|p| {
                let mut v = json!({ "t": num(p.t), "delta_upper": num(p.delta_upper), "bound": num(p.bound), "violated": p.violated });
                if let Some(d) = p.parent_delta {
                    v["parent_delta"] = num(d);
                }
                v
            })
            .collect(),
    )
}

fn modul(report: &mut Report, cfg: &SearchConfig) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let (mut worst, mut closed_form) = (f64::INFINITY, 0.0_f64);
    for q in [1.2, 1.5, 2.0] {
        for d in 2..=4 {
            let probes = modulus_falsify(&NormSpec::Lq { q, d }, &T_GRID, &cfg.derive((q * 10.0) as u64 * 16 + d as u64))?;
            for p in &probes {
                worst = worst.min(p.delta_upper - p.bound + MODULUS_SLACK);
                if q == 2.0 {
                    closed_form = closed_form.max((p.delta_upper - (1.0 - (1.0 - p.t * p.t / 4.0).sqrt())).abs());
                }
            }
            rows.push(json!({ "q": num(q), "d": d, "probes": probes_json(&probes) }));
        }
    }
    report.push(check("modul: no witness below (q-1)t^2/8", worst >= 0.0, worst));
    report.push(check("modul: q = 2 matches 1 - sqrt(1 - t^2/4)", closed_form <= 1e-6, 1e-6 - closed_form));
    Ok(Value::Array(rows))
}

fn modul2(report: &mut Report, cfg: &SearchConfig) -> Result<Value, CliError> {
    let mut rng = stream_rng(cfg.seed, 0x30d2);
    let mut rows = Vec::new();
    let mut worst = f64::INFINITY;
    for s in 0..QUOTIENT_SUBSPACES {
        let d = 3 + s % 2;
        let q = [1.2, 1.5, 2.0][s % 3];
        let dim = 1 + rng.gen_range(0..d - 2);
        let basis: Vec<Vec<f64>> = (0..dim).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let spec = NormSpec::Quotient { q, d, basis: basis.clone() };
        let probes = modulus_falsify(&spec, &[0.5, 1.0], &cfg.derive(s as u64))?;
        for p in &probes {
            worst = worst.min(p.delta_upper - p.bound + MODULUS_SLACK);
        }
        rows.push(json!({ "q": num(q), "d": d, "basis": basis.iter().map(|b| nums(b)).collect::<Vec<_>>(), "probes": probes_json(&probes) }));
    }
    report.push(check("modul2: quotient witnesses stay above (q-1)t^2/8", worst >= 0.0, worst));
    Ok(Value::Array(rows))
}

fn markov(report: &mut Report, cfg: &SearchConfig) -> Result<Value, CliError> {
    let combos: Vec<(usize, usize)> = (1..=8).flat_map(|d| (1..=d.min(4)).map(move |k| (d, k))).collect();
    let per = MARKOV_TRIALS.div_ceil(combos.len());
    let mut rows = Vec::new();
    let (mut violations, mut worst, mut trials) = (0, f64::INFINITY, 0);
    for (d, k) in combos {
        let r = markov_chain_check(d, k, per, &cfg.derive((d * 16 + k) as u64))?;
        violations += r.violations;
        trials += r.trials;
        worst = worst.min(r.bound - r.max_ratio);
        rows.push(json!({
            "degree": d, "k": k, "trials": r.trials, "bound": num(r.bound),
            "max_ratio": num(r.max_ratio), "chebyshev_ratio": num(r.chebyshev_ratio), "violations": r.violations,
        }));
    }
    report.push(check("markov: iterated bound holds", violations == 0, worst));
    Ok(json!({ "trials": trials, "cases": rows }))
}

fn corollary(report: &mut Report, n: usize) -> Result<(), CliError> {
    report.input("n", json!(n));
    match corollary_exact_verify(n) {
        Ok(cert) => {
            report.result("alpha_bound", rat(&cert.alpha_bound));
            report.result("beta_bound", rat(&cert.beta_bound));
            report.result("min_ratio_pow", rat(&cert.min_ratio_pow()));
            report.result("max_abs_sum", rat(&cert.max_abs_sum()));
            report.result("alpha_witnesses", json!(cert.alpha_records().count()));
            report.result("beta_combinations", json!(cert.beta_records().count()));
            let alpha_margin = rational::to_f64(&(&cert.alpha_bound - rational::frac(1, 2 * n as i64)));
            report.push(check("alpha >= 1/(2n)", alpha_margin >= 0.0, alpha_margin));
            let beta_margin = rational::to_f64(&(rational::int((n * n) as i64) - &cert.max_abs_sum()));
            report.push(check("beta <= n^2", beta_margin >= 0.0, beta_margin));
        }
        Err(Error::CertificateFailure { bullet, indices, residual }) => {
            report.result("failure", json!({ "bullet": bullet, "indices": indices, "residual": residual }));
            report.push(check("exact certificate", false, f64::NAN));
        }
        Err(e) => return Err(e.into()),
    }
    let inputs = LedgerInputs::corollary(n as u32);
    echo_ledger_inputs(report, &inputs);
    let ledger = compute_ledger(inputs.n, inputs.m, inputs.p, inputs.alpha, inputs.beta)?;
    push_ledger(report, &ledger)?;
    report.result("eps0", log_scalar(ledger.eps0));
    report.result("corollary_bound", log_scalar(corollary_bound(inputs.n)?));
    report.push(verdict(&corollary_verdict(&ledger)?));
    Ok(())
}
