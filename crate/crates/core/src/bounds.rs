//! Log-space evaluation of the lower-bound constants and their consistency checks.

use crate::error::{Error, Result};
use crate::numerics::LogScalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerInputs {
    pub n: u32,
    pub m: u32,
    pub p: u32,
    pub alpha: f64,
    pub beta: f64,
}

impl LedgerInputs {
    /// Parameters of the explicit family on `ℝⁿ`: `m = n+2`, `p = ⌈m/2⌉`,
    /// `α = 1/(2n)`, `β = n²`.
    pub fn corollary(n: u32) -> Self {
        let m = n + 2;
        LedgerInputs { n, m, p: m.div_ceil(2), alpha: 1.0 / (2.0 * f64::from(n)), beta: f64::from(n * n) }
    }

    fn violations(&self) -> Vec<String> {
        let LedgerInputs { n, m, p, alpha, beta } = *self;
        let mut bad = Vec::new();
        if n < 4 {
            bad.push(format!("n = {n} < 4"));
        }
        if m < n + 2 {
            bad.push(format!("m = {m} < n + 2 = {}", n + 2));
        }
        if 2 * p < m {
            bad.push(format!("p = {p} < m/2 = {}", f64::from(m) / 2.0));
        }
        if !(alpha > 0.0 && alpha <= 0.5) {
            bad.push(format!("alpha = {alpha} outside (0, 1/2]"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            bad.push(format!("beta = {beta} is not a positive number"));
        }
        bad
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonLedger {
    pub inputs: LedgerInputs,
    pub eps1: LogScalar,
    pub r1: LogScalar,
    pub k: LogScalar,
    pub eps2: LogScalar,
    pub r2: LogScalar,
    pub l: LogScalar,
    pub eps3: LogScalar,
    pub r3: LogScalar,
    pub eps0: LogScalar,
    /// Conjugate exponent `2p/(2p−1)`.
    pub q: f64,
}

impl EpsilonLedger {
    /// `(name, value)` pairs in definition order.
    pub fn entries(&self) -> [(&'static str, LogScalar); 9] {
        [
            ("eps1", self.eps1),
            ("R1", self.r1),
            ("K", self.k),
            ("eps2", self.eps2),
            ("R2", self.r2),
            ("L", self.l),
            ("eps3", self.eps3),
            ("R3", self.r3),
            ("eps0", self.eps0),
        ]
    }
}

fn ln(x: f64) -> f64 {
    x.ln()
}

fn exp_ln(v: f64) -> Result<LogScalar> {
    LogScalar::from_ln(v)
}

/// `8·√(ε·p)`
fn radius(eps: LogScalar, p: f64) -> Result<LogScalar> {
    Ok(LogScalar::from_f64(8.0)? * (eps * LogScalar::from_f64(p)?).sqrt()?)
}

pub fn compute_ledger(n: u32, m: u32, p: u32, alpha: f64, beta: f64) -> Result<EpsilonLedger> {
    let inputs = LedgerInputs { n, m, p, alpha, beta };
    let bad = inputs.violations();
    if !bad.is_empty() {
        return Err(Error::HypothesisViolation(bad));
    }
    let (nf, mf, pf) = (f64::from(n), f64::from(m), f64::from(p));
    let beta2p = exp_ln(2.0 * pf * ln(beta))?;
    let common = (4.0 * pf + 4.0 * mf) * ln(alpha)
        - (8.0 * pf + 4.0 * mf + 6.0) * ln(2.0)
        - (6.0 * pf + 6.0 * mf) * ln(nf)
        - (4.0 * pf + 6.0 * mf) * ln(mf)
        - (2.0 * mf + 1.0) * ln(pf);
    let common = exp_ln(common)?;
    let inv_p = -1.0 / pf;

    let base1 = LogScalar::from_f64(mf - 1.0)?.add(&beta2p)?;
    let eps1 = base1.powf(inv_p)? * common;
    let r1 = radius(eps1, pf)?;
    let k = (r1 / LogScalar::from_f64(4.0)?).powf(1.0 / (2.0 * pf - 1.0))?;

    let two_beta2p = LogScalar::from_f64(2.0)? * beta2p;
    let base2 = LogScalar::from_f64(mf - 2.0)?.add(&two_beta2p)?;
    let eps2 = k.powf(2.0 * mf)? * base2.powf(inv_p)? * common;
    let r2 = radius(eps2, pf)?;
    let l = r2 / exp_ln(2.0 * pf * ln(2.0) + ln(2.0 * pf - 1.0))?;

    let eps3 = exp_ln(inv_p * ln(mf))?
        * l.powf(2.0 * mf)?
        * k.powf(4.0 * pf + 2.0 * mf)?
        * exp_ln(
            -(4.0 * pf + 6.0) * ln(2.0)
                - (6.0 * pf + 6.0 * mf) * ln(nf)
                - (4.0 * pf + 6.0 * mf) * ln(mf)
                - (2.0 * mf + 1.0) * ln(pf),
        )?;
    let r3 = radius(eps3, pf)?;

    let base0 = LogScalar::from_f64(mf)?.add(&two_beta2p)?;
    let inner = -6.0 * ln(alpha) + 14.0 * ln(2.0) + 12.0 * ln(nf) + 11.0 * ln(mf) + 4.0 * ln(pf);
    let eps0 = base0.powf(-7.0)? * exp_ln(-12.0 * pf * mf * inner)?;

    Ok(EpsilonLedger { inputs, eps1, r1, k, eps2, r2, l, eps3, r3, eps0, q: 2.0 * pf / (2.0 * pf - 1.0) })
}

/// `(2(n+3)²)^{−100(n+3)²}`
pub fn corollary_bound(n: u32) -> Result<LogScalar> {
    if n < 4 {
        return Err(Error::HypothesisViolation(vec![format!("n = {n} < 4")]));
    }
    let s = f64::from((n + 3) * (n + 3));
    exp_ln(-100.0 * s * (2.0 * s).ln())
}

/// A named inequality with its margin `log₁₀(lhs/rhs)`; it holds iff the margin is positive
/// (or nonnegative for non-strict comparisons).
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    pub margin_log10: f64,
}

impl Verdict {
    pub fn strict(name: &str, lhs: LogScalar, rhs: LogScalar) -> Self {
        Self::compare(name, lhs, rhs, true)
    }

    pub fn weak(name: &str, lhs: LogScalar, rhs: LogScalar) -> Self {
        Self::compare(name, lhs, rhs, false)
    }

    fn compare(name: &str, lhs: LogScalar, rhs: LogScalar, strict: bool) -> Self {
        let positive = lhs.sign() > 0 && rhs.sign() > 0;
        let margin = if positive { lhs.log10_abs() - rhs.log10_abs() } else { f64::NAN };
        let holds = positive && if strict { lhs > rhs } else { lhs >= rhs };
        Verdict { name: name.to_string(), holds, margin_log10: margin }
    }

    fn all(name: &str, parts: &[Verdict]) -> Self {
        let margin = parts.iter().map(|v| v.margin_log10).fold(f64::INFINITY, f64::min);
        Verdict { name: name.to_string(), holds: parts.iter().all(|v| v.holds), margin_log10: margin }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerChecks {
    pub t0: LogScalar,
    pub verdicts: Vec<Verdict>,
}

impl LedgerChecks {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }
}

/// `t₀ = 4·√(εp/(2+2ε))`.
pub fn t0_of(eps: LogScalar, p: f64) -> Result<LogScalar> {
    let denom = LogScalar::from_f64(2.0)?.add(&(LogScalar::from_f64(2.0)? * eps))?;
    Ok(LogScalar::from_f64(4.0)? * (eps * LogScalar::from_f64(p)? / denom).sqrt()?)
}

pub fn ledger_checks(ledger: &EpsilonLedger) -> Result<LedgerChecks> {
    let half = LogScalar::from_f64(0.5)?;
    let alpha = LogScalar::from_f64(ledger.inputs.alpha)?;
    let four = LogScalar::from_f64(4.0)?;
    let t0 = t0_of(ledger.eps1, f64::from(ledger.inputs.p))?;

    let chain = Verdict::all(
        "0 < L < K < 1/2",
        &[
            positive_verdict("L > 0", ledger.l),
            Verdict::strict("K > L", ledger.k, ledger.l),
            Verdict::strict("1/2 > K", half, ledger.k),
        ],
    );
    Ok(LedgerChecks {
        t0,
        verdicts: vec![
            Verdict::weak("eps3 >= eps0", ledger.eps3, ledger.eps0),
            chain,
            Verdict::strict("K*alpha > 4L", ledger.k * alpha, four * ledger.l),
            Verdict::weak("t0 <= 2", LogScalar::from_f64(2.0)?, t0),
        ],
    })
}

/// `x > 0`, with margin `+∞` for positive values.
fn positive_verdict(name: &str, x: LogScalar) -> Verdict {
    let holds = x.sign() > 0;
    Verdict { name: name.to_string(), holds, margin_log10: if holds { f64::INFINITY } else { f64::NEG_INFINITY } }
}

/// `1 + ε₀ > 1 + bound` for the explicit family on `ℝⁿ`.
pub fn corollary_verdict(ledger: &EpsilonLedger) -> Result<Verdict> {
    let bound = corollary_bound(ledger.inputs.n)?;
    Ok(Verdict::strict("eps0 > corollary bound", ledger.eps0, bound))
}
