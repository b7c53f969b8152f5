//! The epsilon ledger against a direct 200-bit evaluation of the same formulas.

mod support;

use support::big_ledger::{mul, oracle, Big};
use projconst::bounds::{compute_ledger, corollary_bound, LedgerInputs};
use projconst::numerics::LogScalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel_close(got: f64, want: f64) -> bool {
    (got - want).abs() <= 1e-6 * want.abs().max(1.0)
}

#[test]
fn corollary_ledgers_match_extended_precision() {
    let mut big = Big::new();
    for n in 4..=8 {
        let c = LedgerInputs::corollary(n);
        let ledger = compute_ledger(c.n, c.m, c.p, c.alpha, c.beta).unwrap();
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
            assert!(rel_close(got.log10_abs(), want), "n={n} {name}: {} vs {want}", got.log10_abs());
        }
        // (2(n+3)²)^{−100(n+3)²}
        let s = f64::from((n + 3) * (n + 3));
        let bound = big.pow(&big.num(2.0 * s), -100.0 * s);
        let want = big.log10(&bound);
        assert!(rel_close(corollary_bound(n).unwrap().log10_abs(), want));
        assert!(o.eps3.cmp(&o.eps0).unwrap() >= 0, "n={n}: eps3 < eps0 in extended precision");
        assert!(o.eps0.cmp(&bound).unwrap() > 0, "n={n}: eps0 below the corollary bound");
    }
}

#[test]
fn ledger_on_other_inputs() {
    let mut big = Big::new();
    for (n, m, p, alpha, beta) in [(4, 6, 3, 0.3, 2.0), (5, 8, 4, 0.01, 100.0), (6, 9, 5, 0.5, 1.5)] {
        let ledger = compute_ledger(n, m, p, alpha, beta).unwrap();
        let o = oracle(&mut big, f64::from(n), f64::from(m), f64::from(p), alpha, beta);
        let want = big.log10(&o.eps3);
        assert!(rel_close(ledger.eps3.log10_abs(), want), "{} vs {want}", ledger.eps3.log10_abs());
        let want = big.log10(&o.eps0);
        assert!(rel_close(ledger.eps0.log10_abs(), want));
    }
}

/// Comparisons of log-space products and powers agree with 200-bit evaluation.
#[test]
fn logscalar_comparisons_agree() {
    let mut big = Big::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (a, b, c) = (rng.gen_range(1e-3..1e3), rng.gen_range(1e-3..1e3), rng.gen_range(1e-3..1e3));
        let (e1, e2) = (rng.gen_range(-400.0..400.0_f64).round(), rng.gen_range(-400.0..400.0_f64).round());
        let lhs = LogScalar::from_f64(a).unwrap().powf(e1).unwrap() * LogScalar::from_f64(b).unwrap();
        let rhs = LogScalar::from_f64(c).unwrap().powf(e2).unwrap();
        let big_lhs = mul(&big.pow(&big.num(a), e1), &big.num(b));
        let big_rhs = big.pow(&big.num(c), e2);
        let want = big_lhs.cmp(&big_rhs).unwrap().signum();
        let got = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        };
        // near-ties are beyond f64 resolution either way
        let gap = (big.log10(&big_lhs) - big.log10(&big_rhs)).abs();
        if gap > 1e-9 {
            assert_eq!(got, want as i32, "{a}^{e1}*{b} vs {c}^{e2}");
        }
    }
}
