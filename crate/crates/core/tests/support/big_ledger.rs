//! Direct 200-bit evaluation of the epsilon ledger: plain products and powers,
//! no log-space shortcuts.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};

const P: usize = 200;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Big {
    cc: Consts,
}

impl Big {
    pub fn new() -> Self {
        Big { cc: Consts::new().expect("constants cache") }
    }

    pub fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    pub fn pow(&mut self, base: &BigFloat, e: f64) -> BigFloat {
        base.pow(&self.num(e), P, RM, &mut self.cc)
    }

    pub fn log10(&mut self, x: &BigFloat) -> f64 {
        let ten = self.num(10.0);
        let l = x.ln(P, RM, &mut self.cc).div(&ten.ln(P, RM, &mut self.cc), P, RM);
        l.to_string().parse().expect("decimal")
    }
}

pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, P, RM)
}

fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, P, RM)
}

fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, P, RM)
}

pub struct Oracle {
    pub eps1: BigFloat,
    pub r1: BigFloat,
    pub k: BigFloat,
    pub eps2: BigFloat,
    pub r2: BigFloat,
    pub l: BigFloat,
    pub eps3: BigFloat,
    pub r3: BigFloat,
    pub eps0: BigFloat,
}

pub fn oracle(big: &mut Big, n: f64, m: f64, p: f64, alpha: f64, beta: f64) -> Oracle {
    let (bn, bm, bp) = (big.num(n), big.num(m), big.num(p));
    let two = big.num(2.0);
    let a = big.num(alpha);
    let b2p = big.pow(&big.num(beta), 2.0 * p);
    let tail = |big: &mut Big, two_exp: f64| {
        let t2 = big.pow(&two, -two_exp);
        let tn = big.pow(&bn, -(6.0 * p + 6.0 * m));
        let tm = big.pow(&bm, -(4.0 * p + 6.0 * m));
        let tp = big.pow(&bp, -(2.0 * m + 1.0));
        mul(&mul(&t2, &tn), &mul(&tm, &tp))
    };
    let radius = |big: &mut Big, eps: &BigFloat| mul(&big.num(8.0), &mul(eps, &bp).sqrt(P, RM));

    let a_pow = big.pow(&a, 4.0 * p + 4.0 * m);
    let common = mul(&a_pow, &tail(big, 8.0 * p + 4.0 * m + 6.0));
    let base1 = add(&big.num(m - 1.0), &b2p);
    let eps1 = mul(&big.pow(&base1, -1.0 / p), &common);
    let r1 = radius(big, &eps1);
    let k = big.pow(&div(&r1, &big.num(4.0)), 1.0 / (2.0 * p - 1.0));

    let base2 = add(&big.num(m - 2.0), &mul(&two, &b2p));
    let eps2 = mul(&mul(&big.pow(&k, 2.0 * m), &big.pow(&base2, -1.0 / p)), &common);
    let r2 = radius(big, &eps2);
    let l = div(&r2, &mul(&big.pow(&two, 2.0 * p), &big.num(2.0 * p - 1.0)));

    let eps3 = mul(
        &mul(&big.pow(&bm, -1.0 / p), &big.pow(&l, 2.0 * m)),
        &mul(&big.pow(&k, 4.0 * p + 2.0 * m), &tail(big, 4.0 * p + 6.0)),
    );
    let r3 = radius(big, &eps3);

    let base0 = add(&bm, &mul(&two, &b2p));
    let inner = mul(
        &mul(&big.pow(&a, -6.0), &big.pow(&two, 14.0)),
        &mul(&mul(&big.pow(&bn, 12.0), &big.pow(&bm, 11.0)), &big.pow(&bp, 4.0)),
    );
    let eps0 = mul(&big.pow(&base0, -7.0), &big.pow(&inner, -12.0 * p * m));
    Oracle { eps1, r1, k, eps2, r2, l, eps3, r3, eps0 }
}
