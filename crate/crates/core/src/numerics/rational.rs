//! Exact rational helpers on top of `num-rational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a/b"`, an integer, or a finite decimal such as `"-0.125"`, exactly.
pub fn parse(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fractional) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fractional.is_empty() {
        return None;
    }
    if !whole.chars().chain(fractional.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{whole}{fractional}").parse().ok()?;
    let scale = exp - fractional.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

/// Exact conversion of a finite float (its binary value).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs_sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x.abs())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Integer power by repeated squaring.
pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// Rank by exact Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let factor = &a[r][c] / &pivot;
                for k in c..cols {
                    let delta = &factor * &a[rank][k];
                    a[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves the square system `Σ_k coeffs[k]·basis[k] = target` exactly.
pub fn solve_combination(basis: &[Vec<Rational>], target: &[Rational]) -> Result<Vec<Rational>> {
    let n = target.len();
    if basis.len() != n {
        return Err(Error::NotSquare { rows: n, cols: basis.len() });
    }
    // augmented matrix: column k is basis[k], last column is target
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !a[r][c].is_zero())
            .ok_or(Error::Singular { pivot: 0.0, threshold: 0.0 })?;
        a.swap(c, p);
        let pivot = a[c][c].clone();
        for k in c..=n {
            a[c][k] = &a[c][k] / &pivot;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let factor = a[r][c].clone();
                for k in c..=n {
                    let delta = &factor * &a[c][k];
                    a[r][k] -= delta;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

pub fn is_one(x: &Rational) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("1/3"), Some(frac(1, 3)));
        assert_eq!(parse(" -2/4 "), Some(frac(-1, 2)));
        assert_eq!(parse("0.125"), Some(frac(1, 8)));
        assert_eq!(parse("-1.5e2"), Some(int(-150)));
        assert_eq!(parse("2.5E-1"), Some(frac(1, 4)));
        assert_eq!(parse("7"), Some(int(7)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("abc"), None);
        assert_eq!(parse(""), None);
    }

    #[test]
    fn exact_rank_and_solve() {
        let rows = vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(1), int(1), int(0)],
        ];
        assert_eq!(rank(&rows), 2);
        let basis = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let c = solve_combination(&basis, &[int(3), int(1)]).unwrap();
        assert_eq!(c, vec![int(2), int(1)]);
    }
}
