use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use crate::error::{Error, Result};

/// Relative magnitude below which a difference counts as catastrophic cancellation.
pub const CANCELLATION_LIMIT: f64 = 1e-10;

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Values such as `10^-6000` are routine here; they live comfortably in this
/// form while being far outside the range of `f64`.
#[derive(Debug, Clone, Copy)]
pub struct LogScalar {
    sign: i8,
    ln_mag: f64,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar { sign: 0, ln_mag: 0.0 };
    pub const ONE: LogScalar = LogScalar { sign: 1, ln_mag: 0.0 };

    /// Positive value `exp(ln_mag)`.
    pub fn from_ln(ln_mag: f64) -> Result<Self> {
        if !ln_mag.is_finite() {
            return Err(Error::NonFinite(format!("log magnitude {ln_mag}")));
        }
        Ok(LogScalar { sign: 1, ln_mag })
    }

    pub fn from_sign_ln(sign: i8, ln_mag: f64) -> Result<Self> {
        match sign.signum() {
            0 => Ok(Self::ZERO),
            s => Ok(LogScalar { sign: s, ..Self::from_ln(ln_mag)? }),
        }
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("{x}")));
        }
        if x == 0.0 {
            return Ok(Self::ZERO);
        }
        Ok(LogScalar { sign: if x > 0.0 { 1 } else { -1 }, ln_mag: x.abs().ln() })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of `|self|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_mag
        }
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs() / std::f64::consts::LN_10
    }

    pub fn log2_abs(&self) -> f64 {
        self.ln_abs() / std::f64::consts::LN_2
    }

    /// Nearest `f64`; underflows to zero and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => s as f64 * self.ln_mag.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        LogScalar { sign: self.sign.abs(), ..*self }
    }

    /// `self^e` for real `e`; the base must be nonnegative.
    pub fn powf(&self, e: f64) -> Result<Self> {
        match self.sign {
            0 if e > 0.0 => Ok(Self::ZERO),
            0 if e == 0.0 => Ok(Self::ONE),
            0 => Err(Error::NonFinite(format!("0^{e}"))),
            -1 => Err(Error::NonFinite(format!("negative base to power {e}"))),
            _ => Self::from_ln(self.ln_mag * e),
        }
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        match self.sign {
            0 => self.powf(e as f64),
            s => {
                let sign = if e % 2 == 0 { 1 } else { s };
                Self::from_sign_ln(sign, self.ln_mag * e as f64)
            }
        }
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.powf(0.5)
    }

    /// Sum by log-sum-exp. Opposite signs are a subtraction and may fail with
    /// [`Error::LossOfPrecision`].
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.sign == 0 {
            return Ok(*other);
        }
        if other.sign == 0 {
            return Ok(*self);
        }
        let (big, small) = if self.ln_mag >= other.ln_mag { (self, other) } else { (other, self) };
        let gap = small.ln_mag - big.ln_mag; // <= 0
        if big.sign == small.sign {
            return Self::from_sign_ln(big.sign, big.ln_mag + gap.exp().ln_1p());
        }
        if gap == 0.0 {
            return Ok(Self::ZERO);
        }
        // |big| - |small| = |big|·(1 - e^gap)
        let remaining = -gap.exp_m1();
        if remaining < CANCELLATION_LIMIT {
            return Err(Error::LossOfPrecision { relative: remaining });
        }
        Self::from_sign_ln(big.sign, big.ln_mag + remaining.ln())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&-*other)
    }

    /// `self / other`, failing on division by zero.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.sign == 0 {
            return Err(Error::NonFinite("division by zero".into()));
        }
        Ok(*self / *other)
    }

    /// Human-readable decimal form, e.g. `2.5e-5954`.
    pub fn to_sci_string(&self) -> String {
        if self.sign == 0 {
            return "0".into();
        }
        let l10 = self.log10_abs();
        let mut exp = l10.floor();
        let mut mant = 10f64.powf(l10 - exp);
        if mant >= 9.9995 {
            mant /= 10.0;
            exp += 1.0;
        }
        let sign = if self.sign < 0 { "-" } else { "" };
        format!("{sign}{mant:.3}e{exp:.0}")
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: LogScalar) -> LogScalar {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogScalar { sign: self.sign * rhs.sign, ln_mag: self.ln_mag + rhs.ln_mag }
    }
}

impl Div for LogScalar {
    type Output = LogScalar;

    fn div(self, rhs: LogScalar) -> LogScalar {
        assert!(rhs.sign != 0, "LogScalar division by zero");
        if self.sign == 0 {
            return Self::ZERO;
        }
        LogScalar { sign: self.sign * rhs.sign, ln_mag: self.ln_mag - rhs.ln_mag }
    }
}

impl Neg for LogScalar {
    type Output = LogScalar;

    fn neg(self) -> LogScalar {
        LogScalar { sign: -self.sign, ..self }
    }
}

impl PartialEq for LogScalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LogScalar {}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.ln_mag.total_cmp(&other.ln_mag),
                _ => other.ln_mag.total_cmp(&self.ln_mag),
            },
            o => o,
        }
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string())
    }
}

impl From<u64> for LogScalar {
    fn from(v: u64) -> Self {
        if v == 0 {
            Self::ZERO
        } else {
            LogScalar { sign: 1, ln_mag: (v as f64).ln() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(x: f64) -> LogScalar {
        LogScalar::from_f64(x).unwrap()
    }

    #[test]
    fn round_trip_and_products() {
        let a = ls(3.5);
        let b = ls(-0.25);
        assert!(((a * b).to_f64() + 0.875).abs() < 1e-15);
        assert!(((a / b).to_f64() + 14.0).abs() < 1e-13);
        assert_eq!((a * LogScalar::ZERO).sign(), 0);
        assert!((ls(2.0).powi(10).unwrap().to_f64() - 1024.0).abs() < 1e-10);
        assert_eq!(ls(-2.0).powi(3).unwrap().sign(), -1);
        assert!(ls(-2.0).powf(0.5).is_err());
    }

    #[test]
    fn addition_spans_huge_ranges() {
        let huge = LogScalar::from_ln(5000.0).unwrap();
        let sum = huge.add(&ls(7.0)).unwrap();
        assert_eq!(sum.ln_abs(), 5000.0);
        let a = ls(1.5).add(&ls(2.25)).unwrap();
        assert!((a.to_f64() - 3.75).abs() < 1e-14);
        let d = ls(1.5).sub(&ls(2.25)).unwrap();
        assert!((d.to_f64() + 0.75).abs() < 1e-14);
    }

    #[test]
    fn cancellation_is_reported() {
        let a = ls(1.0);
        let b = ls(1.0 + 1e-13);
        assert!(matches!(a.sub(&b), Err(Error::LossOfPrecision { .. })));
        assert_eq!(a.sub(&a).unwrap(), LogScalar::ZERO);
        assert!(a.sub(&ls(1.0 + 1e-6)).is_ok());
    }

    #[test]
    fn ordering_is_total() {
        let mut v = vec![ls(-3.0), ls(0.5), LogScalar::ZERO, ls(-0.1), ls(1e300), ls(2.0)];
        v.push(LogScalar::from_ln(-9000.0).unwrap());
        v.push(-LogScalar::from_ln(9000.0).unwrap());
        v.sort();
        let signs: Vec<i8> = v.iter().map(|x| x.sign()).collect();
        assert_eq!(signs, vec![-1, -1, -1, 0, 1, 1, 1, 1]);
        assert!(v[0].ln_abs() == 9000.0);
        assert!(v[4].ln_abs() == -9000.0);
    }

    #[test]
    fn sci_string() {
        assert_eq!(ls(12345.0).to_sci_string(), "1.235e4");
        assert_eq!(LogScalar::from_ln(-1000.0 * std::f64::consts::LN_10).unwrap().to_sci_string(), "1.000e-1000");
        assert_eq!(LogScalar::ZERO.to_sci_string(), "0");
    }
}
