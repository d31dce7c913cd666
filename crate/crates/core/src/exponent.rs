//! Time-scaling exponents `α`, carried either exactly or as a float.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced non-negative fraction `numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    numerator: u64,
    denominator: u64,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalExponent {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidParameter(
                "exponent denominator is zero".into(),
            ));
        }
        let g = gcd(numerator, denominator);
        Ok(RationalExponent {
            numerator: numerator / g,
            denominator: denominator / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// `α - 1 = n₁/n₂` in lowest terms; `n₁` is negative below one.
    pub fn minus_one(&self) -> (i64, u64) {
        (
            self.numerator as i64 - self.denominator as i64,
            self.denominator,
        )
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// The exponent in `t = τ N^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Exact(RationalExponent),
    Approx(f64),
}

impl Exponent {
    pub fn exact(numerator: u64, denominator: u64) -> Result<Self> {
        Ok(Exponent::Exact(RationalExponent::new(
            numerator,
            denominator,
        )?))
    }

    pub fn approx(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Exponent::Approx(value))
        } else {
            Err(Error::InvalidParameter(format!(
                "exponent {value} must be finite and >= 0"
            )))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Exact(r) => r.value(),
            Exponent::Approx(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<RationalExponent> {
        match self {
            Exponent::Exact(r) => Some(*r),
            Exponent::Approx(_) => None,
        }
    }

    /// True only for the exact rational `p/q` (never for a float).
    pub fn is_exactly(&self, numerator: u64, denominator: u64) -> bool {
        matches!(self, Exponent::Exact(r)
            if r.numerator as u128 * denominator as u128 == numerator as u128 * r.denominator as u128)
    }

    /// `N^{α-1}`, the factor turning `τ` into the free-evolution time
    /// between two measurements.
    ///
    /// For an exact exponent and `N = m^{n₂}` a perfect power the result is
    /// `m^{n₁}` computed in integer arithmetic, so lattice times map to
    /// lattice times without rounding drift.
    pub fn time_scale(&self, n: u64) -> f64 {
        assert!(n >= 1, "measurement count must be >= 1");
        if n == 1 {
            return 1.0;
        }
        match self {
            Exponent::Approx(v) => (n as f64).powf(v - 1.0),
            Exponent::Exact(r) => {
                let (n1, n2) = r.minus_one();
                if n1 == 0 {
                    return 1.0;
                }
                if let Some(m) = u32::try_from(n2).ok().and_then(|k| integer_root(n, k)) {
                    let power = u32::try_from(n1.unsigned_abs())
                        .ok()
                        .and_then(|e| (m as u128).checked_pow(e));
                    if let Some(power) = power {
                        let v = power as f64;
                        return if n1 > 0 { v } else { 1.0 / v };
                    }
                }
                (n as f64).powf(n1 as f64 / n2 as f64)
            }
        }
    }
}

/// `Some(m)` when `n = m^k` exactly.
pub fn integer_root(n: u64, k: u32) -> Option<u64> {
    if k == 0 {
        return None;
    }
    if k == 1 || n <= 1 {
        return Some(n);
    }
    let guess = (n as f64).powf(1.0 / k as f64).round() as u64;
    let lo = guess.saturating_sub(1);
    (lo..=guess + 1).find(|&m| (m as u128).checked_pow(k) == Some(n as u128))
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact(r) => r.fmt(f),
            Exponent::Approx(v) => write!(f, "{v:?}"),
        }
    }
}

/// `"3/2"` and `"2"` parse as exact; anything with a decimal point or an
/// exponent parses as approximate.
impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("cannot parse exponent {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u64 = num.trim().parse().map_err(|_| bad())?;
            let den: u64 = den.trim().parse().map_err(|_| bad())?;
            return Exponent::exact(num, den);
        }
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            return Exponent::exact(s.parse().map_err(|_| bad())?, 1);
        }
        Exponent::approx(s.parse().map_err(|_| bad())?)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
