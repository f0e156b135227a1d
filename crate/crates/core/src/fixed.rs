//! Exact decimal fixed-point numbers with a resolution of one millionth.
//!
//! Occurrence weights, block sizes and the recurrence base all live in this
//! representation so that sums are exact and equality against the recurrence
//! base needs no tolerance.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GeaError;

/// Number of raw units per 1.0.
pub const SCALE: i64 = 1_000_000;
const DIGITS: usize = 6;

/// A signed decimal stored as an integer count of millionths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fixed(i64);

impl Fixed {
    pub const ZERO: Fixed = Fixed(0);
    pub const ONE: Fixed = Fixed(SCALE);

    #[inline]
    pub const fn from_raw(raw: i64) -> Self {
        Fixed(raw)
    }

    #[inline]
    pub const fn raw(self) -> i64 {
        self.0
    }

    pub const fn from_int(v: i64) -> Self {
        Fixed(v * SCALE)
    }

    /// Rounds `v` to the nearest millionth, halves away from zero.
    pub fn from_f64(v: f64) -> Result<Self, GeaError> {
        let scaled = (v * SCALE as f64).round();
        if !scaled.is_finite() || scaled.abs() >= i64::MAX as f64 {
            return Err(GeaError::InvalidNumber(v.to_string()));
        }
        Ok(Fixed(scaled as i64))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn is_integral(self) -> bool {
        self.0 % SCALE == 0
    }

    /// Integer part, if the value has no fractional digits.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integral().then_some(self.0 / SCALE)
    }

    pub fn checked_add(self, other: Fixed) -> Option<Fixed> {
        self.0.checked_add(other.0).map(Fixed)
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0 + rhs.0)
    }
}

impl AddAssign for Fixed {
    fn add_assign(&mut self, rhs: Fixed) {
        self.0 += rhs.0;
    }
}

/// Scaling by an integer count (e.g. `n · r`).
impl Mul<i64> for Fixed {
    type Output = Fixed;
    fn mul(self, rhs: i64) -> Fixed {
        Fixed(self.0 * rhs)
    }
}

impl Sum for Fixed {
    fn sum<I: Iterator<Item = Fixed>>(iter: I) -> Fixed {
        iter.fold(Fixed::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Fixed> for Fixed {
    fn sum<I: Iterator<Item = &'a Fixed>>(iter: I) -> Fixed {
        iter.copied().sum()
    }
}

impl FromStr for Fixed {
    type Err = GeaError;

    /// Parses a plain decimal (`2`, `-0.5`, `.25`, `3.`). Digits past the
    /// sixth decimal place are rounded half away from zero.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeaError::InvalidNumber(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int_val: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let mut frac_val: i64 = 0;
        for (i, b) in frac_part.bytes().take(DIGITS).enumerate() {
            frac_val += i64::from(b - b'0') * 10i64.pow((DIGITS - 1 - i) as u32);
        }
        if let Some(b) = frac_part.as_bytes().get(DIGITS) {
            if *b >= b'5' {
                frac_val += 1;
            }
        }
        let raw = int_val
            .checked_mul(SCALE)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ok(Fixed(if neg { -raw } else { raw }))
    }
}

impl fmt::Display for Fixed {
    /// Shortest exact decimal, always with at least one fractional digit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let int = abs / SCALE as u64;
        let frac = abs % SCALE as u64;
        let mut digits = format!("{frac:06}");
        while digits.len() > 1 && digits.ends_with('0') {
            digits.pop();
        }
        write!(f, "{sign}{int}.{digits}")
    }
}
