//! Exact fixed-point money values.
//!
//! Unit costs and station costs are carried as integers scaled by 10^4 so
//! that cost comparisons are deterministic across platforms. Floating point
//! appears only where sampling proportions are computed (see the engine).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use thiserror::Error;

const SCALE: i64 = 10_000;
const DECIMALS: u32 = 4;

/// A non-negative money amount with four decimal digits of precision.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cost(i64);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    /// Builds a cost from hundredths (e.g. `from_centi(150)` is 1.50).
    pub fn from_centi(centi: i64) -> Cost {
        Cost(centi * (SCALE / 100))
    }

    pub fn from_int(units: i64) -> Cost {
        Cost(units * SCALE)
    }

    /// Raw scaled value; one unit equals 1/10^4.
    pub fn raw(self) -> i64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Multiplies by an integer factor (the duration bound K).
    pub fn scale_by(self, factor: u32) -> Cost {
        Cost(self.0 * i64::from(factor))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.0 += rhs.0;
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostParseError {
    #[error("empty cost value")]
    Empty,
    #[error("malformed cost value `{0}`")]
    Malformed(String),
    #[error("cost value `{0}` has more than {DECIMALS} decimal places")]
    TooPrecise(String),
}

impl FromStr for Cost {
    type Err = CostParseError;

    fn from_str(s: &str) -> Result<Cost, CostParseError> {
        if s.is_empty() {
            return Err(CostParseError::Empty);
        }
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if frac_part.len() > DECIMALS as usize {
            return Err(CostParseError::TooPrecise(s.to_string()));
        }
        let malformed = || CostParseError::Malformed(s.to_string());
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(malformed());
        }
        let units: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| malformed())?
        };
        if units < 0 {
            return Err(malformed());
        }
        let mut frac: i64 = 0;
        if !frac_part.is_empty() {
            frac = frac_part.parse().map_err(|_| malformed())?;
            if frac < 0 {
                return Err(malformed());
            }
            for _ in frac_part.len()..DECIMALS as usize {
                frac *= 10;
            }
        }
        Ok(Cost(units * SCALE + frac))
    }
}

impl fmt::Display for Cost {
    /// Prints the exact decimal value with trailing zeros trimmed,
    /// always keeping at least one fractional digit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = self.0 / SCALE;
        let mut frac = self.0 % SCALE;
        let mut digits = DECIMALS;
        while digits > 1 && frac % 10 == 0 {
            frac /= 10;
            digits -= 1;
        }
        write!(f, "{units}.{frac:0width$}", width = digits as usize)
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cost({self})")
    }
}
