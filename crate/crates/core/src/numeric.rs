//! Scalar abstractions: the float trait behind the metric kernels and the
//! exact rational threshold type.

use std::fmt;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssignOps};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::Fraction;

/// Floating-point scalar accepted by the metric kernels (f32 or f64).
pub trait Real:
    Float + FromPrimitive + NumAssignOps + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert a count into the working scalar.
pub fn real_from_usize<R: Real>(n: usize) -> R {
    R::from_usize(n).expect("count representable as float")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TauError {
    #[error("threshold must lie in (0, 1], got {0}")]
    OutOfRange(String),
    #[error("cannot parse threshold from {0:?}")]
    Unparseable(String),
    #[error("threshold denominator must be nonzero")]
    ZeroDenominator,
}

/// Relative threshold in (0, 1], held exactly as a reduced fraction.
///
/// Parsing goes through the decimal text (`"0.15"` becomes 3/20 exactly),
/// so boundary comparisons like "3 cross-links out of 20" at 15% stay exact
/// instead of drifting through binary floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tau(Fraction);

impl Tau {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self, TauError> {
        if denominator == 0 {
            return Err(TauError::ZeroDenominator);
        }
        if numerator == 0 || numerator > denominator {
            return Err(TauError::OutOfRange(format!("{numerator}/{denominator}")));
        }
        Ok(Tau(Fraction::new(numerator, denominator)))
    }

    /// Parse a decimal threshold such as `"0.25"`, `"1"`, or `"15%"`.
    pub fn from_decimal_str(s: &str) -> Result<Self, TauError> {
        let raw = s.trim();
        let (body, percent) = match raw.strip_suffix('%') {
            Some(b) => (b.trim(), true),
            None => (raw, false),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if (int_part.is_empty() && frac_part.is_empty())
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 18
            || int_part.len() > 18
        {
            return Err(TauError::Unparseable(s.to_string()));
        }
        let int_val: u64 = if int_part.is_empty() {
            0
        } else {
            int_part
                .parse()
                .map_err(|_| TauError::Unparseable(s.to_string()))?
        };
        let scale = 10u64.pow(frac_part.len() as u32);
        let frac_val: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part
                .parse()
                .map_err(|_| TauError::Unparseable(s.to_string()))?
        };
        let numerator = int_val
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(|| TauError::Unparseable(s.to_string()))?;
        let denominator = if percent { scale * 100 } else { scale };
        Tau::new(numerator, denominator)
    }

    pub fn numerator(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> u64 {
        *self.0.denom()
    }

    pub fn as_fraction(&self) -> Fraction {
        self.0
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator() as f64 / self.denominator() as f64
    }
}

impl fmt::Display for Tau {
    /// Renders as an exact terminating decimal when one exists
    /// (`1/4` prints as `0.25`), otherwise as `num/den`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = (self.numerator(), self.denominator());
        if den == 1 {
            return write!(f, "{num}");
        }
        let mut twos = 0u32;
        let mut fives = 0u32;
        let mut d = den;
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return write!(f, "{num}/{den}");
        }
        let digits = twos.max(fives);
        let scaled = num as u128 * 10u128.pow(digits) / den as u128;
        let int = scaled / 10u128.pow(digits);
        let mut frac = format!(
            "{:0width$}",
            scaled % 10u128.pow(digits),
            width = digits as usize
        );
        while frac.ends_with('0') {
            frac.pop();
        }
        if frac.is_empty() {
            write!(f, "{int}")
        } else {
            write!(f, "{int}.{frac}")
        }
    }
}

impl FromStr for Tau {
    type Err = TauError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tau::from_decimal_str(s)
    }
}

impl Serialize for Tau {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tau {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Tau::from_decimal_str(&s).map_err(serde::de::Error::custom)
    }
}
