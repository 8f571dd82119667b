//! Log-domain representation of huge positive reals.
//!
//! A [`LogMagnitude`] stores the base-10 logarithm of a positive real, so
//! magnitudes like 10^440 are manipulable without overflow. Products and
//! quotients are exact sums and differences of logs; sums of same-sign terms
//! go through log-sum-exp.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogMagnitude {
    log10: f64,
}

impl LogMagnitude {
    pub fn from_log10(log10: f64) -> Self {
        Self { log10 }
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("log magnitude of zero"));
        }
        Ok(Self { log10: (n as f64).log10() })
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() || x <= 0.0 {
            return Err(Error::domain(format!("log magnitude of non-positive {x}")));
        }
        Ok(Self { log10: x.log10() })
    }

    /// 10^k for integer k, exactly.
    pub fn pow10(k: i32) -> Self {
        Self { log10: k as f64 }
    }

    pub fn log10(&self) -> f64 {
        self.log10
    }

    pub fn ln(&self) -> f64 {
        self.log10 * std::f64::consts::LN_10
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { log10: self.log10 + other.log10 }
    }

    pub fn div(&self, other: &Self) -> Self {
        Self { log10: self.log10 - other.log10 }
    }

    pub fn powf(&self, e: f64) -> Self {
        Self { log10: self.log10 * e }
    }

    pub fn sqrt(&self) -> Self {
        Self { log10: self.log10 * 0.5 }
    }

    /// Sum of two positive magnitudes via log-sum-exp. The rounding budget is
    /// a few ulps; callers that need certified sums must track it themselves.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = if self.log10 >= other.log10 {
            (self.log10, other.log10)
        } else {
            (other.log10, self.log10)
        };
        Self { log10: a + (1.0 + 10f64.powf(b - a)).log10() }
    }

    /// Collapse to f64; infinite if the magnitude exceeds f64 range.
    pub fn to_f64(&self) -> f64 {
        10f64.powf(self.log10)
    }

    /// Decimal mantissa in [1, 10) and exponent.
    pub fn mantissa_exponent(&self) -> (f64, i64) {
        let e = self.log10.floor();
        (10f64.powf(self.log10 - e), e as i64)
    }
}

impl std::fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (m, e) = self.mantissa_exponent();
        write!(f, "{m:.4}e{e}")
    }
}
