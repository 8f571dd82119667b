//! Certified real enclosures.
//!
//! An [`Enclosure`] carries a value as a pair `[lo, hi]` guaranteed to contain
//! the exact real quantity it claims to represent, together with a free-text
//! note describing the tail or rounding budget that produced the width.
//! Arithmetic rounds outward by one ulp per operation, which keeps the
//! guarantee without touching the FPU rounding mode.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    lo: f64,
    hi: f64,
    note: String,
}

impl Enclosure {
    /// Enclosure of a value known exactly in f64.
    pub fn exact(v: f64) -> Self {
        Self { lo: v, hi: v, note: String::new() }
    }

    /// Enclosure of the real result approximated by `v` with at most one ulp
    /// of rounding error (e.g. a single IEEE operation on exact inputs).
    pub fn of_ulp(v: f64) -> Self {
        Self { lo: v.next_down(), hi: v.next_up(), note: String::new() }
    }

    pub fn from_bounds(lo: f64, hi: f64, note: impl Into<String>) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Internal(format!("enclosure bounds inverted: [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, note: note.into() })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, q: f64) -> bool {
        self.lo <= q && q <= self.hi
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn append_note(mut self, extra: &str) -> Self {
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(extra);
        self
    }

    /// Product of two enclosures, rounded outward. Handles any signs.
    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let cands = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = cands.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = cands.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Enclosure { lo: lo.next_down(), hi: hi.next_up(), note: self.note.clone() }
    }

    /// In-place product with a factor enclosure, for long positive products.
    /// Both operands must be nonnegative.
    pub fn mul_assign_pos(&mut self, f_lo: f64, f_hi: f64) {
        debug_assert!(self.lo >= 0.0 && f_lo >= 0.0 && f_lo <= f_hi);
        self.lo = (self.lo * f_lo).next_down().max(0.0);
        self.hi = (self.hi * f_hi).next_up();
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: (self.lo + other.lo).next_down(),
            hi: (self.hi + other.hi).next_up(),
            note: self.note.clone(),
        }
    }
}

impl std::fmt::Display for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo, self.hi)?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}
