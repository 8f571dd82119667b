//! Compensated (Neumaier) summation.
//!
//! All real-valued prime sums in this crate go through [`KahanSum`] so that
//! quantities quoted to many decimals are not polluted by naive accumulation.

/// Neumaier variant of Kahan summation: the compensation also tracks the
/// case where the incoming term is larger than the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
    terms: u64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Number of terms accumulated so far.
    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// Absolute rounding budget: one ulp of the running value per term.
    /// A compensated sum is far more accurate than this in practice, so the
    /// budget is a safe over-estimate for slack comparisons.
    pub fn rounding_budget(&self) -> f64 {
        (self.terms as f64 + 1.0) * f64::EPSILON * self.value().abs().max(1.0)
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let mut s = KahanSum::new();
        s.add(1e16);
        for _ in 0..10 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 10.0);
    }

    #[test]
    fn from_iter_matches_loop() {
        let xs = [0.1, 0.2, 0.3, -0.4];
        let s: KahanSum = xs.iter().copied().collect();
        assert!((s.value() - 0.2).abs() < 1e-15);
        assert_eq!(s.terms(), 4);
    }
}
