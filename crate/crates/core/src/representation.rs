//! Counting representations n = x^2 + s with s squarefree.
//!
//! The campaign machinery is built around one shared squarefree bit table:
//! the scan over x reads n - x^2 downward, so a single table up to n_max
//! amortizes every n in the range. Campaigns shard by sub-range; the table
//! is immutable and read-only across threads.

use crate::arithfun::{self, gcd, is_squarefree};
use crate::error::{Error, Result};
use crate::report::VerifyReport;

/// Bit table of squarefree flags for a contiguous range.
///
/// `flag(v)` is true iff v is a positive squarefree integer; the flag for 0,
/// when in range, is false.
#[derive(Debug, Clone)]
pub struct SquarefreeFlags {
    lo: u64,
    hi: u64,
    bits: Vec<u64>,
}

/// Span cap for one table; 2^34 values is a 2 GiB bit vector.
const MAX_SIEVE_SPAN: u64 = 1 << 34;

/// Segmented squarefree sieve: marks multiples of p^2 for all p^2 <= hi.
pub fn sieve_squarefree(lo: u64, hi: u64) -> Result<SquarefreeFlags> {
    if lo > hi {
        return Err(Error::domain(format!("inverted range [{lo}, {hi}]")));
    }
    let span = hi - lo + 1;
    if span > MAX_SIEVE_SPAN {
        return Err(Error::capacity(format!(
            "squarefree segment of {span} values exceeds cap {MAX_SIEVE_SPAN}"
        )));
    }
    let words = (span as usize).div_ceil(64);
    let mut bits = vec![!0u64; words];
    // trim bits beyond hi so popcount-style uses stay honest
    let tail = (span % 64) as usize;
    if tail != 0 {
        bits[words - 1] = (1u64 << tail) - 1;
    }

    let mut clear = |v: u64| {
        let i = (v - lo) as usize;
        bits[i / 64] &= !(1u64 << (i % 64));
    };

    if lo == 0 {
        clear(0);
    }

    let root = hi.isqrt();
    if root >= 2 {
        for p in crate::primes::build_prime_table(root)?.primes() {
            let p2 = p * p;
            let mut m = lo.div_ceil(p2) * p2;
            while m <= hi {
                clear(m);
                m += p2;
            }
        }
    }
    Ok(SquarefreeFlags { lo, hi, bits })
}

impl SquarefreeFlags {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn contains(&self, v: u64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }

    /// Flag for v; panics if v is outside the sieved range.
    pub fn is_squarefree(&self, v: u64) -> bool {
        assert!(self.contains(v), "value {v} outside sieved range [{}, {}]", self.lo, self.hi);
        let i = (v - self.lo) as usize;
        self.bits[i / 64] & (1u64 << (i % 64)) != 0
    }
}

/// Representation counts for one n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepCount {
    pub n: u64,
    /// Count of x in [0, sqrt(n)] with n - x^2 a positive squarefree integer.
    pub r: u64,
    /// Same with the extra condition gcd(x, n) = 1.
    pub r_star: u64,
    /// Smallest witness x when r > 0.
    pub witness: Option<u64>,
}

/// Exact r(n) and r*(n) using a caller-provided flag table covering [0, n].
pub fn r_count_with(flags: &SquarefreeFlags, n: u64) -> Result<RepCount> {
    if n == 0 {
        return Err(Error::domain("r_count(0)"));
    }
    if flags.lo() > 0 || flags.hi() < n {
        return Err(Error::range(format!(
            "flag table [{}, {}] does not cover [0, {n}]",
            flags.lo(),
            flags.hi()
        )));
    }
    let mut r = 0u64;
    let mut r_star = 0u64;
    let mut witness = None;
    for x in 0..=n.isqrt() {
        let v = n - x * x;
        if v >= 1 && flags.is_squarefree(v) {
            r += 1;
            if witness.is_none() {
                witness = Some(x);
            }
            if gcd(x, n) == 1 {
                r_star += 1;
            }
        }
    }
    Ok(RepCount { n, r, r_star, witness })
}

/// Convenience form that sieves its own table. Fine for one-off queries;
/// campaigns should share a table via [`r_count_with`].
pub fn r_count(n: u64) -> Result<RepCount> {
    let flags = sieve_squarefree(0, n)?;
    r_count_with(&flags, n)
}

/// Outcome of one positivity sub-range, mergeable across workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentOutcome {
    pub lo: u64,
    pub hi: u64,
    /// n values with no representation (expected empty).
    pub failures: Vec<u64>,
    /// Largest first-witness x seen, with the smallest n attaining it.
    pub max_witness: Option<(u64, u64)>,
}

impl SegmentOutcome {
    pub fn merge_witness(a: Option<(u64, u64)>, b: Option<(u64, u64)>) -> Option<(u64, u64)> {
        match (a, b) {
            (None, w) | (w, None) => w,
            (Some((xa, na)), Some((xb, nb))) => {
                if xa > xb || (xa == xb && na <= nb) {
                    Some((xa, na))
                } else {
                    Some((xb, nb))
                }
            }
        }
    }
}

/// Certify r(n) > 0 for every n in [lo, hi] against a shared flag table.
///
/// With `early_exit` the x scan stops at the first squarefree hit, which is
/// the campaign default; without it the full r(n) is computed.
pub fn positivity_segment(
    flags: &SquarefreeFlags,
    lo: u64,
    hi: u64,
    early_exit: bool,
) -> Result<SegmentOutcome> {
    if lo == 0 || lo > hi {
        return Err(Error::domain(format!("bad segment [{lo}, {hi}]")));
    }
    if flags.lo() > 0 || flags.hi() < hi {
        return Err(Error::range("flag table does not cover segment".to_string()));
    }
    let mut out = SegmentOutcome { lo, hi, failures: Vec::new(), max_witness: None };
    for n in lo..=hi {
        let witness = if early_exit {
            let mut found = None;
            for x in 0..=n.isqrt() {
                let v = n - x * x;
                if v >= 1 && flags.is_squarefree(v) {
                    found = Some(x);
                    break;
                }
            }
            found
        } else {
            r_count_with(flags, n)?.witness
        };
        match witness {
            Some(x) => {
                out.max_witness = SegmentOutcome::merge_witness(out.max_witness, Some((x, n)));
            }
            None => out.failures.push(n),
        }
    }
    Ok(out)
}

/// Single-threaded positivity campaign over [1, n_max].
pub fn verify_positivity(n_max: u64, early_exit: bool) -> Result<VerifyReport> {
    if n_max < 1 {
        return Err(Error::domain("empty campaign range"));
    }
    let start = std::time::Instant::now();
    let flags = sieve_squarefree(0, n_max)?;
    let seg = positivity_segment(&flags, 1, n_max, early_exit)?;
    let mut report = VerifyReport::new("positivity", (1, n_max));
    for n in seg.failures {
        report.push_failure(n, "no x with n - x^2 squarefree");
    }
    if let Some((x, n)) = seg.max_witness {
        report.push_extremal("max_witness_x", n, x as f64);
    }
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    report.config_snapshot = format!("early_exit={early_exit} workers=1");
    Ok(report)
}

/// Count of x in [t0, t0 + d^2) with d^2 | n - x^2, for squarefree d.
///
/// For squarefree d this is independent of t0 and equals g(n, d): a window
/// of length d^2 covers every residue class exactly once.
pub fn interval_solution_count(n: u64, d: u64, t0: u64) -> Result<u64> {
    if d == 0 || !is_squarefree(d) {
        return Err(Error::domain(format!("interval count requires squarefree d, got {d}")));
    }
    let d2 = d
        .checked_mul(d)
        .ok_or_else(|| Error::capacity(format!("d^2 overflows for d = {d}")))?;
    if t0.checked_add(d2).is_none() {
        return Err(Error::range("window end overflows".to_string()));
    }
    let target = n % d2;
    let mut count = 0u64;
    for i in 0..d2 {
        let x = (t0 + i) % d2;
        if crate::primes::mul_mod(x, x, d2) == target {
            count += 1;
        }
    }
    Ok(count)
}

/// R(d) = #{0 <= x <= sqrt(n) : d^2 | n - x^2} - sqrt(n) g(d) / d^2.
pub fn remainder_r(n: u64, d: u64) -> Result<f64> {
    if d == 0 || !is_squarefree(d) {
        return Err(Error::domain(format!("remainder requires squarefree d, got {d}")));
    }
    let d2 = d
        .checked_mul(d)
        .ok_or_else(|| Error::capacity(format!("d^2 overflows for d = {d}")))?;
    let target = n % d2;
    let mut exact = 0u64;
    for x in 0..=n.isqrt() {
        if crate::primes::mul_mod(x % d2, x % d2, d2) == target {
            exact += 1;
        }
    }
    let g = arithfun::g_value(n, d)? as f64;
    Ok(exact as f64 - (n as f64).sqrt() * g / d2 as f64)
}

/// Brute-force scale cap for the triple counter.
pub const TRIPLE_COUNT_CAP: u64 = 10_000_000;

/// Exhaustive count of triples (k, x, d) with k squarefree, d > y and
/// n = x^2 + k d^2.
pub fn s2_triple_count(n: u64, y: f64) -> Result<u64> {
    if n > TRIPLE_COUNT_CAP {
        return Err(Error::capacity(format!(
            "triple count is brute-force only, n = {n} above {TRIPLE_COUNT_CAP}"
        )));
    }
    if y.is_nan() || y < 1.0 {
        return Err(Error::domain(format!("y = {y} below 1")));
    }
    let mut count = 0u64;
    let mut d = y.floor() as u64 + 1;
    while d * d <= n {
        let d2 = d * d;
        let mut x = 0u64;
        while x * x + d2 <= n {
            let rem = n - x * x;
            if rem.is_multiple_of(d2) && is_squarefree(rem / d2) {
                count += 1;
            }
            x += 1;
        }
        d += 1;
    }
    Ok(count)
}
