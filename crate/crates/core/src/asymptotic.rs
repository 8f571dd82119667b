//! Main terms and explicit error budgets for the representation counts.
//!
//! The singular Euler product is evaluated exactly over primes up to a
//! cutoff and closed with a certified tail enclosure. Giant arguments (think
//! 10^440) are handled purely in log-domain arithmetic.

use crate::arithfun::{self, Factorization};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::logmag::LogMagnitude;
use crate::primes::{mod_pow, PrimeTable};
use crate::report::VerifyReport;
use crate::representation::{sieve_squarefree, SquarefreeFlags};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default Euler-product cutoff; reproduces the product constants with
/// comfortable margin while staying cheap to evaluate.
pub const DEFAULT_PRIME_CUTOFF: u64 = 1_000_000;

fn factor_bounds_one_minus(num: f64, den: f64) -> (f64, f64) {
    // 1 - num/den with num, den exact small integers in f64
    let t = num / den;
    (((1.0 - t.next_up()).next_down()).max(0.0), (1.0 - t.next_down()).next_up())
}

/// g(p) for p <= cutoff given the factorization of n, without refactorizing.
fn g_at_prime_with(fact: &Factorization, p: u64) -> u64 {
    let n = fact.n();
    if p == 2 {
        return match n % 4 {
            0 | 1 => 2,
            _ => 0,
        };
    }
    match fact.exponent_of(p) {
        0 => {
            let legendre = mod_pow(n % p, (p - 1) / 2, p);
            if legendre == 1 {
                2
            } else {
                0
            }
        }
        1 => 0,
        _ => p,
    }
}

/// Certified enclosure of prod_p (1 - g(p)/p^2).
///
/// Factors for p <= cutoff are evaluated exactly from the definition; every
/// prime dividing n is folded in exactly from the factorization even above
/// the cutoff; the remaining tail over p > cutoff, p not dividing n, lies in
/// [1 - 2/(cutoff - 1), 1] since each factor is 1 or 1 - 2/p^2.
pub fn singular_product(n: u64, table: &PrimeTable, cutoff: u64) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::domain("singular product of 0"));
    }
    if cutoff < 100 {
        return Err(Error::domain(format!("prime cutoff {cutoff} below 100")));
    }
    if cutoff > table.limit() {
        return Err(Error::range(format!(
            "cutoff {cutoff} beyond table limit {}",
            table.limit()
        )));
    }
    let fact = arithfun::factorize(n)?;
    let mut acc = Enclosure::exact(1.0);
    for &p in table.primes() {
        if p > cutoff {
            break;
        }
        match g_at_prime_with(&fact, p) {
            0 => {}
            2 => {
                let (lo, hi) = factor_bounds_one_minus(2.0, (p * p) as f64);
                acc.mul_assign_pos(lo, hi);
            }
            gp => {
                debug_assert_eq!(gp, p);
                let (lo, hi) = factor_bounds_one_minus(1.0, p as f64);
                acc.mul_assign_pos(lo, hi);
            }
        }
    }
    // primes dividing n above the cutoff contribute exactly 1 - 1/p (square
    // divisor) or 1 (exact divisor); p = 2 is always below any valid cutoff
    for &(p, e) in fact.factors() {
        if p > cutoff && e >= 2 {
            let (lo, hi) = factor_bounds_one_minus(1.0, p as f64);
            acc.mul_assign_pos(lo, hi);
        }
    }
    let tail_lo = (1.0 - 2.0 / (cutoff as f64 - 1.0)).next_down();
    acc.mul_assign_pos(tail_lo, 1.0);
    Ok(acc.with_note(format!(
        "exact over p <= {cutoff}, tail in [1 - 2/(cutoff-1), 1], primes dividing n folded exactly"
    )))
}

/// Main term sqrt(n) * prod_p (1 - g(p)/p^2), as an enclosure.
pub fn main_term(n: u64, table: &PrimeTable, cutoff: u64) -> Result<Enclosure> {
    let prod = singular_product(n, table, cutoff)?;
    let root = (n as f64).sqrt();
    let root_enc = Enclosure::from_bounds(root.next_down(), root.next_up(), "")?;
    Ok(root_enc.mul(&prod).with_note(prod.note().to_string()))
}

/// Main term for the coprime counter: sqrt(n) * prod_{p|n} (1 - 1/p)
/// * prod_{p not | n} (1 - g(p)/p^2).
pub fn main_term_star(n: u64, table: &PrimeTable, cutoff: u64) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::domain("main term of 0"));
    }
    if cutoff < 100 {
        return Err(Error::domain(format!("prime cutoff {cutoff} below 100")));
    }
    if cutoff > table.limit() {
        return Err(Error::range(format!(
            "cutoff {cutoff} beyond table limit {}",
            table.limit()
        )));
    }
    let fact = arithfun::factorize(n)?;
    let mut acc = Enclosure::exact(1.0);
    for &p in table.primes() {
        if p > cutoff {
            break;
        }
        if fact.exponent_of(p) > 0 {
            let (lo, hi) = factor_bounds_one_minus(1.0, p as f64);
            acc.mul_assign_pos(lo, hi);
        } else if g_at_prime_with(&fact, p) == 2 {
            let (lo, hi) = factor_bounds_one_minus(2.0, (p * p) as f64);
            acc.mul_assign_pos(lo, hi);
        }
    }
    for &(p, _) in fact.factors() {
        if p > cutoff {
            let (lo, hi) = factor_bounds_one_minus(1.0, p as f64);
            acc.mul_assign_pos(lo, hi);
        }
    }
    let tail_lo = (1.0 - 2.0 / (cutoff as f64 - 1.0)).next_down();
    acc.mul_assign_pos(tail_lo, 1.0);
    let root = (n as f64).sqrt();
    let root_enc = Enclosure::from_bounds(root.next_down(), root.next_up(), "")?;
    Ok(root_enc
        .mul(&acc)
        .with_note(format!("coprime-counter product, exact over p <= {cutoff} plus tail")))
}

/// Upper bound for the squarefree-restricted tail sum of 2^omega(d)/d^2 over
/// d > z: 3 log z / z for z > 20, else the convergent-product constant 2.2.
pub fn tail_sum_2omega(z: f64) -> f64 {
    if z > 20.0 {
        3.0 * z.ln() / z
    } else {
        2.2
    }
}

/// Exact truncated tail: sum of 2^omega(d)/d^2 over squarefree z < d <= hi.
pub fn brute_tail_sum_2omega(z: f64, hi: u64) -> Result<f64> {
    const CAP: u64 = 1 << 27;
    if hi > CAP {
        return Err(Error::capacity(format!("tail summation limit {hi} above {CAP}")));
    }
    let n = hi as usize;
    let mut omega = vec![0u8; n + 1];
    let mut sqfree = vec![true; n + 1];
    for p in 2..=n {
        if omega[p] == 0 {
            for m in (p..=n).step_by(p) {
                omega[m] += 1;
            }
            if let Some(p2) = p.checked_mul(p) {
                if p2 <= n {
                    for m in (p2..=n).step_by(p2) {
                        sqfree[m] = false;
                    }
                }
            }
        }
    }
    let start = (z.floor() as usize + 1).max(1);
    let mut s = KahanSum::new();
    for d in start..=n {
        if sqfree[d] {
            s.add((1u64 << omega[d]) as f64 / ((d * d) as f64));
        }
    }
    Ok(s.value())
}

/// (3 log y + 44) / y * tau(root part of n): bound for the Moebius-weighted
/// g tail beyond y.
pub fn mobius_g_tail_bound(n: u64, y: f64) -> Result<f64> {
    if y.is_nan() || y <= 1.0 {
        return Err(Error::domain(format!("tail bound needs y > 1, got {y}")));
    }
    let split = arithfun::sqfree_split(n)?;
    let tau_root = arithfun::tau(split.root)? as f64;
    Ok((3.0 * y.ln() + 44.0) / y * tau_root)
}

/// e^6 / (log 2)^2 * y (log y)^2 * tau(root part of n): bound for the sum of
/// |R(d)| over squarefree d <= y.
pub fn rd_bound(n: u64, y: f64) -> Result<f64> {
    if y.is_nan() || y <= 1.0 {
        return Err(Error::domain(format!("rd bound needs y > 1, got {y}")));
    }
    let split = arithfun::sqfree_split(n)?;
    let tau_root = arithfun::tau(split.root)? as f64;
    let c = 6f64.exp() / 2f64.ln().powi(2);
    Ok(c * y * y.ln().powi(2) * tau_root)
}

/// The split point y = n^{1/3} / (4.54 (log n)^{2/3}).
pub fn choose_y(n: f64) -> Result<f64> {
    if n < 3.0 {
        return Err(Error::domain(format!("split point needs n >= 3, got {n}")));
    }
    Ok(n.powf(1.0 / 3.0) / (4.54 * n.ln().powf(2.0 / 3.0)))
}

/// Three-component error budget at the canonical split point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    /// 6 n / y^2 * tau(n)
    pub s2_term: f64,
    /// e^6/(log 2)^2 * y (log y)^2 * tau(n)
    pub rd_term: f64,
    /// (3 log y + 44)/y * sqrt(n) * tau(n)
    pub tail_term: f64,
    pub total: f64,
    pub y_used: f64,
    pub tau_bound_used: f64,
}

/// Budget with exact tau(n), all three components multiplied by tau(n) as in
/// the combined display (the per-component bounds would allow the smaller
/// tau of the root part in two places; using tau(n) throughout stays sound).
pub fn explicit_error_budget(n: u64) -> Result<ErrorBudget> {
    let y = choose_y(n as f64)?;
    if y <= 1.0 {
        return Err(Error::domain(format!(
            "split point y = {y} not above 1 at n = {n}; budget defined for larger n"
        )));
    }
    let tau_n = arithfun::tau(n)? as f64;
    let nf = n as f64;
    let s2_term = 6.0 * nf / (y * y) * tau_n;
    let rd_term = 6f64.exp() / 2f64.ln().powi(2) * y * y.ln().powi(2) * tau_n;
    let tail_term = (3.0 * y.ln() + 44.0) / y * nf.sqrt() * tau_n;
    Ok(ErrorBudget {
        s2_term,
        rd_term,
        tail_term,
        total: s2_term + rd_term + tail_term,
        y_used: y,
        tau_bound_used: tau_n,
    })
}

/// Threshold from which the closed-form budget is valid.
pub const CLOSED_FORM_MIN_N: u64 = 8100;

/// Closed form 160 C(delta) n^{1/3 + delta} (log n)^{4/3}.
pub fn closed_form_error_bound(n: u64, delta: f64, c_delta: f64) -> Result<f64> {
    if n < CLOSED_FORM_MIN_N {
        return Err(Error::domain(format!(
            "closed form valid from n = {CLOSED_FORM_MIN_N}, got {n}"
        )));
    }
    if !(0.0 < delta && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1)")));
    }
    let nf = n as f64;
    Ok(160.0 * c_delta * nf.powf(1.0 / 3.0 + delta) * nf.ln().powf(4.0 / 3.0))
}

/// Lower bound kappa / (e^gamma loglog n + 3/loglog n) for the singular
/// product, from the certified lower end of the kappa enclosure.
///
/// Meaningful for n >= 16 where loglog n > 1; still evaluated below that,
/// down to the domain boundary n > e.
pub fn product_lower_bound(n: LogMagnitude, kappa_lower: f64) -> Result<f64> {
    let ln_n = n.ln();
    if ln_n <= 1.0 {
        return Err(Error::domain("loglog undefined or nonpositive".to_string()));
    }
    let lln = ln_n.ln();
    Ok(kappa_lower / (EULER_GAMMA.exp() * lln + 3.0 / lln))
}

/// Log-domain lower bound for the main term sqrt(n) * singular product.
pub fn main_term_lower_log(n: LogMagnitude, kappa_lower: f64) -> Result<LogMagnitude> {
    let p = product_lower_bound(n, kappa_lower)?;
    Ok(n.sqrt().mul(&LogMagnitude::from_f64(p)?))
}

/// The explicit error bound 24 / (log n)^{3/4} * n^{(log 2 + 0.342)/loglog n}
/// in log domain.
pub fn asymptotic_error_bound(n: LogMagnitude) -> Result<LogMagnitude> {
    let ln_n = n.ln();
    if ln_n <= 1.0 {
        return Err(Error::domain("needs n > e^e".to_string()));
    }
    let lln = ln_n.ln();
    if lln <= 1.0 {
        return Err(Error::domain("needs n > e^e".to_string()));
    }
    let log10 = (24.0 / ln_n.powf(0.75)).log10() + n.log10() * ((2f64.ln() + 0.342) / lln);
    Ok(LogMagnitude::from_log10(log10))
}

/// Log-domain closed-form pipeline 160 (log n)^{4/3} n^{1/3 + (log 2 + eps)/loglog n},
/// the divisor-bound route with epsilon in the tau exponent.
pub fn closed_form_error_bound_log(n: LogMagnitude, epsilon: f64) -> Result<LogMagnitude> {
    let ln_n = n.ln();
    if ln_n <= 1.0 || ln_n.ln() <= 0.0 {
        return Err(Error::domain("needs loglog n > 0".to_string()));
    }
    let lln = ln_n.ln();
    let log10 = (160.0 * ln_n.powf(4.0 / 3.0)).log10()
        + n.log10() * (1.0 / 3.0 + (2f64.ln() + epsilon) / lln);
    Ok(LogMagnitude::from_log10(log10))
}

/// Residue casework for the coprime-counter positivity thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// No residue information used.
    General,
    /// n != 1 (mod 4): the prime 2 drops out of the small-prime sum.
    Not1Mod4,
    /// n = 1 (mod 4) but n is not a square mod 9: the prime 3 drops out.
    NotSquareMod9,
    /// n a square mod 36: doubly removed solutions are added back.
    SquareMod36,
}

impl CaseId {
    /// Positivity threshold established for the case.
    pub fn threshold(self) -> u64 {
        match self {
            CaseId::General => 17_900_000_000,
            CaseId::Not1Mod4 => 200,
            CaseId::NotSquareMod9 => 74_249,
            CaseId::SquareMod36 => 1_375_077,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseId::General => "general",
            CaseId::Not1Mod4 => "not1mod4",
            CaseId::NotSquareMod9 => "notSqMod9",
            CaseId::SquareMod36 => "sqMod36",
        }
    }
}

/// Residue table of squares mod M, filled by exhaustive squaring.
const fn squares_table<const M: usize>() -> [bool; M] {
    let mut s = [false; M];
    let mut x = 0;
    while x < M {
        s[(x * x) % M] = true;
        x += 1;
    }
    s
}

const SQUARES_MOD9: [bool; 9] = squares_table::<9>();
const SQUARES_MOD36: [bool; 36] = squares_table::<36>();

/// First matching case in elimination order; every n maps to exactly one.
/// An n that is 1 mod 4 and a square mod 9 is automatically a square mod 36,
/// so the general fallback is unreachable, but the arm is kept so the
/// classification stays total by construction.
pub fn casework_classify(n: u64) -> CaseId {
    if n % 4 != 1 {
        return CaseId::Not1Mod4;
    }
    if !SQUARES_MOD9[(n % 9) as usize] {
        return CaseId::NotSquareMod9;
    }
    if SQUARES_MOD36[(n % 36) as usize] {
        return CaseId::SquareMod36;
    }
    CaseId::General
}

/// Right-hand side of the casework inequality for n in the given case:
/// sqrt(n)(c + 2/log n + 6/(log n)^2) + 12 sqrt(2) n^{1/4}/log n, with the
/// additive 4 in the mod-36 case.
pub fn casework_bound(n: u64, case: CaseId) -> Result<f64> {
    if n < 21 {
        return Err(Error::domain(format!("casework bound valid from n = 21, got {n}")));
    }
    let c = match case {
        CaseId::General => 0.9045,
        CaseId::Not1Mod4 => 0.4045,
        CaseId::NotSquareMod9 => 0.6823,
        CaseId::SquareMod36 => 0.7934,
    };
    let nf = n as f64;
    let l = nf.ln();
    let mut v = nf.sqrt() * (c + 2.0 / l + 6.0 / (l * l))
        + 12.0 * 2f64.sqrt() * nf.powf(0.25) / l;
    if case == CaseId::SquareMod36 {
        v += 4.0;
    }
    Ok(v)
}

/// Does n have a representation with witness coprime to n?
fn r_star_positive(flags: &SquarefreeFlags, n: u64) -> bool {
    for x in 0..=n.isqrt() {
        let v = n - x * x;
        if v >= 1 && flags.is_squarefree(v) && arithfun::gcd(x, n) == 1 {
            return true;
        }
    }
    false
}

/// Count of coprime candidates x in [0, sqrt(n)] alongside the full r*.
fn eligible_and_r_star(flags: &SquarefreeFlags, n: u64) -> (u64, u64) {
    let mut eligible = 0u64;
    let mut r_star = 0u64;
    for x in 0..=n.isqrt() {
        if arithfun::gcd(x, n) != 1 {
            continue;
        }
        eligible += 1;
        let v = n - x * x;
        if v >= 1 && flags.is_squarefree(v) {
            r_star += 1;
        }
    }
    (eligible, r_star)
}

/// How many sampled n get the full inequality check.
const CASEWORK_SAMPLES: u64 = 1500;

/// Casework campaign up to n_max. Certifies r*(n) > 0 for every
/// case-qualified n above the case threshold, and on a deterministic sample
/// checks two inequality forms against the case bound:
///
/// - the provable form, coprime candidates minus r*(n) < bound, whose left
///   side only loses x to square divisors p^2 | n - x^2 with p not dividing
///   n (a failure here is a genuine violation);
/// - the published display form, floor(sqrt n) - r*(n) < bound, which also
///   charges every non-coprime x to the bound. Its violations are reported
///   as failures too: they are real counterexamples to the display as
///   written (smooth n lose too many candidates to coprimality), kept
///   visible rather than reconciled.
pub fn casework_verify(n_max: u64) -> Result<VerifyReport> {
    if n_max < 21 {
        return Err(Error::domain(format!("casework range must reach 21, got {n_max}")));
    }
    let start = std::time::Instant::now();
    let flags = sieve_squarefree(0, n_max)?;
    let mut report = VerifyReport::new("casework", (1, n_max));

    let mut counts = [0u64; 4];
    let case_index = |case: CaseId| match case {
        CaseId::Not1Mod4 => 0usize,
        CaseId::NotSquareMod9 => 1,
        CaseId::SquareMod36 => 2,
        CaseId::General => 3,
    };
    for n in 1..=n_max {
        let case = casework_classify(n);
        counts[case_index(case)] += 1;
        if n >= case.threshold() && !r_star_positive(&flags, n) {
            report.push_failure(n, format!("r*(n) = 0 above {} threshold", case.label()));
        }
    }

    // evenly spaced sample with no fixed divisor bias
    let samples = CASEWORK_SAMPLES.min(n_max);
    let mut min_slack = [(f64::INFINITY, 0u64); 4];
    let mut display_violations = 0u64;
    let mut prev = 0u64;
    for k in 1..=samples {
        let n = (n_max as u128 * k as u128 / samples as u128) as u64;
        if n < 21 || n == prev {
            continue;
        }
        prev = n;
        let case = casework_classify(n);
        let bound = casework_bound(n, case)?;
        let (eligible, r_star) = eligible_and_r_star(&flags, n);
        let lhs = eligible as f64 - r_star as f64;
        let slack = bound - lhs;
        if slack <= 0.0 {
            report.push_failure(
                n,
                format!(
                    "eligible-count inequality violated in case {}: {lhs} >= {bound}",
                    case.label()
                ),
            );
        }
        let idx = case_index(case);
        if slack < min_slack[idx].0 {
            min_slack[idx] = (slack, n);
        }
        let display_lhs = n.isqrt() as f64 - r_star as f64;
        if display_lhs >= bound {
            display_violations += 1;
            report.push_failure(
                n,
                format!(
                    "display inequality violated in case {}: floor(sqrt n) - r* = {display_lhs} >= {bound}",
                    case.label()
                ),
            );
        }
    }

    for (case, &(slack, n)) in
        [CaseId::Not1Mod4, CaseId::NotSquareMod9, CaseId::SquareMod36, CaseId::General]
            .iter()
            .zip(min_slack.iter())
    {
        if slack.is_finite() {
            report.push_extremal(format!("min_slack_{}", case.label()), n, slack);
        }
    }
    let total: u64 = counts.iter().sum();
    report.push_extremal("classified_total", total, total as f64);
    report.push_extremal("display_violations", display_violations, display_violations as f64);
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    report.config_snapshot = format!(
        "counts: not1mod4={} notSqMod9={} sqMod36={} general={}",
        counts[0], counts[1], counts[2], counts[3]
    );
    Ok(report)
}
