//! Fully explicit upper bounds for the divisor function.
//!
//! The central objects are H(delta), the exact evaluation of the Ramanujan
//! product constant C(delta) as a finite double sum over primes, and the
//! derived tau thresholds. Range scans run on a linear divisor-count sieve
//! cross-checked against factorization.

use crate::arithfun;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::logmag::LogMagnitude;
use crate::primes::PrimeTable;
use crate::report::VerifyReport;

/// H(delta) = delta^2 2^{1/delta}/(log 2)^2 + 7 delta^3 2^{1/delta}/(log 2)^3.
pub fn h_of_delta(delta: f64) -> Result<f64> {
    if !(0.0 < delta && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1)")));
    }
    let l2 = 2f64.ln();
    let pow = 2f64.powf(1.0 / delta);
    Ok(delta * delta * pow / (l2 * l2) + 7.0 * delta.powi(3) * pow / (l2 * l2 * l2))
}

/// log C(delta) evaluated exactly as the finite double sum
/// delta * sum_{k <= 1/(2^delta - 1)} sum_{p <= (1 + 1/k)^{1/delta}}
/// (log (1 + 1/k)^{1/delta} - log p).
///
/// Only the prime list is needed; there is no quadrature error. The table
/// must reach 2^{1/delta}, otherwise the k = 1 inner sum would be silently
/// truncated, so a short table is a capacity error.
pub fn log_c_exact(delta: f64, table: &PrimeTable) -> Result<f64> {
    if !(0.0 < delta && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1)")));
    }
    let p_max = 2f64.powf(1.0 / delta);
    if p_max > table.limit() as f64 {
        return Err(Error::capacity(format!(
            "log C({delta}) needs primes to {p_max:.0}, table stops at {}",
            table.limit()
        )));
    }
    let k_max = (1.0 / (2f64.powf(delta) - 1.0)).floor() as u64;
    let mut total = KahanSum::new();
    for k in 1..=k_max {
        let edge = (1.0 + 1.0 / k as f64).powf(1.0 / delta);
        let log_edge = (1.0 + 1.0 / k as f64).ln() / delta;
        let pi = table.prime_count(edge)? as f64;
        let theta = table.chebyshev_theta(edge)?;
        total.add(pi * log_edge - theta);
    }
    Ok(delta * total.value())
}

/// Coarse bound 2 delta 2^{1/delta} for log C(delta).
pub fn log_c_coarse_bound(delta: f64) -> Result<f64> {
    if !(0.0 < delta && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1)")));
    }
    Ok(2.0 * delta * 2f64.powf(1.0 / delta))
}

/// tau(n) < e^{H(delta)} n^delta, compared in log domain.
pub fn tau_bound_check(n: u64, delta: f64) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("tau bound at 0"));
    }
    let h = h_of_delta(delta)?;
    let tau = arithfun::tau(n)? as f64;
    Ok(tau.ln() < h + delta * (n as f64).ln())
}

/// Threshold e^{e^{14/(sqrt(1 + 28 eps) - 1)}} above which
/// tau(n) < n^{(log 2 + eps)/loglog n} holds, as a log magnitude.
pub fn tau_epsilon_threshold(epsilon: f64) -> Result<LogMagnitude> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::domain(format!("epsilon = {epsilon} not positive")));
    }
    let loglog = 14.0 / ((1.0 + 28.0 * epsilon).sqrt() - 1.0);
    Ok(LogMagnitude::from_log10(loglog.exp() * std::f64::consts::LOG10_E))
}

/// Cap for range scans; the tau sieve stores one u16 per integer.
pub const SCAN_CAP: u64 = 1 << 27;

/// Linear sieve of divisor counts for 0..=n_max. Entry 0 is unused.
pub fn tau_sieve(n_max: u64) -> Result<Vec<u16>> {
    if n_max > SCAN_CAP {
        return Err(Error::capacity(format!("tau sieve to {n_max} above cap {SCAN_CAP}")));
    }
    let n = n_max as usize;
    let mut tau = vec![0u16; n + 1];
    let mut low_exp = vec![0u8; n + 1]; // exponent of the smallest prime factor
    let mut primes: Vec<usize> = Vec::new();
    if n >= 1 {
        tau[1] = 1;
    }
    for i in 2..=n {
        if tau[i] == 0 {
            primes.push(i);
            tau[i] = 2;
            low_exp[i] = 1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            if i % p == 0 {
                let e = low_exp[i] as u16;
                tau[ip] = tau[i] / (e + 1) * (e + 2);
                low_exp[ip] = low_exp[i] + 1;
                break;
            }
            tau[ip] = tau[i] * 2;
            low_exp[ip] = 1;
        }
    }
    Ok(tau)
}

/// Checks tau(n) < n^{3/loglog n} for every 3 <= n <= n_max.
pub fn tau_simple_bound_verify(n_max: u64) -> Result<VerifyReport> {
    if n_max < 3 {
        return Err(Error::domain(format!("scan needs n_max >= 3, got {n_max}")));
    }
    let start = std::time::Instant::now();
    let tau = tau_sieve(n_max)?;
    let log_tau = log_table(&tau);
    let mut report = VerifyReport::new("tau_simple_bound", (3, n_max));
    let mut min_slack = f64::INFINITY;
    let mut min_n = 3u64;
    for n in 3..=n_max as usize {
        let ln_n = (n as f64).ln();
        let rhs = 3.0 / ln_n.ln() * ln_n; // log of n^{3/loglog n}
        let slack = rhs - log_tau[tau[n] as usize];
        if slack <= 0.0 {
            report.push_failure(n as u64, format!("log tau = {} >= {rhs}", log_tau[tau[n] as usize]));
        }
        if slack < min_slack {
            min_slack = slack;
            min_n = n as u64;
        }
    }
    report.push_extremal("min_log_slack", min_n, min_slack);
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Checks tau(n) < e^{H(delta)} n^delta for every 1 <= n <= n_max.
pub fn tau_h_bound_verify(n_max: u64, delta: f64) -> Result<VerifyReport> {
    if n_max < 1 {
        return Err(Error::domain("empty scan range"));
    }
    let h = h_of_delta(delta)?;
    let start = std::time::Instant::now();
    let tau = tau_sieve(n_max)?;
    let log_tau = log_table(&tau);
    let mut report = VerifyReport::new("tau_h_bound", (1, n_max));
    let mut min_slack = f64::INFINITY;
    let mut min_n = 1u64;
    for n in 1..=n_max as usize {
        let slack = h + delta * (n as f64).ln() - log_tau[tau[n] as usize];
        if slack <= 0.0 {
            report.push_failure(n as u64, format!("tau bound violated at delta = {delta}"));
        }
        if slack < min_slack {
            min_slack = slack;
            min_n = n as u64;
        }
    }
    report.push_extremal("min_log_slack", min_n, min_slack);
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    report.config_snapshot = format!("delta={delta}");
    Ok(report)
}

/// Published ceiling for the normalized divisor ratio.
pub const RATIO_CEILING: f64 = 1.5379;

/// Scans max over 3 <= n <= n_max of log tau(n) loglog n / (log 2 log n),
/// reporting the argmax and asserting the published ceiling.
pub fn ratio_scan(n_max: u64) -> Result<VerifyReport> {
    if n_max < 3 {
        return Err(Error::domain(format!("scan needs n_max >= 3, got {n_max}")));
    }
    let start = std::time::Instant::now();
    let tau = tau_sieve(n_max)?;
    let log_tau = log_table(&tau);
    let l2 = 2f64.ln();
    let mut best = f64::NEG_INFINITY;
    let mut best_n = 3u64;
    for n in 3..=n_max as usize {
        let ln_n = (n as f64).ln();
        let ratio = log_tau[tau[n] as usize] * ln_n.ln() / (l2 * ln_n);
        if ratio > best {
            best = ratio;
            best_n = n as u64;
        }
    }
    let mut report = VerifyReport::new("ratio_scan", (3, n_max));
    if best > RATIO_CEILING {
        report.push_failure(best_n, format!("ratio {best} exceeds {RATIO_CEILING}"));
    }
    report.push_extremal("max_ratio", best_n, best);
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn log_table(tau: &[u16]) -> Vec<f64> {
    let max = tau.iter().copied().max().unwrap_or(1) as usize;
    (0..=max).map(|v| (v.max(1) as f64).ln()).collect()
}

/// Positive root of mu^2 + mu = (3 - log 2) * 7, by bisection with a
/// certified bracket, then polished to full f64 accuracy.
pub fn mu_constant() -> f64 {
    let c = (3.0 - 2f64.ln()) * 7.0;
    let f = |x: f64| x * x + x - c;
    let (mut lo, mut hi) = (3.0f64, 4.0f64);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// How the sub-integrals of the summation identity are evaluated.
pub enum Integration<'a> {
    /// A continuous antiderivative of the integrand on [m, n]; sub-integrals
    /// become exact differences (valid across kinks of the original f).
    Antiderivative(&'a dyn Fn(f64) -> f64),
    /// Composite Gauss-Legendre with the given substep; the error estimate
    /// from step halving must stay within the identity tolerance.
    Quadrature { step: f64 },
}

/// Tolerance on the quadrature error estimate.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Evaluates f(N) S(N) - f(M) S(M) - integral_M^N F(t) S(t) dt where
/// S(k) = a_1 + ... + a_k and F = f' off a finite exceptional set.
///
/// `a[i]` holds a_{i+1}. Since S is a step function the integral splits into
/// unit intervals with constant S, where the sub-integral of F is exact when
/// an antiderivative is supplied and Gauss-Legendre otherwise.
pub fn partial_summation(
    a: &[f64],
    f: &dyn Fn(f64) -> f64,
    f_deriv: &dyn Fn(f64) -> f64,
    m: usize,
    n: usize,
    how: Integration<'_>,
) -> Result<f64> {
    if m >= n {
        return Err(Error::domain(format!("need M < N, got M = {m}, N = {n}")));
    }
    if a.len() < n {
        return Err(Error::domain(format!("sequence has {} terms, need {n}", a.len())));
    }
    let prefix = |k: usize| -> f64 {
        let s: KahanSum = a[..k].iter().copied().collect();
        s.value()
    };

    let mut integral = KahanSum::new();
    let mut err_estimate = 0.0f64;
    let mut s_run: KahanSum = a[..m].iter().copied().collect();
    #[allow(clippy::needless_range_loop)] // j is both the abscissa and the index
    for j in m..n {
        let s_j = s_run.value();
        let (lo, hi) = (j as f64, j as f64 + 1.0);
        let sub = match &how {
            Integration::Antiderivative(g) => g(hi) - g(lo),
            Integration::Quadrature { step } => {
                let step = *step;
                if step.is_nan() || step <= 0.0 {
                    return Err(Error::domain(format!("quadrature step {step} not positive")));
                }
                let coarse = gauss_legendre(f_deriv, lo, hi, step);
                let fine = gauss_legendre(f_deriv, lo, hi, step * 0.5);
                err_estimate += (coarse - fine).abs();
                fine
            }
        };
        integral.add(s_j * sub);
        s_run.add(a[j]);
    }
    if err_estimate > QUADRATURE_TOL {
        return Err(Error::Quadrature { estimate: err_estimate, tolerance: QUADRATURE_TOL });
    }
    Ok(f(n as f64) * prefix(n) - f(m as f64) * prefix(m) - integral.value())
}

/// Composite 5-point Gauss-Legendre on [lo, hi] with substep width <= step.
fn gauss_legendre(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
    const NODES: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let pieces = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / pieces as f64;
    let mut total = KahanSum::new();
    for i in 0..pieces {
        let a = lo + i as f64 * h;
        let c = a + 0.5 * h;
        for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
            total.add(w * f(c + 0.5 * h * x));
        }
    }
    total.value() * 0.5 * h
}

/// Numeric recomputation of 3 * integral_2^{e^6} dt/(log t)^4, the constant
/// the explicit divisor-bound derivation rounds to 11. Returns the value and
/// a step-halving error estimate.
pub fn inv_log4_integral() -> (f64, f64) {
    let f = |t: f64| 1.0 / t.ln().powi(4);
    let hi = 6f64.exp();
    let coarse = gauss_legendre(&f, 2.0, hi, 0.05);
    let fine = gauss_legendre(&f, 2.0, hi, 0.025);
    (3.0 * fine, 3.0 * (coarse - fine).abs())
}
