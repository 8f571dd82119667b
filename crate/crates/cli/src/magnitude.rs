//! Parser for number arguments that may exceed 64 bits.
//!
//! Exact counting commands need a u64; the log-domain main-term evaluator
//! accepts magnitudes like `10^440`, `2.5e300` or `3*10^500`.

use sqsf::LogMagnitude;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Magnitude {
    Exact(u64),
    Log(LogMagnitude),
}

/// Accepted forms: a plain decimal integer, `10^K`, `A*10^K`, or scientific
/// `AeK` with a positive mantissa. Values that fit in u64 come back exact.
pub fn parse_magnitude(s: &str) -> Result<Magnitude, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Ok(n) = s.parse::<u64>() {
        if n == 0 {
            return Err("magnitude must be positive".into());
        }
        return Ok(Magnitude::Exact(n));
    }

    let (mantissa, exponent) = if let Some(rest) = s.strip_prefix("10^") {
        (1.0, rest)
    } else if let Some((m, rest)) = s.split_once("*10^") {
        let m: f64 = m.trim().parse().map_err(|_| format!("bad mantissa {m:?}"))?;
        (m, rest)
    } else if let Some((m, rest)) = s.split_once(['e', 'E']) {
        let m: f64 = m.trim().parse().map_err(|_| format!("bad mantissa {m:?}"))?;
        (m, rest)
    } else {
        return Err(format!("cannot parse {s:?} as an integer or magnitude"));
    };
    if mantissa.is_nan() || mantissa <= 0.0 || !mantissa.is_finite() {
        return Err(format!("mantissa {mantissa} must be a positive finite number"));
    }
    let exponent: i32 = exponent
        .trim()
        .parse()
        .map_err(|_| format!("bad exponent {exponent:?}"))?;
    let log10 = mantissa.log10() + exponent as f64;
    if !log10.is_finite() {
        return Err("magnitude out of range".into());
    }
    // collapse back to exact when it fits and is integral
    if log10 < 19.0 {
        let v = mantissa * 10f64.powi(exponent);
        if v.fract() == 0.0 && v >= 1.0 && v <= u64::MAX as f64 {
            return Ok(Magnitude::Exact(v as u64));
        }
    }
    Ok(Magnitude::Log(LogMagnitude::from_log10(log10)))
}
