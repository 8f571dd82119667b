//! Certified recomputation of the quoted numeric constants.
//!
//! Every published value is echoed next to its recomputed enclosure with an
//! explicit provenance status, so a discrepancy is visible rather than
//! silently reconciled. `flagged` means the published figure is not
//! reproduced by the displayed derivation route; it never fails the run.

use serde::{Deserialize, Serialize};

use sqsf::asymptotic::singular_product;
use sqsf::divisor_bound::{inv_log4_integral, mu_constant};
use sqsf::primes::PrimeTable;

use crate::output::Format;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    /// Published reference value.
    pub published: f64,
    pub computed_lo: f64,
    pub computed_hi: f64,
    /// "confirmed" or "flagged".
    pub status: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub schema_version: u32,
    pub entries: Vec<ConstantEntry>,
    pub wall_time_seconds: f64,
}

fn entry(
    name: &str,
    published: f64,
    lo: f64,
    hi: f64,
    confirmed: bool,
    note: impl Into<String>,
) -> ConstantEntry {
    ConstantEntry {
        name: name.into(),
        published,
        computed_lo: lo,
        computed_hi: hi,
        status: if confirmed { "confirmed" } else { "flagged" }.into(),
        note: note.into(),
    }
}

pub fn compute(table: &PrimeTable, cutoff: u64, tolerance: f64) -> CliResult<ConstantsReport> {
    if table.limit() < 100_000 {
        return Err(CliError::Config(
            "constants need a prime table limit of at least 100000".into(),
        ));
    }
    let start = std::time::Instant::now();
    let mut entries = Vec::new();

    // density constant prod_p (1 - 2/p^2), published as > 0.3226
    let kappa = singular_product(1, table, cutoff)?;
    entries.push(entry(
        "kappa_lower",
        0.3226,
        kappa.lo(),
        kappa.hi(),
        kappa.lo() > 0.3226,
        format!("enclosure: {kappa}"),
    ));

    // sum of 1/p^2 over p <= 1e5, published as 0.45223 (5 decimals)
    let s = table.sum_inverse_prime_squares(100_000.0)?;
    let diff = (s.mid() - 0.45223).abs();
    entries.push(entry(
        "sum_inv_p2_1e5",
        0.45223,
        s.lo(),
        s.hi(),
        diff <= 1e-5 && s.width() <= tolerance,
        format!(
            "|computed - published| = {diff:.2e} (width {:.1e}, tolerance {tolerance:.1e}); \
             published figure matches the sum to 1e4 instead",
            s.width()
        ),
    ));

    // tail above 1e5 is below the integral bound 1e-5
    let full = table.sum_inverse_prime_squares(table.limit() as f64)?;
    let tail_hi = full.hi() - s.lo() + 1.0 / table.limit() as f64;
    entries.push(entry(
        "sum_inv_p2_tail_above_1e5",
        1e-5,
        full.lo() - s.hi(),
        tail_hi,
        tail_hi < 1e-5,
        "prime tail to the table limit plus 1/limit for the rest",
    ));

    // mu solving mu^2 + mu = (3 - log 2) * 7, published as 3.549
    let mu = mu_constant();
    let residual = (mu * mu + mu - (3.0 - 2f64.ln()) * 7.0).abs();
    entries.push(entry(
        "mu",
        3.549,
        mu,
        mu,
        residual < 1e-10 && (mu - 3.549).abs() < 5e-4,
        format!("defining-equation residual {residual:.2e}; mu = {mu:.12}"),
    ));

    // small-prime casework constants: certified chain uses the full prime
    // sum with its tail, the displayed route uses the published 5-decimal sum
    let p2_all_hi = full.hi() + 1.0 / table.limit() as f64;
    let display_route = 2.0 * (s.hi() + 1e-5);
    for (name, published, removed) in [
        ("case_const_general", 0.9045, 0.0),
        ("case_const_not1mod4", 0.4045, 2.0 / 4.0),
        ("case_const_notsq9", 0.6823, 2.0 / 9.0),
        ("case_const_sq36", 0.7934, 4.0 / 36.0),
    ] {
        let refined = 2.0 * p2_all_hi - removed;
        entries.push(entry(
            name,
            published,
            refined,
            refined,
            refined <= published,
            "2 * (full 1/p^2 sum upper end) minus the removed residue term",
        ));
    }
    entries.push(entry(
        "case_const_general_display_route",
        0.9045,
        display_route,
        display_route,
        display_route <= 0.9045,
        "2 * (certified 1e5 sum + 1e-5 integral tail); exceeds the published constant, \
         which only holds via the refined prime-tail route",
    ));

    // the quadrature constant rounded to 11 in the divisor-bound derivation
    let (iv, ierr) = inv_log4_integral();
    entries.push(entry(
        "inv_log4_integral",
        11.0,
        iv - ierr,
        iv + ierr,
        iv + ierr <= 11.0,
        "published value is a sound upward rounding",
    ));

    Ok(ConstantsReport {
        schema_version: sqsf::report::REPORT_SCHEMA_VERSION,
        entries,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn render(report: &ConstantsReport, format: Format) -> String {
    use std::fmt::Write;
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "name,published,computed_lo,computed_hi,status");
            for e in &report.entries {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    e.name, e.published, e.computed_lo, e.computed_hi, e.status
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "certified constants ({:.3}s)", report.wall_time_seconds);
            for e in &report.entries {
                let _ = writeln!(
                    out,
                    "  {:<34} published {:<10} computed [{:.12}, {:.12}] {}",
                    e.name, e.published, e.computed_lo, e.computed_hi, e.status
                );
                let _ = writeln!(out, "      {}", e.note);
            }
            out
        }
    }
}
