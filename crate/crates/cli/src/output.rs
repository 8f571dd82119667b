//! Report rendering: human text, versioned JSON, CSV rows.

use std::fmt;
use std::str::FromStr;

use sqsf::VerifyReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown output format {other:?} (text, json, csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Render a campaign report in the requested format.
pub fn render_report(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Csv => render_csv(report),
        Format::Text => render_text(report),
    }
}

fn render_text(report: &VerifyReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(
        out,
        "campaign {} over [{}, {}]: {verdict} ({} failures, {:.3}s)",
        report.campaign,
        report.range.0,
        report.range.1,
        report.failures.len(),
        report.wall_time_seconds,
    );
    for f in report.failures.iter().take(20) {
        let _ = writeln!(out, "  failure at n = {}: {}", f.n, f.detail);
    }
    if report.failures.len() > 20 {
        let _ = writeln!(out, "  ... {} more failures", report.failures.len() - 20);
    }
    for e in &report.extremal {
        let _ = writeln!(out, "  {} = {} at n = {}", e.name, e.value, e.n);
    }
    if !report.config_snapshot.is_empty() {
        let _ = writeln!(out, "  config: {}", report.config_snapshot);
    }
    out
}

fn render_csv(report: &VerifyReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "record,campaign,lo,hi,passed,failures,wall_time_seconds");
    let _ = writeln!(
        out,
        "summary,{},{},{},{},{},{}",
        report.campaign,
        report.range.0,
        report.range.1,
        report.passed(),
        report.failures.len(),
        report.wall_time_seconds,
    );
    for f in &report.failures {
        let _ = writeln!(out, "failure,{},{},,,{},", report.campaign, f.n, csv_escape(&f.detail));
    }
    for e in &report.extremal {
        let _ = writeln!(out, "extremal,{},{},,,{},{}", report.campaign, e.n, csv_escape(&e.name), e.value);
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
