//! Append-only campaign checkpoint log.
//!
//! One completed sub-range per line, `lo hi status` with status `ok` or
//! `fail`. Corruption handling: parsing stops at the first malformed or
//! overlapping line, the file is truncated there, and the campaign
//! recomputes from that point. Re-running a fully covered campaign performs
//! no computation and reports the cached outcome.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckpointEntry {
    pub lo: u64,
    pub hi: u64,
    pub ok: bool,
}

/// Parse a checkpoint body; returns the accepted entries and the byte length
/// of the valid prefix. Entries must be well-formed, ordered ranges that do
/// not overlap anything accepted before them.
pub fn parse_checkpoint(text: &str) -> (Vec<CheckpointEntry>, usize) {
    let mut entries: Vec<CheckpointEntry> = Vec::new();
    let mut valid_len = 0usize;
    let mut offset = 0usize;
    for raw in text.split_inclusive('\n') {
        let line = raw.trim_end_matches(['\n', '\r']);
        offset += raw.len();
        if !raw.ends_with('\n') {
            // partial trailing line, e.g. interrupted write: not yet valid
            break;
        }
        if line.trim().is_empty() {
            valid_len = offset;
            continue;
        }
        let mut parts = line.split_ascii_whitespace();
        let (Some(lo), Some(hi), Some(status), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            break;
        };
        let (Ok(lo), Ok(hi)) = (lo.parse::<u64>(), hi.parse::<u64>()) else {
            break;
        };
        let ok = match status {
            "ok" => true,
            "fail" => false,
            _ => break,
        };
        if lo > hi || entries.iter().any(|e| lo <= e.hi && e.lo <= hi) {
            break;
        }
        entries.push(CheckpointEntry { lo, hi, ok });
        valid_len = offset;
    }
    (entries, valid_len)
}

/// Load a checkpoint file, truncating it at the first malformed line so the
/// next append continues from a clean prefix. Missing file means no entries.
pub fn load_and_repair(path: &Path) -> CliResult<Vec<CheckpointEntry>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let (entries, valid_len) = parse_checkpoint(&text);
    if valid_len < text.len() {
        let f = OpenOptions::new().write(true).open(path)?;
        f.set_len(valid_len as u64)?;
    }
    Ok(entries)
}

pub fn append_entry(path: &Path, entry: CheckpointEntry) -> CliResult<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(f, "{} {} {}", entry.lo, entry.hi, if entry.ok { "ok" } else { "fail" })?;
    Ok(())
}

/// Sub-ranges of [1, n_max] not covered by the entries.
pub fn missing_ranges(entries: &[CheckpointEntry], n_max: u64) -> Vec<(u64, u64)> {
    let mut covered: Vec<(u64, u64)> = entries
        .iter()
        .filter(|e| e.lo <= n_max)
        .map(|e| (e.lo.max(1), e.hi.min(n_max)))
        .collect();
    covered.sort_unstable();
    let mut gaps = Vec::new();
    let mut next = 1u64;
    for (lo, hi) in covered {
        if lo > next {
            gaps.push((next, lo - 1));
        }
        next = next.max(hi + 1);
    }
    if next <= n_max {
        gaps.push((next, n_max));
    }
    gaps
}
