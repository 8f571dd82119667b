//! Sharded positivity campaign with checkpoint/resume.
//!
//! The n-range splits into fixed-size segments pulled by a worker pool over
//! one shared, immutable squarefree table. The main thread is the single
//! checkpoint writer; results merge deterministically by range order no
//! matter the completion order.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use sqsf::report::VerifyReport;
use sqsf::representation::{positivity_segment, sieve_squarefree, SegmentOutcome};

use crate::checkpoint::{self, CheckpointEntry};
use crate::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct PositivityOptions {
    pub n_max: u64,
    pub workers: usize,
    pub segment_size: u64,
    pub resume: bool,
    /// None disables checkpointing entirely.
    pub checkpoint_path: Option<PathBuf>,
    pub config_snapshot: String,
}

pub fn run_positivity(opts: &PositivityOptions) -> CliResult<VerifyReport> {
    if opts.n_max < 1 {
        return Err(CliError::Config("--max must be at least 1".into()));
    }
    if opts.workers == 0 || opts.segment_size == 0 {
        return Err(CliError::Config("workers and segment size must be positive".into()));
    }
    let start = std::time::Instant::now();

    let mut cached: Vec<CheckpointEntry> = Vec::new();
    if let Some(path) = &opts.checkpoint_path {
        if opts.resume {
            cached = checkpoint::load_and_repair(path)?;
        } else if path.exists() {
            // fresh run: the log restarts so the disjoint-union invariant
            // keeps holding for this campaign
            std::fs::write(path, b"")?;
        }
    }

    let mut report = VerifyReport::new("positivity", (1, opts.n_max));
    report.config_snapshot = format!(
        "early_exit=true workers={} segment_size={} resumed_segments={} {}",
        opts.workers,
        opts.segment_size,
        cached.len(),
        opts.config_snapshot
    );

    for e in &cached {
        if !e.ok && e.lo <= opts.n_max {
            report.push_failure(
                e.lo,
                format!("checkpoint records a failed sub-range [{}, {}]", e.lo, e.hi),
            );
        }
    }

    let gaps = checkpoint::missing_ranges(&cached, opts.n_max);
    if gaps.is_empty() {
        report.config_snapshot.push_str(" cached=full");
        report.wall_time_seconds = start.elapsed().as_secs_f64();
        return Ok(report);
    }

    let mut segments: Vec<(u64, u64)> = Vec::new();
    for (lo, hi) in gaps {
        let mut s = lo;
        while s <= hi {
            let e = hi.min(s + opts.segment_size - 1);
            segments.push((s, e));
            s = e + 1;
        }
    }

    let flags = sieve_squarefree(0, opts.n_max)?;
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<sqsf::Result<SegmentOutcome>>();

    let mut outcomes: Vec<SegmentOutcome> = Vec::with_capacity(segments.len());
    let mut first_error: Option<sqsf::Error> = None;
    std::thread::scope(|scope| {
        for _ in 0..opts.workers.min(segments.len()) {
            let tx = tx.clone();
            let segments = &segments;
            let flags = &flags;
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(lo, hi)) = segments.get(i) else { break };
                if tx.send(positivity_segment(flags, lo, hi, true)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        while let Ok(res) = rx.recv() {
            match res {
                Ok(outcome) => outcomes.push(outcome),
                Err(e) => {
                    // stop handing out segments and surface the first error
                    next.store(usize::MAX >> 1, Ordering::Relaxed);
                    if first_error.is_none() {
                        first_error = Some(e);
                    }
                }
            }
        }
    });
    if let Some(e) = first_error {
        return Err(e.into());
    }

    // deterministic merge by range order, then single-writer checkpointing
    outcomes.sort_unstable_by_key(|o| o.lo);
    let mut max_witness = None;
    for o in &outcomes {
        max_witness = SegmentOutcome::merge_witness(max_witness, o.max_witness);
        for &n in &o.failures {
            report.push_failure(n, "no x with n - x^2 squarefree");
        }
        if let Some(path) = &opts.checkpoint_path {
            checkpoint::append_entry(
                path,
                CheckpointEntry { lo: o.lo, hi: o.hi, ok: o.failures.is_empty() },
            )?;
        }
    }
    report.failures.sort_by_key(|f| f.n);
    if let Some((x, n)) = max_witness {
        report.push_extremal("max_witness_x", n, x as f64);
    }
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
