//! Command-line toolkit for representation counts, divisor-function bounds
//! and the certified constants behind them.
//!
//! Exit codes are a stable contract: 0 means every check verified, 1 means a
//! mathematical failure was found and reported, 2 means a configuration or
//! capacity problem prevented the run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sqsf::asymptotic::{
    asymptotic_error_bound, casework_verify, closed_form_error_bound_log, explicit_error_budget,
    main_term, main_term_lower_log, main_term_star, singular_product, CaseId,
};
use sqsf::divisor_bound::{ratio_scan, tau_h_bound_verify, tau_simple_bound_verify, RATIO_CEILING};
use sqsf::primes::build_prime_table;
use sqsf::representation::r_count;
use sqsf::{LogMagnitude, VerifyReport};

use sqsf_cli::campaign::{run_positivity, PositivityOptions};
use sqsf_cli::config::{self, Config};
use sqsf_cli::constants;
use sqsf_cli::magnitude::{parse_magnitude, Magnitude};
use sqsf_cli::output::{render_report, Format};
use sqsf_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "sqsf", version, about = "Square-plus-squarefree representation toolkit")]
struct Cli {
    /// Output format: text, json or csv
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Configuration file (key = value); SQSF_CONFIG is honored as fallback
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify that every n up to --max is a square plus a squarefree
    Positivity {
        #[arg(long)]
        max: u64,
        /// Continue from the checkpoint log instead of starting over
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Checkpoint log path (overrides config); "none" disables it
        #[arg(long)]
        checkpoint: Option<String>,
    },
    /// Representation counts and main-term evaluation for one n
    Rcount {
        /// Plain integer, or a magnitude like 10^440 for --main-term
        n: String,
        /// Also report the coprime-witness count
        #[arg(long)]
        star: bool,
        /// Report the singular-series main term (log domain for huge n)
        #[arg(long = "main-term")]
        main_term: bool,
        /// Report the explicit error-budget components
        #[arg(long)]
        budget: bool,
        /// Euler-product cutoff (defaults to the prime table limit)
        #[arg(long)]
        cutoff: Option<u64>,
    },
    /// Divisor-function bound checks and range scans
    Tau {
        /// Check a single n
        #[arg(long)]
        n: Option<u64>,
        /// Scan every n up to this limit
        #[arg(long)]
        scan: Option<u64>,
        /// Exponent parameter for the explicit bound
        #[arg(long)]
        delta: Option<f64>,
        /// Use the simple bound n^{3/loglog n}
        #[arg(long)]
        simple: bool,
        /// Scan the normalized ratio against its published ceiling
        #[arg(long)]
        ratio: bool,
    },
    /// Recompute and certify the quoted numeric constants
    Constants {
        #[arg(long)]
        cutoff: Option<u64>,
    },
    /// Residue casework: classification, inequalities, positivity thresholds
    Casework {
        #[arg(long)]
        max: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = cli.format.unwrap_or(cfg.output_format);
    match run(cli.cmd, &cfg, format) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(report: &VerifyReport, format: Format) -> bool {
    print!("{}", render_report(report, format));
    report.passed()
}

fn run(cmd: Cmd, cfg: &Config, format: Format) -> CliResult<bool> {
    match cmd {
        Cmd::Positivity { max, resume, workers, checkpoint } => {
            let checkpoint_path = match checkpoint.as_deref() {
                Some("none") => None,
                Some(p) => Some(PathBuf::from(p)),
                None => Some(cfg.checkpoint_path.clone()),
            };
            let report = run_positivity(&PositivityOptions {
                n_max: max,
                workers: workers.unwrap_or(cfg.worker_count),
                segment_size: cfg.segment_size,
                resume,
                checkpoint_path,
                config_snapshot: cfg.snapshot(),
            })?;
            Ok(emit(&report, format))
        }

        Cmd::Rcount { n, star, main_term: want_main, budget, cutoff } => {
            let parsed = parse_magnitude(&n).map_err(CliError::Config)?;
            match parsed {
                Magnitude::Exact(n) => run_rcount_exact(n, star, want_main, budget, cutoff, cfg),
                Magnitude::Log(m) => {
                    if !want_main {
                        return Err(CliError::Config(format!(
                            "{n} exceeds the exact 64-bit range; only --main-term works in log mode"
                        )));
                    }
                    run_rcount_log(m, cutoff, cfg)
                }
            }
        }

        Cmd::Tau { n, scan, delta, simple, ratio } => run_tau(n, scan, delta, simple, ratio, format),

        Cmd::Constants { cutoff } => {
            let cutoff = cutoff.unwrap_or(cfg.prime_table_limit);
            if cutoff > cfg.prime_table_limit {
                return Err(CliError::Config(format!(
                    "cutoff {cutoff} beyond prime_table_limit {}",
                    cfg.prime_table_limit
                )));
            }
            let table = build_prime_table(cfg.prime_table_limit)?;
            let report = constants::compute(&table, cutoff, cfg.enclosure_tolerance)?;
            print!("{}", constants::render(&report, format));
            Ok(true)
        }

        Cmd::Casework { max } => {
            let report = casework_verify(max)?;
            let passed = emit(&report, format);
            if format == Format::Text {
                println!("  thresholds:");
                for case in [
                    CaseId::Not1Mod4,
                    CaseId::NotSquareMod9,
                    CaseId::SquareMod36,
                    CaseId::General,
                ] {
                    println!(
                        "    {:<10} r* certified positive from n = {}",
                        case.label(),
                        case.threshold()
                    );
                }
            }
            Ok(passed)
        }
    }
}

fn run_rcount_exact(
    n: u64,
    star: bool,
    want_main: bool,
    budget: bool,
    cutoff: Option<u64>,
    cfg: &Config,
) -> CliResult<bool> {
    let c = r_count(n)?;
    match c.witness {
        Some(x) => println!("r({n}) = {} (smallest witness x = {x})", c.r),
        None => println!("r({n}) = 0"),
    }
    if star {
        println!("r*({n}) = {}", c.r_star);
    }
    if want_main {
        let cutoff = cutoff.unwrap_or(cfg.prime_table_limit);
        if cutoff > cfg.prime_table_limit {
            return Err(CliError::Config(format!(
                "cutoff {cutoff} beyond prime_table_limit {}",
                cfg.prime_table_limit
            )));
        }
        let table = build_prime_table(cfg.prime_table_limit)?;
        let mt = main_term(n, &table, cutoff)?;
        println!("main term: {mt}");
        if star {
            let ms = main_term_star(n, &table, cutoff)?;
            println!("main term (coprime): {ms}");
        }
        let prod = singular_product(n, &table, cutoff)?;
        println!("singular product: {prod}");
    }
    if budget {
        let b = explicit_error_budget(n)?;
        println!(
            "error budget at y = {:.6}: total {:.6e} (triples {:.6e}, remainders {:.6e}, tail {:.6e}; tau = {})",
            b.y_used, b.total, b.s2_term, b.rd_term, b.tail_term, b.tau_bound_used
        );
    }
    Ok(true)
}

fn run_rcount_log(m: LogMagnitude, cutoff: Option<u64>, cfg: &Config) -> CliResult<bool> {
    let cutoff = cutoff.unwrap_or(cfg.prime_table_limit);
    let table = build_prime_table(cfg.prime_table_limit)?;
    let kappa = singular_product(1, &table, cutoff.min(table.limit()))?;
    let lower = main_term_lower_log(m, kappa.lo())?;
    println!("main term lower bound: {lower} (using kappa >= {:.10})", kappa.lo());
    let closed = closed_form_error_bound_log(m, 0.342)?;
    println!("error bound (closed form, eps = 0.342): {closed}");
    let thm = asymptotic_error_bound(m)?;
    println!("error bound (asymptotic display): {thm}");
    let positive = lower.log10() > closed.log10();
    println!(
        "main term {} the closed-form error bound at this magnitude",
        if positive { "dominates" } else { "does not dominate" }
    );
    Ok(true)
}

fn run_tau(
    n: Option<u64>,
    scan: Option<u64>,
    delta: Option<f64>,
    simple: bool,
    ratio: bool,
    format: Format,
) -> CliResult<bool> {
    match (n, scan) {
        (Some(n), None) => {
            let delta = delta.ok_or_else(|| {
                CliError::Config("tau --n needs --delta for the explicit bound".into())
            })?;
            let ok = sqsf::divisor_bound::tau_bound_check(n, delta)?;
            let tau = sqsf::arithfun::tau(n)?;
            let h = sqsf::divisor_bound::h_of_delta(delta)?;
            println!(
                "tau({n}) = {tau}; bound e^H({delta}) n^{delta} with H = {h:.6}: {}",
                if ok { "holds" } else { "VIOLATED" }
            );
            Ok(ok)
        }
        (None, Some(limit)) => {
            let report = if ratio {
                let r = ratio_scan(limit)?;
                if let Some(w) = r.extremal_value("max_ratio") {
                    println!(
                        "max normalized ratio {} at n = {} (ceiling {RATIO_CEILING})",
                        w.value, w.n
                    );
                }
                r
            } else if simple {
                tau_simple_bound_verify(limit)?
            } else {
                let delta = delta.ok_or_else(|| {
                    CliError::Config("tau --scan needs one of --simple, --ratio or --delta".into())
                })?;
                tau_h_bound_verify(limit, delta)?
            };
            Ok(emit(&report, format))
        }
        _ => Err(CliError::Config("tau needs exactly one of --n or --scan".into())),
    }
}
