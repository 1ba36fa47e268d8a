//! Command-line front end: `compute`, `verify <suite>`, and `table`.
//!
//! Exit codes: 0 success, 1 aggregate/suite or partial table failure,
//! 2 invalid configuration or unknown suite, 3 numeric engine failure.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{BatchConfig, NumberKind, OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::norms::Budget;
use crate::report::{Report, SequenceReport, TableRow};
use crate::schemes::{gen_kolmogorov_op, scheme_approx_number};
use crate::snumbers::{snumber_sequence, SNumberKind};
use crate::suites::{run_suite, Suite};
use crate::symmetrized::symmetrized_approx_number;
use crate::zoo::build_operator;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "snlab", version, about = "s-number laboratory for finite l_p operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonFlags {
    /// Path to a JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed override.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format override.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<OutputFormat>,
    /// Duality pass tolerance override.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Search restart budget override.
    #[arg(long)]
    pub budget_restarts: Option<usize>,
    /// Search iteration budget override.
    #[arg(long)]
    pub budget_iters: Option<usize>,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(format!("unknown format '{other}' (expected json|csv)")),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the requested s-number sequences for one operator.
    Compute {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run a named verification suite.
    Verify {
        /// One of: properties, hutton, kolmogorov-dual, gelfand-dual,
        /// tau-dual, scheme-axioms, scheme-dual, profile.
        suite: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Compute a table over a batch of operators (CSV oriented).
    Table {
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn load_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{path:?}: {e}")))
}

fn apply_overrides(cfg: &mut RunConfig, flags: &CommonFlags) {
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &flags.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = flags.format {
        cfg.format = format;
    }
    if let Some(tol) = flags.tolerance {
        cfg.tolerance = Some(tol);
    }
    if let Some(r) = flags.budget_restarts {
        cfg.budget.restarts = r;
    }
    if let Some(i) = flags.budget_iters {
        cfg.budget.iters = i;
    }
}

fn emit(report: &Report, format: OutputFormat, out: Option<&PathBuf>) -> Result<()> {
    let text = match format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => report.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Sequences for one config; errors here are numeric-engine failures.
fn compute_sequences(cfg: &RunConfig) -> Result<Vec<SequenceReport>> {
    let t = build_operator(&cfg.operator)?;
    let budget: Budget = cfg.budget();
    let mut out = Vec::new();
    for kind in &cfg.numbers {
        let seq = match kind {
            NumberKind::Alpha | NumberKind::Delta | NumberKind::C => {
                let k = match kind {
                    NumberKind::Alpha => SNumberKind::Alpha,
                    NumberKind::Delta => SNumberKind::Delta,
                    _ => SNumberKind::Gelfand,
                };
                let s = snumber_sequence(&t, k, cfg.n_max, &budget, cfg.seed)?;
                SequenceReport::from_estimates(kind.name(), &s.estimates)
            }
            NumberKind::Tau => {
                let m = cfg.net_size.ok_or_else(|| {
                    Error::InvalidConfig("tau requires net_size".into())
                })?;
                let mut estimates = Vec::with_capacity(cfg.n_max + 1);
                let mut worst = None;
                for n in 0..=cfg.n_max {
                    let tau = symmetrized_approx_number(
                        &t,
                        n,
                        m,
                        &budget,
                        cfg.seed.wrapping_add(n as u64),
                    )?;
                    let eta = tau.functional_net.eta.max(tau.vector_net.eta);
                    let keep = match worst {
                        None => true,
                        Some((e, _)) => eta > e,
                    };
                    if keep {
                        worst = Some((eta, tau.functional_net));
                    }
                    estimates.push(tau.estimate);
                }
                let mut sr = SequenceReport::from_estimates(kind.name(), &estimates);
                sr.net = worst.map(|(_, res)| res);
                sr
            }
            NumberKind::AlphaQ | NumberKind::DeltaQ => {
                let spec = cfg.scheme.as_ref().ok_or(Error::MissingDualScheme)?;
                let scheme = spec.build(t.codomain);
                let mut estimates = Vec::with_capacity(cfg.n_max + 1);
                for n in 0..=cfg.n_max {
                    let e = if matches!(kind, NumberKind::AlphaQ) {
                        scheme_approx_number(&t, &scheme, n, &budget, cfg.seed)?
                    } else {
                        gen_kolmogorov_op(&t, &scheme, n, &budget, cfg.seed)?
                    };
                    estimates.push(e);
                }
                SequenceReport::from_estimates(kind.name(), &estimates)
            }
        };
        out.push(seq);
    }
    // NaN anywhere is a numeric engine failure, not a report
    for s in &out {
        for e in &s.entries {
            if !e.value.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "non-finite value in {} at n={}",
                    s.kind, e.n
                )));
            }
        }
    }
    Ok(out)
}

fn cmd_compute(flags: &CommonFlags) -> i32 {
    let path = match &flags.config {
        Some(p) => p,
        None => {
            eprintln!("{{\"error\":\"--config is required for compute\"}}");
            return EXIT_INVALID_CONFIG;
        }
    };
    let mut cfg: RunConfig = match load_json(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{{\"error\":{:?}}}", e.to_string());
            return EXIT_INVALID_CONFIG;
        }
    };
    apply_overrides(&mut cfg, flags);
    if let Err(e) = cfg.validate() {
        eprintln!("{{\"error\":{:?}}}", e.to_string());
        return EXIT_INVALID_CONFIG;
    }
    // a malformed operator spec is a config error, not a numeric failure
    if let Err(e) = build_operator(&cfg.operator) {
        eprintln!("{{\"error\":{:?}}}", e.to_string());
        return EXIT_INVALID_CONFIG;
    }
    let start = Instant::now();
    let sequences = match compute_sequences(&cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{{\"error\":{:?}}}", e.to_string());
            return EXIT_NUMERIC;
        }
    };
    let mut report = Report::new(serde_json::to_value(&cfg).unwrap_or_default());
    report.sequences = sequences;
    report.timings.total_ms = start.elapsed().as_millis();
    match emit(&report, cfg.format, cfg.out.as_ref()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{{\"error\":{:?}}}", e.to_string());
            EXIT_NUMERIC
        }
    }
}

fn cmd_verify(suite_name: &str, flags: &CommonFlags) -> i32 {
    let suite = match Suite::from_str(suite_name) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{{\"error\":{:?}}}", e.to_string());
            return EXIT_INVALID_CONFIG;
        }
    };
    let seed = flags.seed.unwrap_or(0);
    let mut budget = Budget::default();
    if let Some(r) = flags.budget_restarts {
        budget.restarts = r;
    }
    if let Some(i) = flags.budget_iters {
        budget.iters = i;
    }
    let start = Instant::now();
    let outcome = match run_suite(suite, seed, &budget) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{{\"error\":{:?}}}", e.to_string());
            return EXIT_NUMERIC;
        }
    };
    let pass = outcome.pass;
    let mut report = Report::new(serde_json::json!({
        "suite": suite.name(),
        "seed": seed,
        "budget": {"restarts": budget.restarts, "iters": budget.iters},
    }));
    report.suite = Some(outcome);
    report.timings.total_ms = start.elapsed().as_millis();
    let format = flags.format.unwrap_or(OutputFormat::Json);
    if let Err(e) = emit(&report, format, flags.out.as_ref()) {
        eprintln!("{{\"error\":{:?}}}", e.to_string());
        return EXIT_NUMERIC;
    }
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_table(flags: &CommonFlags) -> i32 {
    let path = match &flags.config {
        Some(p) => p,
        None => {
            eprintln!("{{\"error\":\"--config is required for table\"}}");
            return EXIT_INVALID_CONFIG;
        }
    };
    let batch: BatchConfig = match load_json(path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("{{\"error\":{:?}}}", e.to_string());
            return EXIT_INVALID_CONFIG;
        }
    };
    if batch.operators.is_empty() || batch.numbers.is_empty() {
        eprintln!("{{\"error\":\"batch needs operators and numbers\"}}");
        return EXIT_INVALID_CONFIG;
    }
    let start = Instant::now();
    let mut rows: Vec<TableRow> = Vec::new();
    let mut any_failed = false;
    for idx in 0..batch.operators.len() {
        let mut cfg = batch.run_config(idx);
        if let Some(seed) = flags.seed {
            cfg.seed = seed.wrapping_add(idx as u64);
        }
        let result = cfg.validate().and_then(|_| compute_sequences(&cfg));
        match result {
            Ok(sequences) => {
                for s in &sequences {
                    for e in &s.entries {
                        rows.push(TableRow {
                            operator: idx,
                            kind: s.kind.clone(),
                            n: e.n,
                            value: Some(e.value),
                            direction: Some(e.direction),
                            error: None,
                        });
                    }
                }
            }
            Err(err) => {
                any_failed = true;
                for kind in &batch.numbers {
                    rows.push(TableRow {
                        operator: idx,
                        kind: kind.name().to_string(),
                        n: 0,
                        value: None,
                        direction: None,
                        error: Some(err.to_string()),
                    });
                }
            }
        }
    }
    let mut report = Report::new(serde_json::to_value(&batch).unwrap_or_default());
    report.table = rows;
    report.timings.total_ms = start.elapsed().as_millis();
    let format = flags.format.unwrap_or(OutputFormat::Csv);
    let out = flags.out.as_ref().or(batch.out.as_ref());
    if let Err(e) = emit(&report, format, out) {
        eprintln!("{{\"error\":{:?}}}", e.to_string());
        return EXIT_NUMERIC;
    }
    if any_failed {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

/// Configures the global thread pool from SNLAB_THREADS (best effort) and
/// dispatches the parsed command. Returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Ok(threads) = std::env::var("SNLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    match &cli.command {
        Command::Compute { flags } => cmd_compute(flags),
        Command::Verify { suite, flags } => cmd_verify(suite, flags),
        Command::Table { flags } => cmd_table(flags),
    }
}
