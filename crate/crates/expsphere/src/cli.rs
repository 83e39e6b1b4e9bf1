//! Command-line front end.
//!
//! Subcommands: `exp` (compute `e^A`), `fourier` (compute `e^{iA}` with a
//! unitarity report), `diagnose` (identity and negative-control table),
//! `converge` (error ladders), `bench` (timing suite). Data goes to
//! stdout or `--output`; human-readable causes go to stderr. Exit codes:
//! 0 success, 2 unreadable input, 3 non-hermitian input, 4 truncation cap
//! exceeded, 5 diagnostics failure, 1 anything else.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::diagnostics::run_diagnostics;
use crate::error::{Error, Result};
use crate::expm::expm_oracle;
use crate::generate::bench_suite;
use crate::io::read_hermitian;
use crate::matrix::{Complex64, ComplexMatrix, HermitianMatrix};
use crate::mc::{expm_fourier_mode_threaded, expm_monte_carlo_threaded};
use crate::report::{Backend, EstimateReport};
use crate::series::{expm_series_fixed_order, expm_series_general};
use crate::sphere::SamplerConfig;

/// Matrix exponentials of hermitian matrices by sphere-average Monte
/// Carlo, an exact truncated moment series, and a classical oracle.
#[derive(Debug, Parser)]
#[command(name = "expsphere", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute e^A for the hermitian matrix in --input.
    Exp(RunConfig),
    /// Compute e^{iA} and report how far the result is from unitary.
    Fourier(RunConfig),
    /// Run the identity diagnostics table (exit 5 if any row fails).
    Diagnose(RunConfig),
    /// Emit an error-vs-effort ladder for the chosen backend.
    Converge(RunConfig),
    /// Time every backend on a generated matrix suite.
    Bench(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Mc,
    Series,
    Oracle,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RunConfig {
    /// Path to a matrix JSON file ({"dim": r, "re": [[..]], "im": [[..]]}).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Which engine(s) to run.
    #[arg(long, value_enum, default_value = "all")]
    pub backend: BackendChoice,
    /// Monte Carlo sample budget.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Series truncation target (absolute, entrywise).
    #[arg(long, default_value_t = 1e-10)]
    pub target_abs_err: f64,
    /// Sampler seed; equal seeds give bitwise equal runs.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Number of independent sample streams.
    #[arg(long, default_value_t = 1)]
    pub streams: u64,
    /// Output encoding for the data on stdout (or --output).
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Write data here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn sampler(&self) -> SamplerConfig {
        SamplerConfig::with_streams(self.seed, self.streams)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let uses_mc = matches!(self.backend, BackendChoice::Mc | BackendChoice::All);
        let uses_series = matches!(self.backend, BackendChoice::Series | BackendChoice::All);
        if uses_mc && self.samples == 0 {
            return Err("samples must be at least 1 for the mc backend".into());
        }
        // NaN must fail this check too, hence no `<= 0.0` comparison.
        let target_is_positive = self.target_abs_err > 0.0;
        if uses_series && !target_is_positive {
            return Err("target-abs-err must be positive for the series backend".into());
        }
        Ok(())
    }

    fn required_input(&self) -> Result<HermitianMatrix> {
        let path = self.input.as_ref().ok_or_else(|| {
            Error::BadMatrixFile("this command needs --input <matrix.json>".into())
        })?;
        read_hermitian(path)
    }
}

/// Worker-thread cap from the THREADS environment variable; absence means
/// one. Rejects zero and garbage rather than guessing.
pub fn threads_from_env() -> std::result::Result<usize, String> {
    match std::env::var("THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(format!("THREADS is not readable: {e}")),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("THREADS must be a positive integer, got {raw:?}")),
        },
    }
}

/// Full CLI entry point: parse errors aside, always returns the process
/// exit code instead of exiting, so tests can drive it in-process.
pub fn run(cli: Cli) -> i32 {
    let threads = match threads_from_env() {
        Ok(n) => n,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let cfg_ref = match &cli.command {
        Command::Exp(c)
        | Command::Fourier(c)
        | Command::Diagnose(c)
        | Command::Converge(c)
        | Command::Bench(c) => c,
    };
    if let Err(msg) = cfg_ref.validate() {
        eprintln!("error: {msg}");
        return 1;
    }
    let outcome = match cli.command {
        Command::Exp(cfg) => cmd_exp(&cfg, threads, false),
        Command::Fourier(cfg) => cmd_exp(&cfg, threads, true),
        Command::Diagnose(cfg) => cmd_diagnose(&cfg),
        Command::Converge(cfg) => cmd_converge(&cfg, threads),
        Command::Bench(cfg) => cmd_bench(&cfg, threads),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Serialize)]
struct BackendRow {
    backend: Backend,
    report: EstimateReport,
    /// Largest entry of |U^H U - 1|; only present in fourier mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    unitarity_deviation: Option<f64>,
}

#[derive(Serialize)]
struct PairDeviation {
    first: Backend,
    second: Backend,
    max_abs_deviation: f64,
}

#[derive(Serialize)]
struct ExpOutput {
    command: &'static str,
    dim: usize,
    results: Vec<BackendRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pairwise: Vec<PairDeviation>,
}

fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    let gram = &u.adjoint() * u;
    gram.max_abs_diff(&ComplexMatrix::identity(u.dim()))
}

fn cmd_exp(cfg: &RunConfig, threads: usize, fourier: bool) -> Result<i32> {
    let a = cfg.required_input()?;
    let sampler = cfg.sampler();
    let mut results: Vec<BackendRow> = Vec::new();
    let wanted: &[Backend] = match cfg.backend {
        BackendChoice::Mc => &[Backend::Mc],
        BackendChoice::Series => &[Backend::Series],
        BackendChoice::Oracle => &[Backend::Oracle],
        BackendChoice::All => &[Backend::Mc, Backend::Series, Backend::Oracle],
    };
    for &backend in wanted {
        let report = match (backend, fourier) {
            (Backend::Mc, false) => expm_monte_carlo_threaded(&a, cfg.samples, &sampler, threads),
            (Backend::Mc, true) => expm_fourier_mode_threaded(&a, cfg.samples, &sampler, threads),
            (Backend::Series, _) => {
                let target = cfg.target_abs_err;
                let m = if fourier {
                    a.as_matrix().scale(Complex64::new(0.0, 1.0))
                } else {
                    a.as_matrix().clone()
                };
                expm_series_general(&m, target)?
            }
            (Backend::Oracle, _) => {
                let start = Instant::now();
                let m = if fourier {
                    a.as_matrix().scale(Complex64::new(0.0, 1.0))
                } else {
                    a.as_matrix().clone()
                };
                let value = expm_oracle(&m);
                EstimateReport {
                    value,
                    abs_error_estimate: 0.0,
                    backend: Backend::Oracle,
                    samples_or_terms: 1,
                    seed: None,
                    wall_time: start.elapsed().as_secs_f64(),
                }
            }
        };
        let unit = fourier.then(|| unitarity_deviation(&report.value));
        results.push(BackendRow {
            backend,
            report,
            unitarity_deviation: unit,
        });
    }
    let mut pairwise = Vec::new();
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            pairwise.push(PairDeviation {
                first: results[i].backend,
                second: results[j].backend,
                max_abs_deviation: results[i]
                    .report
                    .value
                    .max_abs_diff(&results[j].report.value),
            });
        }
    }
    let output = ExpOutput {
        command: if fourier { "fourier" } else { "exp" },
        dim: a.as_matrix().dim(),
        results,
        pairwise,
    };
    match cfg.format {
        OutputFormat::Json => emit(cfg, &serde_json::to_string_pretty(&output).unwrap())?,
        OutputFormat::Csv => {
            let mut text = String::from("backend,row,col,re,im\n");
            for r in &output.results {
                let m = &r.report.value;
                for row in 0..m.dim() {
                    for col in 0..m.dim() {
                        let z = m.get(row, col);
                        text.push_str(&format!(
                            "{},{row},{col},{:.17e},{:.17e}\n",
                            r.backend, z.re, z.im
                        ));
                    }
                }
            }
            text.push_str("backend,abs_error_estimate,samples_or_terms,wall_time,unitarity\n");
            for r in &output.results {
                text.push_str(&format!(
                    "{},{:.6e},{},{:.6},{}\n",
                    r.backend,
                    r.report.abs_error_estimate,
                    r.report.samples_or_terms,
                    r.report.wall_time,
                    r.unitarity_deviation
                        .map_or(String::new(), |d| format!("{d:.6e}")),
                ));
            }
            emit(cfg, &text)?;
        }
    }
    Ok(0)
}

fn cmd_diagnose(cfg: &RunConfig) -> Result<i32> {
    let checks = run_diagnostics(cfg.samples, &cfg.sampler());
    let all_passed = checks.iter().all(|c| c.passed);
    match cfg.format {
        OutputFormat::Json => emit(cfg, &serde_json::to_string_pretty(&checks).unwrap())?,
        OutputFormat::Csv => {
            let mut text = String::from("name,passed,detail\n");
            for c in &checks {
                text.push_str(&format!(
                    "{},{},\"{}\"\n",
                    c.name,
                    c.passed,
                    c.detail.replace('"', "'")
                ));
            }
            emit(cfg, &text)?;
        }
    }
    if all_passed {
        Ok(0)
    } else {
        for c in checks.iter().filter(|c| !c.passed) {
            eprintln!("diagnostic failed: {} ({})", c.name, c.detail);
        }
        Ok(5)
    }
}

#[derive(Serialize)]
struct McLadderRow {
    samples: u64,
    max_abs_error: f64,
    predicted_standard_error: f64,
}

#[derive(Serialize)]
struct SeriesLadderRow {
    kmax: usize,
    max_abs_residual: f64,
}

#[derive(Serialize)]
struct ConvergeOutput {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    mc: Vec<McLadderRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    series: Vec<SeriesLadderRow>,
}

fn cmd_converge(cfg: &RunConfig, threads: usize) -> Result<i32> {
    let a = cfg.required_input()?;
    let oracle = expm_oracle(a.as_matrix());
    let sampler = cfg.sampler();
    let mut out = ConvergeOutput {
        mc: Vec::new(),
        series: Vec::new(),
    };
    if matches!(cfg.backend, BackendChoice::Mc | BackendChoice::All) {
        let mut n = 1000u64;
        while n <= cfg.samples.max(1000) {
            let report = expm_monte_carlo_threaded(&a, n, &sampler, threads);
            out.mc.push(McLadderRow {
                samples: n,
                max_abs_error: report.value.max_abs_diff(&oracle),
                predicted_standard_error: report.abs_error_estimate,
            });
            n *= 2;
        }
    }
    if matches!(cfg.backend, BackendChoice::Series | BackendChoice::All) {
        for kmax in (2..=40).step_by(2) {
            let value = expm_series_fixed_order(a.as_matrix(), kmax);
            out.series.push(SeriesLadderRow {
                kmax,
                max_abs_residual: value.max_abs_diff(&oracle),
            });
        }
    }
    match cfg.format {
        OutputFormat::Json => emit(cfg, &serde_json::to_string_pretty(&out).unwrap())?,
        OutputFormat::Csv => {
            let mut text = String::new();
            if !out.mc.is_empty() {
                text.push_str("samples,max_abs_error,predicted_standard_error\n");
                for r in &out.mc {
                    text.push_str(&format!(
                        "{},{:.6e},{:.6e}\n",
                        r.samples, r.max_abs_error, r.predicted_standard_error
                    ));
                }
            }
            if !out.series.is_empty() {
                text.push_str("kmax,max_abs_residual\n");
                for r in &out.series {
                    text.push_str(&format!("{},{:.6e}\n", r.kmax, r.max_abs_residual));
                }
            }
            emit(cfg, &text)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct BenchRow {
    dim: usize,
    backend: Backend,
    wall_time: f64,
    max_abs_error_vs_oracle: f64,
    effort: u64,
}

fn cmd_bench(cfg: &RunConfig, threads: usize) -> Result<i32> {
    let sampler = cfg.sampler();
    let mut rows: Vec<BenchRow> = Vec::new();
    for (dim, a) in bench_suite(cfg.seed) {
        let oracle = expm_oracle(a.as_matrix());
        let wanted: &[Backend] = match cfg.backend {
            BackendChoice::Mc => &[Backend::Mc],
            BackendChoice::Series => &[Backend::Series],
            BackendChoice::Oracle => &[Backend::Oracle],
            BackendChoice::All => &[Backend::Mc, Backend::Series, Backend::Oracle],
        };
        for &backend in wanted {
            let (value, wall, effort) = match backend {
                Backend::Mc => {
                    let r = expm_monte_carlo_threaded(&a, cfg.samples, &sampler, threads);
                    (r.value, r.wall_time, r.samples_or_terms)
                }
                Backend::Series => {
                    let r = expm_series_general(a.as_matrix(), cfg.target_abs_err)?;
                    (r.value, r.wall_time, r.samples_or_terms)
                }
                Backend::Oracle => {
                    let start = Instant::now();
                    let value = expm_oracle(a.as_matrix());
                    (value, start.elapsed().as_secs_f64(), 1)
                }
            };
            rows.push(BenchRow {
                dim,
                backend,
                wall_time: wall,
                max_abs_error_vs_oracle: value.max_abs_diff(&oracle),
                effort,
            });
        }
    }
    match cfg.format {
        OutputFormat::Json => emit(cfg, &serde_json::to_string_pretty(&rows).unwrap())?,
        OutputFormat::Csv => {
            let mut text = String::from("dim,backend,wall_time,max_abs_error_vs_oracle,effort\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{:.6},{:.6e},{}\n",
                    r.dim, r.backend, r.wall_time, r.max_abs_error_vs_oracle, r.effort
                ));
            }
            emit(cfg, &text)?;
        }
    }
    Ok(0)
}

/// Write the data payload, newline-terminated, to --output or stdout.
fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    let mut payload = text.to_string();
    if !payload.ends_with('\n') {
        payload.push('\n');
    }
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, payload)?;
        }
        None => {
            print!("{payload}");
        }
    }
    Ok(())
}
