use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fockbell_core::OptimizerConfig;
use fockbell_reports::commands::{grid_document, run_meta, WignerAxis, WignerSpec};
use fockbell_reports::output::Document;
use fockbell_reports::{qcrb_rows, sweep, table, wigner_grid, Extremized, Family, Format, Functional};

#[derive(Debug, Parser)]
#[command(
    name = "fockbell",
    version,
    about = "Bell-test and phase-sensitivity reports for (N-m)::m states"
)]
struct Cli {
    /// Seed for the optimizer's random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Uniform random samples drawn before refinement.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Best samples refined per direction.
    #[arg(long, global = true)]
    restarts: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Layout {
    /// One row per state.
    Rows,
    /// Square (N-m) x m grid, minima below and maxima above the diagonal.
    Grid,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// QCRB, shot-noise and Heisenberg limits for every state up to N.
    Qcrb {
        #[arg(long, default_value_t = 10)]
        max_n: u32,
    },
    /// Extremize a functional for every (N-m)::m state up to N.
    Table {
        #[arg(value_enum)]
        functional: Functional,
        #[arg(long, default_value_t = 9)]
        max_n: u32,
        /// Relative phase of the state.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, value_enum, default_value_t = Layout::Rows)]
        layout: Layout,
    },
    /// Extremize a functional along one family of states.
    Sweep {
        #[arg(value_enum)]
        functional: Functional,
        #[arg(value_enum)]
        family: Family,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Two-mode Wigner function over a square slice.
    Wigner {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, value_enum, default_value_t = WignerAxis::ReAlpha)]
        x_axis: WignerAxis,
        #[arg(long, value_enum, default_value_t = WignerAxis::ReBeta)]
        y_axis: WignerAxis,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        hi: f64,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        /// Off-slice coordinates as re_alpha,im_alpha,re_beta,im_beta.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.0; 4])]
        at: Vec<f64>,
    },
}

impl Cli {
    fn optimizer(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::with_seed(self.seed);
        if let Some(s) = self.samples {
            cfg.random_samples = s;
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        cfg
    }
}

/// Warnings and failures go to stderr; returns whether any row failed.
fn report_diagnostics(result: &Extremized) -> bool {
    for r in &result.rows {
        if !r.min_converged || !r.max_converged {
            eprintln!(
                "warning: {} (N={}, m={}): refinement hit its iteration budget (min converged: {}, max converged: {})",
                r.state, r.n, r.m, r.min_converged, r.max_converged
            );
        }
        if r.near_boundary {
            eprintln!(
                "warning: {} (N={}, m={}): optimum has a displacement component of magnitude >= 2.5",
                r.state, r.n, r.m
            );
        }
    }
    for f in &result.failures {
        eprintln!("error: state N={}, m={}: {}", f.n, f.m, f.message);
    }
    !result.failures.is_empty()
}

fn emit(cli: &Cli, doc: &Document) -> Result<()> {
    match &cli.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            doc.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            doc.write(cli.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = cli.optimizer();
    let mut failed = false;
    let doc = match &cli.command {
        Command::Qcrb { max_n } => {
            let rows = qcrb_rows(*max_n)?;
            let mut meta = fockbell_reports::commands::base_meta("qcrb");
            meta.push(("max_n".into(), max_n.to_string()));
            Document::from_rows(meta, &rows)?
        }
        Command::Table {
            functional,
            max_n,
            phi,
            layout,
        } => {
            let result = table(*functional, *max_n, *phi, &cfg)
                .with_context(|| format!("table for {functional} up to N = {max_n}"))?;
            failed = report_diagnostics(&result);
            let layout_name = match layout {
                Layout::Rows => "rows",
                Layout::Grid => "grid",
            };
            let meta = run_meta(
                "table",
                *functional,
                *phi,
                &cfg,
                &[("max_n", max_n.to_string()), ("layout", layout_name.to_string())],
            );
            match layout {
                Layout::Rows => Document::from_rows(meta, &result.rows)?,
                Layout::Grid => grid_document(meta, &result.rows),
            }
        }
        Command::Sweep {
            functional,
            family,
            n_max,
            phi,
        } => {
            let result = sweep(*functional, *family, *n_max, *phi, &cfg)
                .with_context(|| format!("{} sweep of {functional} up to N = {n_max}", family.name()))?;
            failed = report_diagnostics(&result);
            let meta = run_meta(
                "sweep",
                *functional,
                *phi,
                &cfg,
                &[("family", family.name().to_string()), ("n_max", n_max.to_string())],
            );
            Document::from_rows(meta, &result.rows)?
        }
        Command::Wigner {
            n,
            m,
            phi,
            x_axis,
            y_axis,
            lo,
            hi,
            steps,
            at,
        } => {
            anyhow::ensure!(
                at.len() == 4,
                "--at takes four comma-separated values, got {}",
                at.len()
            );
            let spec = WignerSpec {
                n: *n,
                m: *m,
                phi: *phi,
                x_axis: *x_axis,
                y_axis: *y_axis,
                lo: *lo,
                hi: *hi,
                steps: *steps,
                at: [at[0], at[1], at[2], at[3]],
            };
            let points = wigner_grid(&spec)?;
            Document::from_rows(spec.meta(), &points)?
        }
    };
    emit(cli, &doc)?;
    Ok(failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
