// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: single points, sweeps, transients, figure
//! datasets and self-verification.
//!
//! Exit status: 0 success, 1 invalid input, 2 solver failure, 3 failed
//! verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qfridge::dynamics::InitialState;
use qfridge::model::DissipationModel;
use qfridge::sweep::{
    rows_to_table, run_steady, run_sweep, run_transient, verify, write_preset, Axis, Preset,
    RunConfig, Table, VerifyLevel,
};

#[derive(Parser, Debug)]
#[command(
    name = "qfridge",
    version,
    about = "Three-qubit absorption refrigerator with common reservoirs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one operating point and print it as JSON.
    Steady {
        #[command(flatten)]
        params: ParamArgs,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a one- or two-axis grid and write CSV.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// name=start:stop:step or name=v1,v2,… (e1, alpha, g, beta2, beta3,
        /// beta2_ratio, beta3_ratio); give once or twice.
        #[arg(long = "axis", required = true)]
        axes: Vec<Axis>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the reduced dynamics from the initial state and write CSV.
    Transient {
        #[command(flatten)]
        params: ParamArgs,
        /// Final time in units of ħ/k_B·T1.
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the datasets of a figure preset (or `all`) into a directory.
    Figure {
        /// fig2, fig3a…fig3d, fig4a, fig4b, fig5a…fig5c or all.
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the self-checks and print a JSON report.
    Verify {
        #[arg(long, default_value = "fast")]
        level: VerifyLevel,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Operating-point flags; each overrides the config file.
#[derive(Args, Debug)]
struct ParamArgs {
    /// JSON config file (flat keys, see README).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    e1: Option<f64>,
    #[arg(long)]
    e2: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    /// Inverse temperatures β1,β2,β3.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    beta: Option<Vec<f64>>,
    /// One rate for all reservoirs or three comma-separated rates.
    #[arg(long, value_delimiter = ',', num_args = 1..=3)]
    gamma0: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    /// coherent or incoherent-correlated.
    #[arg(long)]
    model: Option<DissipationModel>,
    /// thermal-product or dark-orthogonal.
    #[arg(long, value_parser = parse_init)]
    init: Option<InitialState>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
}

fn parse_init(s: &str) -> Result<InitialState, String> {
    match s {
        "thermal-product" => Ok(InitialState::ThermalProduct),
        "dark-orthogonal" => Ok(InitialState::DarkOrthogonal),
        other => Err(format!("unknown initial state '{other}'")),
    }
}

impl ParamArgs {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.e1 {
            cfg.e1 = v;
        }
        if let Some(v) = self.e2 {
            cfg.e2 = v;
        }
        if let Some(v) = self.g {
            cfg.g = v;
        }
        if let Some(v) = &self.beta {
            cfg.beta = [v[0], v[1], v[2]];
        }
        if let Some(v) = &self.gamma0 {
            cfg.gamma0 = match v.as_slice() {
                [x] => [*x; 3],
                [a, b, c] => [*a, *b, *c],
                _ => {
                    return Err(
                        qfridge::Error::Config("--gamma0 takes one or three values".into()).into(),
                    )
                }
            };
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.model {
            cfg.model = v;
        }
        if let Some(v) = self.init {
            cfg.init = v;
        }
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        cfg.validate()?;
        let machine = cfg.machine()?;
        if !machine.is_weak_coupling() {
            log::warn!(
                "g = {} exceeds a tenth of the smallest gap {:.4}; local master equation may be inaccurate",
                machine.g(),
                machine.min_gap()
            );
        }
        Ok(cfg)
    }
}

fn emit_text(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_table(table: &Table, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            table.write_atomic(path)?;
            log::info!("wrote {} rows to {}", table.rows.len(), path.display());
            Ok(())
        }
        None => emit_text(&table.to_csv()?, None),
    }
}

/// Exit code 3 marker.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Steady { params, out } => {
            let cfg = params.resolve()?;
            let row = run_steady(&cfg)?;
            let text = serde_json::to_string_pretty(&row)? + "\n";
            emit_text(&text, out.as_deref().or(cfg.output.as_deref()))
        }
        Command::Sweep { params, axes, out } => {
            let cfg = params.resolve()?;
            let rows = run_sweep(&cfg, &axes)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            if failed > 0 {
                log::warn!(
                    "{failed} of {} points failed; see the error column",
                    rows.len()
                );
            }
            emit_table(
                &rows_to_table(&rows),
                out.as_deref().or(cfg.output.as_deref()),
            )
        }
        Command::Transient {
            params,
            t_max,
            samples,
            out,
        } => {
            let cfg = params.resolve()?;
            let table = run_transient(&cfg, t_max, samples)?;
            emit_table(&table, out.as_deref().or(cfg.output.as_deref()))
        }
        Command::Figure { name, out } => {
            let presets: Vec<Preset> = if name == "all" {
                Preset::ALL.to_vec()
            } else {
                vec![name.parse()?]
            };
            for preset in presets {
                let written = write_preset(preset, &out)?;
                for path in written {
                    println!("{}", path.display());
                }
            }
            Ok(())
        }
        Command::Verify { level, out } => {
            let report = verify(level);
            let text = serde_json::to_string_pretty(&report)? + "\n";
            emit_text(&text, out.as_deref())?;
            if !report.passed {
                bail!(VerificationFailed);
            }
            Ok(())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerificationFailed>().is_some() {
        return 3;
    }
    match err.downcast_ref::<qfridge::Error>() {
        Some(e) if e.is_validation() => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
