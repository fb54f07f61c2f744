use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nagumo::config::parse_config;
use nagumo::experiments::{figure1_config, run_simulation, write_outputs, Panel};
use nagumo::invariants::{run_all, with_thread_cap, DEFAULT_SEED};
use nagumo::{CliError, Result};
use padic_nagumo::solver::existence_time;
use padic_nagumo::WeightKind;

#[derive(Parser)]
#[command(
    name = "nagumo",
    version,
    about = "p-adic Nagumo-type equation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PanelArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write heatmap.csv, heatmap.png and summary.json.
    Simulate {
        config: PathBuf,
        /// Overrides `out_dir` from the configuration.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run one of the two built-in reference experiments (pure diffusion or blow-up).
    ReproduceFig1 {
        panel: PanelArg,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the local existence horizon for a configuration's initial datum.
    EstimateExistence {
        config: PathBuf,
        /// Radius M of the solution ball; defaults to ‖f0‖_s.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Run the seeded property suites; exits 1 on any violation.
    CheckInvariants {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn read_config(path: &PathBuf) -> Result<nagumo::config::RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_config(&text)?)
}

fn simulate(cfg: nagumo::config::RunConfig, out_dir: Option<PathBuf>) -> Result<()> {
    let dir = out_dir.unwrap_or_else(|| cfg.out_dir.clone());
    let outcome = run_simulation(&cfg)?;
    write_outputs(&outcome, &cfg, &dir)?;
    let s = &outcome.summary;
    println!("frames: {}", s.times.len());
    println!(
        "final sup norm: {:e}",
        s.sup_norm.last().copied().unwrap_or(f64::NAN)
    );
    println!("error budget: {:e}", s.error_budget);
    match &s.blowup {
        Some(b) => println!("blow-up between t = {} and t = {}", b.t_lo, b.t_hi),
        None => println!("sup norm monotone: {}", s.sup_norm_monotone),
    }
    for ode in &s.comparison_ode {
        let weight = match ode.weight {
            WeightKind::SignedSquare => "signed-square weight",
            WeightKind::Modulus => "modulus weight",
        };
        match ode.blowup_time {
            Some(t) => println!(
                "comparison ODE ({weight}, r = {}): blow-up at t = {t}",
                ode.r
            ),
            None => println!(
                "comparison ODE ({weight}, r = {}): bounded (G(0) = {})",
                ode.r, ode.g0
            ),
        }
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out_dir } => simulate(read_config(&config)?, out_dir),
        Command::ReproduceFig1 { panel, out_dir } => {
            let panel = match panel {
                PanelArg::Left => Panel::Left,
                PanelArg::Right => Panel::Right,
            };
            simulate(figure1_config(panel), out_dir)
        }
        Command::EstimateExistence { config, radius } => {
            let cfg = read_config(&config)?;
            let u0 = nagumo::experiments::initial_field(&cfg)?;
            let norm = u0.norm_sobolev(cfg.params.s);
            let est = existence_time(norm, radius.unwrap_or(norm), &cfg.params)?;
            println!("‖f0‖_s = {norm}");
            println!("T = {}", est.t);
            println!("M = {}", est.m);
            println!("L(M + ‖f0‖, M + ‖f0‖) = {}", est.l_at_boundary);
            println!("contraction constant = {}", est.contraction_constant);
            Ok(())
        }
        Command::CheckInvariants { seed } => {
            let outcomes = with_thread_cap(|| run_all(seed));
            let mut failed = 0;
            for o in &outcomes {
                let status = if o.passed() { "ok  " } else { "FAIL" };
                println!(
                    "{status} {:<24} {:>5} cases, {} violations, {} = {:e}",
                    o.name, o.cases, o.violations, o.metric, o.worst
                );
                if let Some(f) = &o.first_failure {
                    println!("     first failure: {f}");
                }
                failed += usize::from(!o.passed());
            }
            if failed > 0 {
                return Err(CliError::Violations(failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
