//! `irsim`: IRS-aided MISO channel simulator CLI.
//!
//! Every subcommand writes RFC-4180 CSV under `--out`; given the same seed
//! and config, outputs are byte-identical regardless of `--workers`.
//! Exit codes: 0 success, 2 config error, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use irsim::harness::config::ExperimentConfig;
use irsim::harness::experiments::{
    run_density, run_fit_eigs, run_histogram, run_laws, run_sweep, run_tradeoff, run_u_vs_q,
    TradeoffTarget,
};
use irsim::Result;

#[derive(Parser)]
#[command(
    name = "irsim",
    version,
    about = "IRS-aided MISO channel simulator: Monte Carlo experiments, capacity laws, and trade-off curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario config file (key = value lines); command-specific default
    /// scenario when omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo trials; overrides the config.
    #[arg(long)]
    trials: Option<u64>,

    /// Output directory for CSV files.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 1)]
    workers: usize,

    /// Histogram bin count; overrides the config.
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo capacity histogram with the Gaussian overlay.
    #[command(name = "hist")]
    Hist(Common),

    /// Mean/variance sweep over IRS sizes, Monte Carlo vs analytic.
    #[command(name = "sweep-n")]
    SweepN(Common),

    /// Top-eigenvalue growth of the sinc covariance and its power-law fit.
    #[command(name = "fit-eigs")]
    FitEigs {
        #[command(flatten)]
        common: Common,
        /// Also dump the full spectrum of every sweep size.
        #[arg(long)]
        dump_spectra: bool,
    },

    /// Eigenvalue-growth exponent u against the area exponent q.
    #[command(name = "u-vs-q")]
    UVsQ(Common),

    /// Exact SNR-gain and capacity densities.
    #[command(name = "density")]
    Density(Common),

    /// Analytic capacity laws and hardening bounds over the sweep grid.
    #[command(name = "laws")]
    Laws(Common),

    /// Minimal transmit antennas for an ergodic-capacity target.
    #[command(name = "tradeoff-erg")]
    TradeoffErg {
        #[command(flatten)]
        common: Common,
        /// Target ergodic capacity in bits.
        #[arg(long)]
        cbar: f64,
    },

    /// Minimal transmit antennas for an outage target.
    #[command(name = "tradeoff-out")]
    TradeoffOut {
        #[command(flatten)]
        common: Common,
        /// Target rate in bits.
        #[arg(long)]
        rate: f64,
        /// Outage probability in (0, 1/2].
        #[arg(long)]
        pout: f64,
    },
}

/// Load the config (or a command-appropriate default) and apply flag
/// overrides.
fn load_config(common: &Common, default: ExperimentConfig) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => default,
    };
    if let Some(seed) = common.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.trials = trials;
    }
    if let Some(bins) = common.bins {
        cfg.bins = bins;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Hist(common) => {
            let cfg = load_config(common, ExperimentConfig::baseline())?;
            let (_, stats) = run_histogram(&cfg, common.workers, &common.out)?;
            println!(
                "hist: {} trials, mean {:.4}, variance {:.6} -> {}",
                stats.count(),
                stats.mean(),
                stats.variance(),
                common.out.join("hist.csv").display()
            );
        }
        Command::SweepN(common) => {
            let cfg = load_config(common, ExperimentConfig::sweep_over_sizes())?;
            let rows = run_sweep(&cfg, common.workers, &common.out)?;
            println!(
                "sweep-n: {} sizes -> {}",
                rows.len(),
                common.out.join("sweep.csv").display()
            );
        }
        Command::FitEigs {
            common,
            dump_spectra,
        } => {
            let cfg = load_config(common, ExperimentConfig::sweep_over_sizes())?;
            let (pts, fit) = run_fit_eigs(&cfg, common.workers, &common.out, *dump_spectra)?;
            println!(
                "fit-eigs: {} sizes, lambda_max ~ {:.4}*N^{:.4} -> {}",
                pts.len(),
                fit.a,
                fit.u,
                common.out.join("eigs.csv").display()
            );
        }
        Command::UVsQ(common) => {
            let cfg = load_config(common, ExperimentConfig::sweep_over_sizes())?;
            let curve = run_u_vs_q(&cfg, common.workers, &common.out)?;
            println!(
                "u-vs-q: {} points -> {}",
                curve.len(),
                common.out.join("u_vs_q.csv").display()
            );
        }
        Command::Density(common) => {
            let cfg = load_config(common, ExperimentConfig::baseline())?;
            run_density(&cfg, &common.out)?;
            println!(
                "density -> {} and {}",
                common.out.join("density_gamma.csv").display(),
                common.out.join("density_capacity.csv").display()
            );
        }
        Command::Laws(common) => {
            let cfg = load_config(common, ExperimentConfig::sweep_over_sizes())?;
            let rows = run_laws(&cfg, &common.out)?;
            println!(
                "laws: {} sizes -> {}",
                rows.len(),
                common.out.join("laws.csv").display()
            );
        }
        Command::TradeoffErg { common, cbar } => {
            let cfg = load_config(common, ExperimentConfig::tradeoff_scenario())?;
            let pts = run_tradeoff(&cfg, TradeoffTarget::Ergodic(*cbar), &common.out)?;
            println!(
                "tradeoff-erg: {} sizes -> {}",
                pts.len(),
                common.out.join("tradeoff_erg.csv").display()
            );
        }
        Command::TradeoffOut { common, rate, pout } => {
            let cfg = load_config(common, ExperimentConfig::tradeoff_scenario())?;
            let pts = run_tradeoff(
                &cfg,
                TradeoffTarget::Outage {
                    rate: *rate,
                    p_out: *pout,
                },
                &common.out,
            )?;
            println!(
                "tradeoff-out: {} sizes -> {}",
                pts.len(),
                common.out.join("tradeoff_out.csv").display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
