//! Command-line front end for additive-GPR neural models.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use addgpr::datasets::SynthSpec;
use addgpr::neuralize::PruneMode;
use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{RunArgs, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "addgpr", version, about = "Neural models with additive-GPR activations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the coupled synthetic dataset as CSV.
    GenData(GenDataArgs),
    /// Build one model and report train/test rmse.
    Train(RunArgs),
    /// Train order-d additive GPRs in the original coordinates.
    OrderScan(OrderScanArgs),
    /// Build once, prune to each keep count, report train/test rmse.
    PruneScan(PruneScanArgs),
    /// Export the top neurons' activation functions from a saved model.
    Activations(ActivationArgs),
}

#[derive(Args, Debug)]
pub struct GenDataArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 5000)]
    pub count: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub beta_pair: f64,
    #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
    pub gamma_full: f64,
    /// CSV path; defaults to a name derived from the parameters inside the output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OrderScanArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Coupling orders to train.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub orders: Vec<usize>,
    /// Training sizes; defaults to the configured train size.
    #[arg(long, value_delimiter = ',')]
    pub train_sizes: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct PruneScanArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Keep counts; defaults to every fifth count plus all neurons.
    #[arg(long, value_delimiter = ',')]
    pub keep: Vec<usize>,
    /// `refit` re-solves on the kept neurons; `mask` only deactivates the rest.
    #[arg(long, default_value = "refit")]
    pub prune_mode: PruneMode,
}

#[derive(Args, Debug)]
pub struct ActivationArgs {
    /// `model.json` written by `train` or `prune-scan`.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub top_k: usize,
    #[arg(long, default_value_t = 101)]
    pub grid_size: usize,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenData(a) => {
            let spec = SynthSpec {
                dim: a.dim,
                count: a.count,
                seed: a.seed,
                beta_pair: a.beta_pair,
                gamma_full: a.gamma_full,
            };
            commands::gen_data(&spec, a.output.as_deref(), a.out_dir.as_deref())?;
        }
        Command::Train(a) => {
            commands::train_cmd(&RunConfig::resolve(&a)?)?;
        }
        Command::OrderScan(a) => {
            let cfg = RunConfig::resolve(&a.run)?;
            let sizes = if a.train_sizes.is_empty() { vec![cfg.split.train_size] } else { a.train_sizes };
            commands::order_scan(&cfg, &a.orders, &sizes)?;
        }
        Command::PruneScan(a) => {
            let cfg = RunConfig::resolve(&a.run)?;
            let keep = (!a.keep.is_empty()).then_some(a.keep.as_slice());
            commands::prune_scan(&cfg, keep, a.prune_mode)?;
        }
        Command::Activations(a) => {
            commands::activations(&a.model, a.top_k, a.grid_size, a.out_dir.as_deref())?;
        }
    }
    Ok(())
}
