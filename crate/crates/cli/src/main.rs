//! `confstereo` command-line tool.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "confstereo",
    version,
    about = "Focused L1 loss analysis, disparity/confidence evaluation and toy training"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a prediction (or a directory of predictions) against ground truth.
    Eval(EvalArgs),
    /// Write the sparsification curve of one prediction as CSV.
    Roc(RocArgs),
    /// Replace the least confident pixels of a prediction with a baseline.
    Ensemble(EnsembleArgs),
    /// Sample the per-pixel focused loss over confidence, one CSV per curve.
    LossScan(LossScanArgs),
    /// Print the loss-minimizing confidence for a residual.
    OptConf(OptConfArgs),
    /// Print the optimal sparsification AUC for a full-density error rate.
    AucOpt(AucOptArgs),
    /// Train the toy per-pixel regressor on a synthetic scene.
    TrainToy(TrainToyArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Predicted disparity (PFM or 16-bit PNG), or a directory of them.
    #[arg(long)]
    pred: PathBuf,
    /// Ground-truth disparity, or a directory with files of the same stems.
    #[arg(long)]
    gt: PathBuf,
    /// Confidence map, or a directory with files of the same stems.
    #[arg(long)]
    conf: Option<PathBuf>,
    /// Correctness threshold in pixels for the sparsification curve.
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Comma-separated error-rate thresholds in pixels.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 3.0, 5.0])]
    thresholds: Vec<f64>,
    /// Report JSON path; printed to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RocArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    conf: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// CSV path (`density,error_rate`); printed to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnsembleArgs {
    /// Primary disparity.
    #[arg(long)]
    pred: PathBuf,
    /// Confidence of the primary disparity.
    #[arg(long)]
    conf: PathBuf,
    /// Baseline disparity used for the replaced pixels.
    #[arg(long)]
    baseline: PathBuf,
    /// Fraction of valid pixels to replace.
    #[arg(long, default_value_t = 0.15)]
    fraction: f64,
    /// Output disparity (`.png` for KITTI 16-bit, anything else PFM).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LossParamArgs {
    #[arg(long, default_value_t = 4.0)]
    k: f64,
    #[arg(long, default_value_t = 5.0)]
    a: f64,
}

#[derive(Args)]
struct LossScanArgs {
    /// Comma-separated absolute residuals in pixels.
    #[arg(long, value_delimiter = ',', default_values_t = [10.0, 0.1])]
    residual: Vec<f64>,
    /// Comma-separated confidence-prior exponents.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0])]
    gamma: Vec<f64>,
    #[command(flatten)]
    params: LossParamArgs,
    /// Grid points over [c_min, 1].
    #[arg(long, default_value_t = 1001)]
    points: usize,
    /// Directory receiving `loss_r<residual>_gamma<gamma>.csv` files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OptConfArgs {
    #[arg(long)]
    residual: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[command(flatten)]
    params: LossParamArgs,
}

#[derive(Args)]
struct AucOptArgs {
    /// Full-density error rate in [0, 1].
    #[arg(long)]
    epsilon: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum LossArg {
    Focused,
    L1,
}

#[derive(Args)]
struct TrainToyArgs {
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Seed for both the scene and the training run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = LossArg::Focused)]
    loss: LossArg,
    #[arg(long, default_value_t = 3000)]
    iterations: usize,
    /// Initial Adam step size.
    #[arg(long, default_value_t = 1e-2)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0.2)]
    outlier_frac: f64,
    #[arg(long, default_value_t = 0.2)]
    noise_sigma: f64,
    #[arg(long, default_value_t = 8.0)]
    outlier_magnitude: f64,
    /// Directory receiving `report.json`, `disparity.pfm` and `confidence.pfm`.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Roc(a) => commands::roc(a),
        Command::Ensemble(a) => commands::ensemble(a),
        Command::LossScan(a) => commands::loss_scan(a),
        Command::OptConf(a) => commands::opt_conf(a),
        Command::AucOpt(a) => commands::auc_opt(a),
        Command::TrainToy(a) => commands::train_toy(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("confstereo: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
