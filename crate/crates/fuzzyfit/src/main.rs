//! Command line interface: loss curves, risk functions, fitting,
//! disambiguation, and the synthetic benchmarks.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fuzzyfit::core::data::Example;
use fuzzyfit::core::disambiguate::disambiguate;
use fuzzyfit::core::experiment::{ExperimentConfig, Which};
use fuzzyfit::core::fuzzy::{DatumKind, FuzzyDatum};
use fuzzyfit::core::gmli::{gmli_interval_loss, gmli_logistic_loss, gmli_precise_loss};
use fuzzyfit::core::loss::{fuzzy_loss, fuzzy_margin_loss, BaseLoss, CrispLoss, LossConfig};
use fuzzyfit::core::optimize::{fit, LossSpec, OptimizerConfig};
use fuzzyfit::core::risk::{risk_function, RiskConfig};
use fuzzyfit::io;
use fuzzyfit::runner::{curve_to_csv, run_experiment_parallel};

#[derive(Parser)]
#[command(
    name = "fuzzyfit",
    about = "Loss minimization over imprecise and fuzzy observations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a loss over predictions for one observation; CSV to stdout.
    LossCurve {
        /// l1, l2, 0/1, hinge, exponential, logistic, gmli-interval, or
        /// gmli-logistic.
        #[arg(long)]
        loss: String,
        /// The observation as inline JSON, e.g. '{"trap": [1, 2, 3, 4]}'.
        #[arg(long)]
        fuzzy: Option<String>,
        /// Prediction sweep as lo:hi:step, inclusive.
        #[arg(long)]
        range: String,
        /// Confidence of the observed positive class for margin and
        /// gmli-logistic curves; an alternative to --fuzzy.
        #[arg(long)]
        w: Option<f64>,
    },
    /// Level-wise generalized risk of a model on a dataset; CSV to stdout.
    Risk {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// A generalized loss: l1, l2, 0/1, hinge, exponential, or logistic.
        #[arg(long)]
        loss: String,
    },
    /// Fit a linear model and write it as JSON.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        loss: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        lr: f64,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Most plausible precise data under a model; JSON lines to stdout.
    Disambiguate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Membership level of the cuts to disambiguate.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Loss deciding ties; defaults per observation kind (l2 for real
        /// values, 0/1 for labels).
        #[arg(long)]
        loss: Option<String>,
    },
    /// Run a synthetic benchmark and write its error curves as CSV.
    Experiment {
        #[arg(long, value_enum)]
        which: WhichArg,
        /// JSON configuration; absent fields fall back to defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    /// Labels vanish with probability gamma.
    Semi,
    /// Labels flip with probability gamma.
    Noise,
}

impl From<WhichArg> for Which {
    fn from(w: WhichArg) -> Which {
        match w {
            WhichArg::Semi => Which::SemiSupervised,
            WhichArg::Noise => Which::LabelNoise,
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::LossCurve { loss, fuzzy, range, w } => loss_curve(&loss, fuzzy.as_deref(), &range, w),
        Command::Risk { model, data, loss } => risk(&model, &data, &loss),
        Command::Fit { data, loss, out, lr, iters, restarts, seed } => {
            run_fit(&data, &loss, &out, lr, iters, restarts, seed)
        }
        Command::Disambiguate { model, data, alpha, loss } => {
            run_disambiguate(&model, &data, alpha, loss.as_deref())
        }
        Command::Experiment { which, config, out } => run_experiment_cmd(which.into(), config, &out),
    }
}

fn loss_curve(loss: &str, fuzzy: Option<&str>, range: &str, w: Option<f64>) -> Result<()> {
    let sweep = io::parse_range(range)?;
    let datum = fuzzy.map(io::parse_datum).transpose()?;
    let spec = io::parse_loss_spec(loss)?;
    let cfg = LossConfig::default();

    let value: Box<dyn Fn(f64) -> Result<f64>> = match (&spec, &datum, w) {
        (LossSpec::Generalized(CrispLoss::Base(base)), Some(datum), None) => {
            let (base, datum) = (*base, datum.clone());
            Box::new(move |yhat| Ok(fuzzy_loss(base, &datum, yhat, &cfg)?))
        }
        (LossSpec::Generalized(CrispLoss::Margin(f)), Some(datum), None) => {
            let (y, w) = datum
                .as_binary_discounted()
                .context("margin curves need a binary class observation")?;
            let f = *f;
            Box::new(move |s| Ok(fuzzy_margin_loss(f, w, y, s)?))
        }
        (LossSpec::Generalized(CrispLoss::Margin(f)), None, Some(w)) => {
            let f = *f;
            Box::new(move |s| Ok(fuzzy_margin_loss(f, w, 1.0, s)?))
        }
        (LossSpec::GmliInterval(gcfg), Some(datum), None) => {
            let gcfg = *gcfg;
            match datum {
                FuzzyDatum::Interval(iv) => {
                    let iv = *iv;
                    Box::new(move |yhat| Ok(gmli_interval_loss(iv, yhat, &gcfg)?))
                }
                FuzzyDatum::Real(y) => {
                    let y = *y;
                    Box::new(move |yhat| Ok(gmli_precise_loss(y, yhat, &gcfg)?))
                }
                _ => bail!("gmli-interval curves need a real or interval observation"),
            }
        }
        (LossSpec::GmliLogistic, None, Some(w)) => {
            Box::new(move |s| Ok(gmli_logistic_loss(w, 1.0, s)?))
        }
        (LossSpec::GmliLogistic, Some(datum), None) => {
            let (y, w) = datum
                .as_binary_discounted()
                .context("gmli-logistic curves need a binary class observation")?;
            Box::new(move |s| Ok(gmli_logistic_loss(w, y, s)?))
        }
        (LossSpec::GmliLogistic, None, None) => {
            bail!("gmli-logistic curves need --w or --fuzzy")
        }
        (_, None, None) => bail!("--loss {loss} needs --fuzzy"),
        (_, Some(_), Some(_)) => {
            bail!("--fuzzy and --w both given; the observation already fixes the confidence")
        }
        (_, None, Some(_)) => bail!("--w applies to margin and gmli-logistic losses only"),
    };

    println!("yhat,loss");
    for yhat in sweep {
        println!("{yhat},{}", value(yhat)?);
    }
    Ok(())
}

fn risk(model: &PathBuf, data: &PathBuf, loss: &str) -> Result<()> {
    let model = io::read_model(model)?;
    let data = io::read_examples(data)?;
    let loss = io::parse_crisp_loss(loss)?;
    let rf = risk_function(&RiskConfig::default(), &loss, &model, &data)?;
    println!("alpha,risk");
    for (alpha, value) in rf.alphas.iter().zip(&rf.values) {
        println!("{alpha},{value}");
    }
    println!("aggregated,{}", rf.aggregate());
    Ok(())
}

fn run_fit(
    data: &PathBuf,
    loss: &str,
    out: &PathBuf,
    lr: f64,
    iters: usize,
    restarts: usize,
    seed: u64,
) -> Result<()> {
    let data = io::read_examples(data)?;
    let spec = io::parse_loss_spec(loss)?;
    let opt_cfg = OptimizerConfig {
        learning_rate: lr,
        max_iters: iters,
        restarts,
        seed,
        ..OptimizerConfig::default()
    };
    let (model, risk, diagnostics) = fit(&data, &spec, &RiskConfig::default(), &opt_cfg)?;
    io::write_model(out, &model)?;
    println!("risk {risk}");
    if diagnostics.least_squares {
        println!("solved in closed form (least squares)");
    } else {
        println!(
            "restart {} of {}: {} iterations, gradient norm {:.3e}, converged {}",
            diagnostics.best_restart + 1,
            restarts,
            diagnostics.iterations + 1,
            diagnostics.grad_norm,
            diagnostics.converged
        );
    }
    println!("model written to {}", out.display());
    Ok(())
}

fn default_loss_for(example: &Example) -> CrispLoss {
    match example.y.kind() {
        DatumKind::Label | DatumKind::FuzzyLabel => CrispLoss::Base(BaseLoss::ZeroOne),
        _ => CrispLoss::Base(BaseLoss::L2),
    }
}

fn run_disambiguate(
    model: &PathBuf,
    data: &PathBuf,
    alpha: f64,
    loss: Option<&str>,
) -> Result<()> {
    let model = io::read_model(model)?;
    let data = io::read_examples(data)?;
    let loss = loss.map(io::parse_crisp_loss).transpose()?;
    for (i, example) in data.iter().enumerate() {
        let loss = loss.unwrap_or_else(|| default_loss_for(example));
        let s = disambiguate(&loss, &model, example, alpha)
            .with_context(|| format!("example {}", i + 1))?;
        let dto = io::SelectionDto::new(s.x, &s.y, s.loss);
        println!("{}", serde_json::to_string(&dto)?);
    }
    Ok(())
}

fn run_experiment_cmd(which: Which, config: Option<PathBuf>, out: &PathBuf) -> Result<()> {
    let cfg = match config {
        Some(path) => io::read_experiment_config(&path, which)?,
        None => ExperimentConfig::for_experiment(which),
    };
    let curve = run_experiment_parallel(which, &cfg)?;
    std::fs::write(out, curve_to_csv(&curve))
        .with_context(|| format!("writing {}", out.display()))?;
    eprintln!("curve written to {}", out.display());
    Ok(())
}
