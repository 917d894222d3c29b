use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qrnn_core::experiment::{
    grad_check, inspect, run_eval, run_predict, run_synth, run_train_with, DataSource, ExperimentConfig, PredictInput,
    METRICS_FILE,
};
use qrnn_core::model::{Architecture, ModelConfig};
use qrnn_core::Error;

#[derive(Debug, Parser)]
#[command(name = "qrnn", version, about = "Quantum recurrent neural network experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Experiment config (JSON); defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override `train.seed`.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads for gradient evaluation.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Override `output.dir`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a model; writes checkpoint, history and metrics.
    Train(Common),
    /// Score the saved checkpoint; writes metrics and prediction CSV/SVG.
    Eval(Common),
    /// Forecast from a window of raw values, or classify a sentence.
    Predict {
        #[command(flatten)]
        common: Common,
        /// Comma-separated raw series values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "words")]
        values: Option<Vec<f64>>,
        /// Space-separated words.
        #[arg(long, conflicts_with = "values")]
        words: Option<String>,
    },
    /// Write the configured synthetic data set into the output directory.
    Synth(Common),
    /// Print the circuit of the configured model.
    Inspect(Common),
    /// Compare finite-difference and parameter-shift gradients.
    GradCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, default_value = "plain")]
        kind: Architecture,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.train.seed = seed;
    }
    if let Some(w) = common.workers {
        cfg.train.workers = Some(w);
    }
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Train(common) => {
            let cfg = load(&common)?;
            let out = run_train_with(&cfg, |r| eprintln!("epoch {:>4}  loss {:.6}", r.epoch, r.loss))?;
            let h = &out.history;
            println!(
                "trained {} on {}: {} epochs, loss {:.6} -> {:.6}{}",
                out.metrics.model,
                out.metrics.dataset,
                h.epochs(),
                h.initial_loss,
                h.final_loss(),
                if h.stopped_early { " (early stop)" } else { "" }
            );
            println!("test accuracy: {:.4}% on {} samples", out.metrics.accuracy_percent, out.metrics.n_samples);
            println!("outputs in {}", out.output_dir.display());
        }
        Command::Eval(common) => {
            let cfg = load(&common)?;
            let m = run_eval(&cfg)?;
            println!("test accuracy: {:.4}% on {} samples", m.accuracy_percent, m.n_samples);
            println!("metrics: {}", cfg.output.dir.join(METRICS_FILE).display());
        }
        Command::Predict { common, values, words } => {
            let cfg = load(&common)?;
            let input = match (values, words) {
                (Some(v), None) => PredictInput::Values(v),
                (None, Some(w)) => PredictInput::Words(w.split_whitespace().map(str::to_string).collect()),
                _ => return Err(Error::InvalidArgument("give exactly one of --values or --words".into())),
            };
            let is_words = matches!(input, PredictInput::Words(_));
            let y = run_predict(&cfg, &input)?;
            if is_words {
                println!("p(class 1) = {y:.6}; label {}", u8::from(y > 0.5));
            } else {
                println!("{y}");
            }
        }
        Command::Synth(common) => {
            let cfg = load(&common)?;
            let name = match cfg.data.source {
                DataSource::Corpus(_) => "corpus.json",
                _ => "series.csv",
            };
            let path = run_synth(&cfg, &cfg.output.dir.join(name))?;
            println!("wrote {}", path.display());
        }
        Command::Inspect(common) => {
            let cfg = load(&common)?;
            print!("{}", inspect(&cfg)?);
        }
        Command::GradCheck {
            common,
            d,
            h,
            kind,
            samples,
            window,
            delta,
        } => {
            let seed = common.seed.unwrap_or(0);
            if !(delta > 0.0) || samples == 0 || window == 0 {
                return Err(Error::InvalidArgument("delta, samples and window must be positive".into()));
            }
            let config = ModelConfig::standard(d, h, kind)?;
            let r = grad_check(&config, seed, samples, window, delta)?;
            println!(
                "{} parameters, {} samples of length {}: max |FD - shift| = {:.3e}",
                r.n_params, r.n_samples, r.window, r.max_abs_deviation
            );
            println!("finite difference {:.3}s, parameter shift {:.3}s", r.fd_seconds, r.shift_seconds);
        }
    }
    Ok(())
}

/// 1 for bad input or configuration, 2 for failures while running.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. }
        | Error::InvalidArgument(_)
        | Error::OutOfVocabulary(_)
        | Error::CapacityExceeded { .. }
        | Error::Empty(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
