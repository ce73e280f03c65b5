//! Command-line driver for the non-Markovianity kernel-regression pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nmkernel::channels::ChannelKind;
use nmkernel::pipeline::{
    emit_plot_data, run_experiment, stage_evaluate, stage_generate, stage_gram, stage_train,
    ExperimentConfig, ModelScores, OutputSet, PlotKind,
};
use nmkernel::qsim::Shots;
use nmkernel::Error;

#[derive(Parser)]
#[command(name = "nmkernel", version, about = "Learn non-Markovianity of AD/PD channels with quantum kernels")]
struct Cli {
    /// TOML experiment config; unset keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed for shot sampling, splits and folds.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Shots per circuit, or "inf" for exact probabilities.
    #[arg(long, global = true, value_name = "N|inf")]
    shots: Option<Shots>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Channel, overriding the config.
    #[arg(long, global = true, value_name = "ad|pd")]
    channel: Option<ChannelKind>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the labelled dataset (dataset.csv).
    Generate,
    /// Estimate the quantum Gram matrix (gram.csv).
    Gram,
    /// Split, cross-validate and fit the configured models.
    Train,
    /// Predict all samples and score the models (predictions.csv, summary.txt).
    Evaluate,
    /// Emit plot tables from earlier outputs.
    Report {
        #[arg(long, value_delimiter = ',', default_values = ["fig3", "fig5"])]
        which: Vec<PlotKind>,
    },
    /// Compare overlap circuits (fig4) and kernel functions (fig6).
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepKind::All)]
        over: SweepKind,
    },
    /// generate, gram, train and evaluate in one go.
    Run,
    /// Print the effective config as TOML.
    Config,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Circuits,
    Functions,
    All,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(shots) = cli.shots {
        cfg.shots = shots;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(channel) = cli.channel {
        cfg.channel = channel;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_scores(scores: &[ModelScores]) {
    for s in scores {
        let r2 = s.test_r2.map_or("undefined".to_string(), |r| format!("{r:.4}"));
        println!(
            "{:<8} {:<34} train_mse={:.3e} test_mse={:.3e} r2={r2}",
            s.estimator.name(),
            s.spec.to_string(),
            s.train_mse,
            s.test_mse
        );
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = load_config(cli).map_err(|e| e.in_stage("config"))?;
    if let Command::Config = cli.command {
        print!("{}", cfg.to_toml_string());
        return Ok(());
    }
    let mut out = OutputSet::new(&cfg.out_dir).map_err(|e| e.in_stage("config"))?;
    match &cli.command {
        Command::Generate => {
            let d = stage_generate(&cfg, &mut out)?;
            println!("generated {} samples", d.len());
        }
        Command::Gram => {
            let g = stage_gram(&cfg, &mut out)?;
            println!("gram {}x{} (min eigenvalue {:.3e})", g.dim(), g.dim(), g.min_eigenvalue());
        }
        Command::Train => {
            for m in stage_train(&cfg, &mut out)? {
                println!("{:<8} {}", m.estimator.name(), m.spec);
            }
        }
        Command::Evaluate => print_scores(&stage_evaluate(&cfg, &mut out)?),
        Command::Run => print_scores(&run_experiment(&cfg)?),
        Command::Report { which } => {
            for w in which {
                for p in emit_plot_data(&cfg, *w)? {
                    println!("wrote {}", p.display());
                }
            }
        }
        Command::Sweep { over } => {
            let kinds: &[PlotKind] = match over {
                SweepKind::Circuits => &[PlotKind::Fig4],
                SweepKind::Functions => &[PlotKind::Fig6],
                SweepKind::All => &[PlotKind::Fig4, PlotKind::Fig6],
            };
            for w in kinds {
                for p in emit_plot_data(&cfg, *w)? {
                    println!("wrote {}", p.display());
                }
            }
        }
        Command::Config => unreachable!(),
    }
    for p in out.written() {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
