use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use genspp::datagen::ToyConfig;
use genspp::evolution::SkewMode;
use genspp::runner::{cmd_baseline, cmd_evolve, cmd_gen_data, cmd_landscape, cmd_skew, ExperimentConfig};

#[derive(Parser)]
#[command(name = "genspp", about = "Selective rationalization trained by genetic search", version)]
struct Cli {
    /// Size of the worker thread pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic highlight dataset as JSONL splits.
    GenData(GenDataArgs),
    /// Run the evolutionary search for every configured seed.
    Evolve(RunArgs),
    /// Evolve from a skewed initial population.
    Skew(SkewArgs),
    /// Score the string-matching reference baselines.
    Baseline(BaselineArgs),
    /// Export the objective-landscape grid as CSV.
    Landscape(LandscapeArgs),
}

#[derive(Args)]
struct GenDataArgs {
    /// Output directory for the JSONL files and vocabulary.
    #[arg(long, default_value = "data/toy")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    total: usize,
    #[arg(long, default_value_t = 20)]
    string_len: usize,
    /// Comma-separated class highlights.
    #[arg(long, value_delimiter = ',')]
    highlights: Option<Vec<String>>,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the configured seeds.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SkewModeArg {
    OneSkewed,
    AllNoisy,
}

#[derive(Args)]
struct SkewArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Skew pretraining epochs.
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, value_enum, default_value = "one-skewed")]
    mode: SkewModeArg,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LandscapeArgs {
    #[arg(long, default_value_t = 101)]
    resolution: usize,
    #[arg(long, default_value = "landscape.csv")]
    out: PathBuf,
}

fn load_config(args: &RunArgs) -> genspp::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seeds) = &args.seeds {
        cfg.seeds = seeds.clone();
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_summary(summary: &genspp::runner::Summary) {
    println!(
        "clf_f1 {:.2}±{:.2}  hl_f1 {:.2}±{:.2}  R {:.2}±{:.2}  S {:.2}±{:.2}",
        summary.clf_f1.mean,
        summary.clf_f1.std,
        summary.hl_f1.mean,
        summary.hl_f1.std,
        summary.ratio_r.mean,
        summary.ratio_r.std,
        summary.size_s.mean,
        summary.size_s.std,
    );
}

fn run(cli: Cli) -> genspp::Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| genspp::Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::GenData(args) => {
            let mut toy = ToyConfig {
                total: args.total,
                string_len: args.string_len,
                ..Default::default()
            };
            if let Some(h) = args.highlights {
                toy.class_highlights = h;
            }
            let splits = cmd_gen_data(&toy, args.seed, &args.out)?;
            println!(
                "wrote {} train / {} validation / {} test examples to {}",
                splits.train.len(),
                splits.validation.len(),
                splits.test.len(),
                args.out.display()
            );
        }
        Command::Evolve(args) => {
            let cfg = load_config(&args)?;
            let (_, summary) = cmd_evolve(&cfg)?;
            print_summary(&summary);
        }
        Command::Skew(args) => {
            let cfg = load_config(&args.run)?;
            let mode = match args.mode {
                SkewModeArg::OneSkewed => SkewMode::OneSkewed,
                SkewModeArg::AllNoisy => SkewMode::AllNoisy,
            };
            let (_, summary) = cmd_skew(&cfg, args.k, mode)?;
            print_summary(&summary);
        }
        Command::Baseline(args) => {
            let rows = cmd_baseline(&ToyConfig::default(), args.seed, args.out.as_deref())?;
            for r in &rows {
                println!("{:8} {:12} hl_f1 {:.2}", r.name, r.patterns.join("|"), r.hl_f1);
            }
        }
        Command::Landscape(args) => {
            let path = cmd_landscape(args.resolution, &args.out)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = serde_json::json!({
                "error": e.to_string(),
            });
            eprintln!("{payload}");
            ExitCode::FAILURE
        }
    }
}
