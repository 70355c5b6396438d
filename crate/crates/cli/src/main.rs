//! `hfsynth`: generate, inspect, measure and segment shortwave IQ datasets.

mod inspect;
mod measure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hfsynth::dataset::io::FORMAT_VERSION;
use hfsynth::dataset::{find_recipe, generate_dataset, parse_raw_iq, recipe_table, write_segments, Recipe};
use hfsynth::Error;

#[derive(Parser)]
#[command(name = "hfsynth", version, about = "Synthetic shortwave IQ datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the train and validation splits of a recipe.
    Generate(GenerateArgs),
    /// Summarize a dataset directory and check its integrity.
    Inspect(InspectArgs),
    /// Measure one frame from a dataset or a raw IQ file.
    Measure(MeasureArgs),
    /// Cut a raw 6 kHz IQ recording into unlabeled frames.
    Segment(SegmentArgs),
    /// List the built-in recipes.
    Recipes,
}

#[derive(Args)]
struct GenerateArgs {
    /// Recipe name or slug (e.g. `extended-fading`), or `custom` with --config.
    #[arg(long)]
    recipe: String,
    /// JSON recipe file, required with `--recipe custom`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    train: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    val: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to the available cores. Output does not
    /// depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    parallel: Option<u64>,
    #[arg(long, default_value_t = FORMAT_VERSION)]
    format_version: u32,
}

#[derive(Args)]
struct InspectArgs {
    /// Dataset directory.
    #[arg(long)]
    dataset: PathBuf,
    /// Split to inspect; all splits present by default.
    #[arg(long)]
    split: Option<String>,
    /// Write the SNR histogram as CSV (`snr_bin,count`).
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long, conflicts_with = "frame", requires = "index")]
    dataset: Option<PathBuf>,
    #[arg(long, default_value = "train")]
    split: String,
    #[arg(long)]
    index: Option<u64>,
    /// Raw little-endian f32 I/Q file holding one frame.
    #[arg(long, required_unless_present = "dataset")]
    frame: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentArgs {
    /// Raw little-endian f32 I/Q recording at 6 kHz.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = hfsynth::FRAME_LEN, value_parser = parse_hop)]
    hop: usize,
    #[arg(long)]
    out: PathBuf,
}

fn parse_hop(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("hop must be positive".into()),
        Ok(h) => Ok(h),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure classes, mapped to the process exit code.
pub enum Failure {
    Usage(String),
    Invalid(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Io(e.to_string()),
            Error::UnknownRecipe(_) => Failure::Usage(e.to_string()),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Inspect(a) => inspect::run(&a.dataset, a.split.as_deref(), a.plot_data.as_deref()),
        Command::Measure(a) => match (a.dataset, a.frame) {
            (Some(dir), _) => measure::from_dataset(&dir, &a.split, a.index.unwrap_or(0)),
            (None, Some(path)) => measure::from_file(&path),
            (None, None) => Err(Failure::Usage("need --dataset or --frame".into())),
        },
        Command::Segment(a) => segment(a),
        Command::Recipes => {
            for r in recipe_table() {
                println!("{:<20} {}", r.slug(), r.enabled().join(", "));
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("I/O error: {m}");
            ExitCode::from(3)
        }
    }
}

fn load_recipe(name: &str, config: Option<&PathBuf>) -> Result<Recipe, Failure> {
    match (name, config) {
        ("custom", Some(path)) => Ok(Recipe::from_json(&std::fs::read_to_string(path)?)?),
        ("custom", None) => Err(Failure::Usage("`--recipe custom` needs --config".into())),
        (_, Some(_)) => Err(Failure::Usage("--config is only valid with `--recipe custom`".into())),
        (name, None) => Ok(find_recipe(name)?),
    }
}

fn generate(a: GenerateArgs) -> CmdResult {
    if a.format_version != FORMAT_VERSION {
        return Err(Failure::Usage(format!(
            "format version {} is not supported (only {FORMAT_VERSION})",
            a.format_version
        )));
    }
    let recipe = load_recipe(&a.recipe, a.config.as_ref())?;
    let parallel = match a.parallel {
        Some(p) => p as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    std::fs::create_dir_all(&a.out)?;
    let m = generate_dataset(&recipe, a.train, a.val, a.seed, &a.out, parallel)?;
    println!("recipe: {}", m.recipe);
    println!("impairments: {}", display_list(&recipe.enabled()));
    println!("master seed: {}", m.master_seed);
    println!("format version: {}", m.format_version);
    println!("train: {} examples -> {}", m.train.len(), a.out.join("train.iqb").display());
    println!("val: {} examples -> {}", m.val.len(), a.out.join("val.iqb").display());
    Ok(())
}

fn segment(a: SegmentArgs) -> CmdResult {
    let bytes = std::fs::read(&a.input)?;
    let samples = parse_raw_iq(&bytes)?;
    std::fs::create_dir_all(&a.out)?;
    let source = a.input.file_name().map_or_else(|| "recording".into(), |n| n.to_string_lossy().into_owned());
    let n = write_segments(&samples, a.hop, &a.out, &source)?;
    println!("{n} frames (hop {}) -> {}", a.hop, a.out.join("segments.iqb").display());
    Ok(())
}

pub fn display_list(items: &[&str]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}
