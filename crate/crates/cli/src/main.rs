//! reclab: command-line front end for the collaborative-filtering toolkit.
//!
//! Subcommands: `inspect`, `generate`, `recommend`, `evaluate`,
//! `registry`. Every command is deterministic given its configuration and
//! seed; the environment variable `RECLAB_SEED` supplies a global seed
//! fallback when neither a flag nor a config value provides one.
//!
//! Exit codes: 0 success, 2 I/O or malformed data files, 3 configuration
//! or registry errors, 4 dangling data references (unknown user or item
//! labels).

mod config;
mod evaluate_cmd;
mod generate;
mod inspect;
mod recommend_cmd;
mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use reclab_core::recommend::DataKind;
use reclab_core::{Error, Registry};

#[derive(Parser)]
#[command(name = "reclab", version, about = "Collaborative-filtering research toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a dataset and emit rating/count histograms as CSV
    Inspect(inspect::InspectArgs),
    /// Generate a synthetic rating dataset
    Generate(GenerateArgs),
    /// Fit one algorithm and print recommendations for chosen users
    Recommend(recommend_cmd::RecommendArgs),
    /// Run a config-driven experiment comparing algorithms
    Evaluate(evaluate_cmd::EvaluateArgs),
    /// List the available recommender algorithms
    Registry(RegistryArgs),
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// Output CSV path (tuple format)
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    users: usize,
    #[arg(long, default_value_t = 50)]
    items: usize,
    /// Fraction of cells rated, in (0, 1)
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    /// Standard deviation of the per-user rating bias
    #[arg(long = "user-bias-sd", default_value_t = 1.5)]
    user_bias_sd: f64,
    /// Item-popularity skew exponent (0 = uniform)
    #[arg(long, default_value_t = 0.8)]
    skew: f64,
    /// Lower end of the rating scale
    #[arg(long = "scale-lo", default_value_t = -10.0, allow_hyphen_values = true)]
    scale_lo: f64,
    /// Upper end of the rating scale
    #[arg(long = "scale-hi", default_value_t = 10.0)]
    scale_hi: f64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(clap::Args)]
struct RegistryArgs {
    /// Restrict the listing to one data kind (`real` or `binary`)
    #[arg(long)]
    kind: Option<String>,
}

fn main() {
    // die quietly when a pager closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Inspect(args) => inspect::run(args),
        Command::Generate(args) => run_generate(args),
        Command::Recommend(args) => recommend_cmd::run(args),
        Command::Evaluate(args) => evaluate_cmd::run(args),
        Command::Registry(args) => run_registry(args),
    };
    match outcome {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

/// Maps error classes onto the documented exit codes.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_)
        | Error::Parse { .. }
        | Error::DuplicateEntry { .. }
        | Error::InvalidRating { .. }
        | Error::EmptyInput => 2,
        Error::UnknownUser(_) | Error::UnknownItem(_) => 4,
        _ => 3,
    }
}

/// Seed precedence: explicit flag/config value, then RECLAB_SEED, then 42.
fn resolve_seed(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| {
            std::env::var("RECLAB_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(42)
}

fn run_generate(args: GenerateArgs) -> Result<(), Error> {
    let spec = generate::SyntheticSpec {
        n_users: args.users,
        n_items: args.items,
        density: args.density,
        user_bias_sd: args.user_bias_sd,
        skew: args.skew,
        scale: (args.scale_lo, args.scale_hi),
        seed: resolve_seed(args.seed),
    };
    let matrix = generate::generate(&spec)?;
    reclab_core::ratings::write_csv(&matrix, &args.out, reclab_core::CsvFormat::Tuples)?;
    println!(
        "wrote {} ratings for {} x {} users/items to {}",
        matrix.n_ratings(),
        matrix.n_users(),
        matrix.n_items(),
        args.out.display()
    );
    Ok(())
}

fn run_registry(args: RegistryArgs) -> Result<(), Error> {
    let registry = Registry::with_builtins();
    let kinds: Vec<DataKind> = match &args.kind {
        Some(k) => vec![DataKind::parse(k)?],
        None => vec![DataKind::Real, DataKind::Binary],
    };
    for kind in kinds {
        for spec in registry.entries(kind) {
            println!("{} ({}): {}", spec.name, spec.data_kind, spec.description);
            println!(
                "  defaults: {}",
                serde_json::to_string(&spec.default_params).expect("serializable params")
            );
        }
    }
    Ok(())
}

/// Loads a dataset file as the declared kind.
pub(crate) fn load_dataset(
    path: &std::path::Path,
    format: &str,
    kind: &str,
) -> Result<reclab_core::RatingData, Error> {
    let format = reclab_core::CsvFormat::parse(format)?;
    match DataKind::parse(kind)? {
        DataKind::Real => Ok(reclab_core::RatingData::Real(reclab_core::ratings::read_csv(
            path, format,
        )?)),
        DataKind::Binary => Ok(reclab_core::RatingData::Binary(
            reclab_core::ratings::read_binary_csv(path, format)?,
        )),
    }
}
