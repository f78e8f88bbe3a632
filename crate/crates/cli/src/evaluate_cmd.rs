//! Config-driven experiment runner.
//!
//! Reads an experiment config (JSON), prepares the data and scheme, runs
//! every algorithm, and writes result tables into the output directory:
//! one `result_<label>.csv` per algorithm, `avg.csv`, curve data
//! (`roc.csv`, `prec_rec.csv`) for top-N mode or nothing extra for
//! ratings mode, and `manifest.json` echoing the config with timings.
//! Everything except the manifest (which carries wall-clock timings) is
//! byte-identical across reruns of the same config.

use std::path::{Path, PathBuf};

use reclab_core::evaluate::{
    auc, curve_points, evaluate, results_csv, AlgorithmConfig, CurveKind, EvalMode,
    EvaluationResult, EvaluationScheme,
};
use reclab_core::recommend::DataKind;
use reclab_core::{Error, RatingData, Registry};

use crate::config::ExperimentConfig;

#[derive(clap::Args)]
pub struct EvaluateArgs {
    /// Experiment config (JSON)
    config: PathBuf,
    /// Override the config's output directory
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the scheme seed
    #[arg(long)]
    seed: Option<u64>,
    /// Also render the curves as standalone SVG charts
    #[arg(long)]
    svg: bool,
}

pub fn run(args: EvaluateArgs) -> Result<(), Error> {
    let mut config = ExperimentConfig::from_path(&args.config)?;
    if let Some(output) = args.output {
        config.output = output;
    }
    if let Some(seed) = args.seed {
        config.scheme.seed = Some(seed);
    }
    let registry = Registry::with_builtins();

    // data pipeline: load, optional sample, optional binarize
    let mut data = crate::load_dataset(
        &config.dataset.path,
        &config.dataset.format,
        &config.dataset.kind,
    )?;
    if let Some(sample) = &config.sample {
        data = data.sample_users(sample.k, crate::resolve_seed(sample.seed))?;
    }
    if let Some(binarize) = &config.binarize {
        data = match data {
            RatingData::Real(m) => RatingData::Binary(m.binarize(binarize.min_rating)),
            RatingData::Binary(_) => {
                return Err(Error::InvalidArgument(
                    "binarize requires real-valued input data".into(),
                ))
            }
        };
    }

    // names unknown for every data kind are config errors
    for algo in &config.algorithms {
        let known = registry.get(&algo.name, DataKind::Real).is_some()
            || registry.get(&algo.name, DataKind::Binary).is_some();
        if !known {
            let mut listing = String::new();
            for kind in [DataKind::Real, DataKind::Binary] {
                for spec in registry.entries(kind) {
                    listing.push_str(&format!("\n  {} ({})", spec.name, spec.data_kind));
                }
            }
            return Err(Error::InvalidArgument(format!(
                "unknown algorithm `{}`; registry:{listing}",
                algo.name
            )));
        }
    }

    let mode = match config.mode.as_str() {
        "topNList" => EvalMode::TopN {
            n_values: if config.n_values.is_empty() {
                vec![1, 3, 5, 10, 15, 20]
            } else {
                config.n_values.clone()
            },
        },
        "ratings" => EvalMode::Ratings,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown mode `{other}` (expected topNList or ratings)"
            )))
        }
    };

    let scheme = EvaluationScheme::new(
        data,
        config.scheme.method()?,
        config.scheme.runs.unwrap_or(1),
        config.scheme.given,
        config.scheme.good_rating,
        crate::resolve_seed(config.scheme.seed),
    )?;
    if scheme.excluded_users() > 0 {
        eprintln!(
            "note: {} users below the rating floor were excluded",
            scheme.excluded_users()
        );
    }

    let algorithms: Vec<AlgorithmConfig> = config
        .algorithms
        .iter()
        .map(|a| AlgorithmConfig {
            label: a.label.clone().unwrap_or_else(|| a.name.clone()),
            name: a.name.clone(),
            params: a.params.clone(),
        })
        .collect();

    let results = evaluate(&registry, &scheme, &algorithms, &mode)?;
    for result in &results {
        if let Some(reason) = &result.skipped {
            eprintln!("note: skipping {}: {reason}", result.algorithm);
            continue;
        }
        for (run, r) in result.runs.iter().enumerate() {
            println!(
                "{} run {} [{:.3}sec/{:.3}sec]",
                result.algorithm,
                run + 1,
                r.model_seconds,
                r.predict_seconds
            );
        }
    }

    std::fs::create_dir_all(&config.output)?;
    write_outputs(&config, &results, &mode, args.svg)?;
    println!("results written to {}", config.output.display());
    Ok(())
}

fn write_outputs(
    config: &ExperimentConfig,
    results: &[EvaluationResult],
    mode: &EvalMode,
    render_svg: bool,
) -> Result<(), Error> {
    let dir = &config.output;

    for result in results {
        if result.skipped.is_some() {
            continue;
        }
        let csv = results_csv(std::slice::from_ref(result), mode);
        std::fs::write(dir.join(format!("result_{}.csv", file_label(&result.algorithm))), csv)?;
    }

    let mut avg = String::new();
    match mode {
        EvalMode::TopN { .. } => {
            avg.push_str("algorithm,n,TP,FP,FN,TN,N,precision,recall,TPR,FPR\n");
            for result in results.iter().filter(|r| r.skipped.is_none()) {
                for row in result.avg_confusion()? {
                    avg.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{},{}\n",
                        result.algorithm,
                        row.n,
                        row.tp,
                        row.fp,
                        row.fne,
                        row.tn,
                        row.universe,
                        row.precision,
                        row.recall,
                        row.tpr,
                        row.fpr
                    ));
                }
            }
        }
        EvalMode::Ratings => {
            avg.push_str("algorithm,RMSE,MSE,MAE\n");
            for result in results.iter().filter(|r| r.skipped.is_none()) {
                let row = result.avg_accuracy()?;
                avg.push_str(&format!(
                    "{},{},{},{}\n",
                    result.algorithm, row.rmse, row.mse, row.mae
                ));
            }
        }
    }
    std::fs::write(dir.join("avg.csv"), avg)?;

    if matches!(mode, EvalMode::TopN { .. }) {
        write_curves(dir, results, CurveKind::Roc, "roc.csv", render_svg)?;
        write_curves(dir, results, CurveKind::PrecRec, "prec_rec.csv", render_svg)?;
    }

    write_manifest(config, results, mode)?;
    Ok(())
}

fn write_curves(
    dir: &Path,
    results: &[EvaluationResult],
    kind: CurveKind,
    filename: &str,
    render_svg: bool,
) -> Result<(), Error> {
    let (x_name, y_name) = match kind {
        CurveKind::Roc => ("FPR", "TPR"),
        CurveKind::PrecRec => ("recall", "precision"),
    };
    let mut csv = format!("algorithm,n,{x_name},{y_name}\n");
    let mut series = Vec::new();
    for result in results.iter().filter(|r| r.skipped.is_none()) {
        let points = curve_points(result, kind)?;
        for p in &points {
            csv.push_str(&format!("{},{},{},{}\n", result.algorithm, p.n, p.x, p.y));
        }
        series.push((result.algorithm.clone(), points));
    }
    std::fs::write(dir.join(filename), csv)?;
    if render_svg {
        let title = match kind {
            CurveKind::Roc => "ROC",
            CurveKind::PrecRec => "precision / recall",
        };
        let svg = crate::svg::line_chart(title, x_name, y_name, &series);
        std::fs::write(dir.join(filename.replace(".csv", ".svg")), svg)?;
    }
    Ok(())
}

fn write_manifest(
    config: &ExperimentConfig,
    results: &[EvaluationResult],
    mode: &EvalMode,
) -> Result<(), Error> {
    let mut algorithms = Vec::new();
    for result in results {
        let mut timings = Vec::new();
        for r in &result.runs {
            timings.push(serde_json::json!({
                "model_seconds": r.model_seconds,
                "predict_seconds": r.predict_seconds,
            }));
        }
        algorithms.push(serde_json::json!({
            "algorithm": result.algorithm,
            "skipped": result.skipped,
            "runs": timings,
        }));
    }
    // AUC summary makes top-N comparisons one glance
    let mut auc_rows = Vec::new();
    if matches!(mode, EvalMode::TopN { .. }) {
        for result in results.iter().filter(|r| r.skipped.is_none()) {
            let points = curve_points(result, CurveKind::Roc)?;
            auc_rows.push(serde_json::json!({
                "algorithm": result.algorithm,
                "auc": auc(&points),
            }));
        }
    }
    let manifest = serde_json::json!({
        "config": config,
        "timings": algorithms,
        "auc": auc_rows,
    });
    std::fs::write(
        config.output.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("serializable manifest"),
    )?;
    Ok(())
}

/// Sanitizes an algorithm label into a file-name fragment.
fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}
