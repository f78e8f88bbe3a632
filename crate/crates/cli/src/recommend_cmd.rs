//! Fit one algorithm on a dataset and print recommendations.

use std::path::PathBuf;

use reclab_core::recommend::{ParamMap, PredictType};
use reclab_core::{CsvFormat, Error, RatingData, Registry};

#[derive(clap::Args)]
pub struct RecommendArgs {
    /// Training dataset CSV path
    data: PathBuf,
    /// Algorithm name from the registry
    #[arg(long)]
    algorithm: String,
    /// Algorithm parameters as a JSON object
    #[arg(long)]
    params: Option<String>,
    /// `tuples` or `dense`
    #[arg(long, default_value = "tuples")]
    format: String,
    /// `real` or `binary`
    #[arg(long, default_value = "real")]
    kind: String,
    /// Comma-separated user labels from the dataset to recommend for
    #[arg(long, value_delimiter = ',')]
    users: Vec<String>,
    /// Separate CSV of active users (instead of --users)
    #[arg(long)]
    newdata: Option<PathBuf>,
    /// List length for top-N output
    #[arg(short = 'n', long, default_value_t = 5)]
    n: usize,
    /// `topNList`, `ratings` or `ratingMatrix`
    #[arg(long = "type", default_value = "topNList")]
    predict_type: String,
    /// Seed passed to seeded algorithms when their params leave it unset
    #[arg(long)]
    seed: Option<u64>,
}

pub fn run(args: RecommendArgs) -> Result<(), Error> {
    let data = crate::load_dataset(&args.data, &args.format, &args.kind)?;
    let registry = Registry::with_builtins();

    let mut params: ParamMap = match &args.params {
        None => ParamMap::new(),
        Some(text) => serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("--params: {e}")))?,
    };
    if matches!(params.get("seed"), None | Some(serde_json::Value::Null)) {
        params.insert(
            "seed".into(),
            serde_json::json!(crate::resolve_seed(args.seed)),
        );
    }

    let newdata: RatingData = match (&args.newdata, args.users.is_empty()) {
        (Some(path), _) => crate::load_dataset(path, &args.format, &args.kind)?,
        (None, false) => {
            let indices: Vec<usize> = args
                .users
                .iter()
                .map(|label| match &data {
                    RatingData::Real(m) => m.user_index(label),
                    RatingData::Binary(m) => m.user_index(label),
                }
                .ok_or_else(|| Error::UnknownUser(label.clone())))
                .collect::<Result<_, _>>()?;
            data.select_users(&indices)
        }
        (None, true) => {
            return Err(Error::InvalidArgument(
                "provide --users or --newdata".into(),
            ))
        }
    };

    let model = registry.fit(&args.algorithm, &data, &params)?;
    eprintln!("{model}");

    match PredictType::parse(&args.predict_type)? {
        PredictType::TopNList => {
            let top = model.predict_top_n(&newdata, args.n)?;
            println!("user,rank,item,score");
            for (u, list) in top.lists.iter().enumerate() {
                for (rank, &(item, score)) in list.iter().enumerate() {
                    println!(
                        "{},{},{},{}",
                        top.user_labels[u],
                        rank + 1,
                        top.item_labels[item],
                        score
                    );
                }
            }
        }
        PredictType::Ratings => {
            let ratings = model.predict_ratings(&newdata)?;
            print!(
                "{}",
                reclab_core::ratings::write_csv_string(&ratings, CsvFormat::Dense)
            );
        }
        PredictType::RatingMatrix => {
            let ratings = model.predict_rating_matrix(&newdata)?;
            print!(
                "{}",
                reclab_core::ratings::write_csv_string(&ratings, CsvFormat::Dense)
            );
        }
    }
    Ok(())
}
