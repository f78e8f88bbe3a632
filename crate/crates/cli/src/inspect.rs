//! Dataset summary and distribution histograms.

use std::path::PathBuf;

use reclab_core::ratings::NormMethod;
use reclab_core::{Error, RatingData};

#[derive(clap::Args)]
pub struct InspectArgs {
    /// Dataset CSV path
    data: PathBuf,
    /// `tuples` or `dense`
    #[arg(long, default_value = "tuples")]
    format: String,
    /// `real` or `binary`
    #[arg(long, default_value = "real")]
    kind: String,
    /// Directory for the histogram CSVs
    #[arg(long, default_value = "reclab_inspect")]
    out: PathBuf,
    /// Bins for the rating histograms
    #[arg(long = "rating-bins", default_value_t = 100)]
    rating_bins: usize,
    /// Bins for the ratings-per-user histogram
    #[arg(long = "user-bins", default_value_t = 50)]
    user_bins: usize,
    /// Bins for the item mean-rating histogram
    #[arg(long = "item-bins", default_value_t = 20)]
    item_bins: usize,
}

pub fn run(args: InspectArgs) -> Result<(), Error> {
    let data = crate::load_dataset(&args.data, &args.format, &args.kind)?;
    std::fs::create_dir_all(&args.out)?;
    match &data {
        RatingData::Real(m) => {
            println!(
                "{} x {} rating matrix with {} ratings.",
                m.n_users(),
                m.n_items(),
                m.n_ratings()
            );
            let raw: Vec<f64> = m.ratings().collect();
            write_histogram(&args.out.join("hist_ratings_raw.csv"), &raw, args.rating_bins)?;
            let (centered, _) = m.normalize(NormMethod::Center)?;
            write_histogram(
                &args.out.join("hist_ratings_centered.csv"),
                &centered.ratings().collect::<Vec<_>>(),
                args.rating_bins,
            )?;
            let (zscore, _) = m.normalize(NormMethod::ZScore)?;
            write_histogram(
                &args.out.join("hist_ratings_zscore.csv"),
                &zscore.ratings().collect::<Vec<_>>(),
                args.rating_bins,
            )?;
            write_histogram(
                &args.out.join("hist_user_counts.csv"),
                &m.row_stats().iter().map(|s| s.count as f64).collect::<Vec<_>>(),
                args.user_bins,
            )?;
            write_histogram(
                &args.out.join("hist_item_means.csv"),
                &m.col_stats()
                    .iter()
                    .filter_map(|s| s.mean)
                    .collect::<Vec<_>>(),
                args.item_bins,
            )?;
        }
        RatingData::Binary(m) => {
            println!(
                "{} x {} binary rating matrix with {} ones.",
                m.n_users(),
                m.n_items(),
                m.count_ones()
            );
            write_histogram(
                &args.out.join("hist_user_counts.csv"),
                &m.row_stats().iter().map(|s| s.count as f64).collect::<Vec<_>>(),
                args.user_bins,
            )?;
            write_histogram(
                &args.out.join("hist_item_counts.csv"),
                &m.col_stats().iter().map(|s| s.count as f64).collect::<Vec<_>>(),
                args.item_bins,
            )?;
        }
    }
    println!("histograms written to {}", args.out.display());
    Ok(())
}

/// Equal-width histogram as `bin_lo,bin_hi,count`; the last bin includes
/// the maximum, so counts sum to the number of values.
fn write_histogram(path: &std::path::Path, values: &[f64], bins: usize) -> Result<(), Error> {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    if !values.is_empty() {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let bins = bins.max(1);
        if hi > lo {
            let width = (hi - lo) / bins as f64;
            let mut counts = vec![0usize; bins];
            for &v in values {
                let idx = (((v - lo) / width) as usize).min(bins - 1);
                counts[idx] += 1;
            }
            for (b, count) in counts.iter().enumerate() {
                let bin_lo = lo + b as f64 * width;
                let bin_hi = lo + (b + 1) as f64 * width;
                out.push_str(&format!("{bin_lo},{bin_hi},{count}\n"));
            }
        } else {
            out.push_str(&format!("{lo},{hi},{}\n", values.len()));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
