//! Synthetic rating-data generator.
//!
//! Items carry a popularity weight `(rank + 1)^-skew` that drives which
//! cells are observed, and a quality term that makes popular items rate
//! higher on average. Users get a bias draw plus a latent taste
//! vector, so neighborhood methods have structure to find. Ratings are
//! clamped to the configured scale. Every cell draw comes from a per-user
//! RNG stream, so output depends only on the spec.

use rand::Rng;

use reclab_core::ratings::RatingMatrix;
use reclab_core::{rng, Error, Result};

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub n_users: usize,
    pub n_items: usize,
    /// Fraction of cells observed, in (0, 1).
    pub density: f64,
    pub user_bias_sd: f64,
    /// Item-popularity skew exponent; 0 gives uniform popularity.
    pub skew: f64,
    pub scale: (f64, f64),
    pub seed: u64,
}

/// Strength of the item-quality gradient relative to the scale width.
const QUALITY_SPAN: f64 = 0.15;
/// Number of latent taste factors.
const TASTE_FACTORS: usize = 6;
/// Taste amplitude relative to the scale width.
const TASTE_WEIGHT: f64 = 0.2;
/// Observation noise relative to the scale width.
const NOISE_SD: f64 = 0.1;

pub fn generate(spec: &SyntheticSpec) -> Result<RatingMatrix> {
    if spec.n_users == 0 || spec.n_items == 0 {
        return Err(Error::InvalidArgument(
            "need at least one user and one item".into(),
        ));
    }
    if spec.density.is_nan() || spec.density <= 0.0 || spec.density >= 1.0 {
        return Err(Error::InvalidArgument("density must be in (0, 1)".into()));
    }
    let (lo, hi) = spec.scale;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidArgument(
            "rating scale must satisfy lo < hi".into(),
        ));
    }
    if spec.user_bias_sd < 0.0 || spec.skew < 0.0 {
        return Err(Error::InvalidArgument(
            "user_bias_sd and skew must be non-negative".into(),
        ));
    }

    let width = hi - lo;
    let mid = (lo + hi) / 2.0;
    let weights: Vec<f64> = (0..spec.n_items)
        .map(|i| 1.0 / ((i + 1) as f64).powf(spec.skew))
        .collect();
    // popular items (low rank) are better than the catalog tail
    let quality: Vec<f64> = (0..spec.n_items)
        .map(|i| {
            let rank = if spec.n_items > 1 {
                i as f64 / (spec.n_items - 1) as f64
            } else {
                0.5
            };
            QUALITY_SPAN * width * (0.5 - rank)
        })
        .collect();

    // item taste vectors from a dedicated stream
    let mut item_rng = rng::stream(spec.seed, u64::MAX);
    let item_taste: Vec<Vec<f64>> = (0..spec.n_items)
        .map(|_| (0..TASTE_FACTORS).map(|_| normal(&mut item_rng)).collect())
        .collect();

    // spread the target rating count as evenly as possible over users
    let target = (spec.density * spec.n_users as f64 * spec.n_items as f64).round() as usize;
    let target = target.clamp(spec.n_users, spec.n_users * spec.n_items - 1);
    let base = target / spec.n_users;
    let extra = target % spec.n_users;

    let mut tuples = Vec::with_capacity(target);
    for u in 0..spec.n_users {
        let mut user_rng = rng::stream(spec.seed, u as u64);
        let bias = spec.user_bias_sd * normal(&mut user_rng);
        let taste: Vec<f64> = (0..TASTE_FACTORS).map(|_| normal(&mut user_rng)).collect();
        let count = (base + usize::from(u < extra)).min(spec.n_items);
        let items = weighted_sample(&mut user_rng, &weights, count);
        for i in items {
            let affinity = taste
                .iter()
                .zip(&item_taste[i])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / (TASTE_FACTORS as f64).sqrt();
            let value = mid
                + bias
                + quality[i]
                + TASTE_WEIGHT * width * affinity
                + NOISE_SD * width * normal(&mut user_rng);
            tuples.push((
                format!("u{u}"),
                format!("i{i}"),
                value.clamp(lo, hi),
            ));
        }
    }
    RatingMatrix::from_tuples(&tuples)
}

/// Standard normal via Box-Muller.
fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Draws `count` distinct indices with probability proportional to
/// `weights`, sequentially without replacement.
fn weighted_sample<R: Rng>(rng: &mut R, weights: &[f64], count: usize) -> Vec<usize> {
    let mut remaining: Vec<f64> = weights.to_vec();
    let mut total: f64 = remaining.iter().sum();
    let mut picked = Vec::with_capacity(count);
    for _ in 0..count.min(weights.len()) {
        let mut ticket = rng.gen::<f64>() * total;
        let mut choice = None;
        for (i, &w) in remaining.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            ticket -= w;
            if ticket <= 0.0 {
                choice = Some(i);
                break;
            }
        }
        // rounding may leave a sliver of ticket; fall back to the last
        // positive weight
        let i = choice.unwrap_or_else(|| {
            remaining
                .iter()
                .rposition(|&w| w > 0.0)
                .expect("some weight remains")
        });
        picked.push(i);
        total -= remaining[i];
        remaining[i] = 0.0;
    }
    picked.sort_unstable();
    picked
}
