//! Re-recommends the user's own highly rated items.
//!
//! The one algorithm whose lists intentionally contain known items: its
//! purpose is re-consumption. Candidates are the user's items rated at or
//! above `min_rating` (no threshold when unset), ordered by the user's own
//! rating with an optional seeded jitter of magnitude `randomize`.

use rand::Rng;

use crate::error::Result;
use crate::rng;

use super::{param_f64, param_seed, AlgorithmState, ParamMap, RatingData};

struct Rerecommend {
    min_rating: Option<f64>,
    randomize: f64,
    seed: u64,
}

impl AlgorithmState for Rerecommend {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let mut scores = vec![None; newdata.n_items()];
        let m = match newdata {
            RatingData::Real(m) => m,
            RatingData::Binary(_) => return scores,
        };
        let mut rng = rng::stream(self.seed, user as u64);
        for &(i, v) in m.row(user) {
            if self.min_rating.is_none_or(|t| v >= t) {
                // jitter uniform in [-randomize/2, +randomize/2]
                let jitter = if self.randomize != 0.0 {
                    self.randomize * (rng.gen::<f64>() - 0.5)
                } else {
                    0.0
                };
                scores[i] = Some(v + jitter);
            }
        }
        scores
    }

    fn recommends_known(&self) -> bool {
        true
    }
}

pub(super) fn fit(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    data.as_real()?;
    Ok(Box::new(Rerecommend {
        min_rating: param_f64(params, "min_rating")?,
        randomize: param_f64(params, "randomize")?.unwrap_or(1.0),
        seed: param_seed(params)?,
    }))
}
