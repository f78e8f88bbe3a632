//! Random-score baseline.

use rand::Rng;

use crate::error::Result;
use crate::rng;

use super::{param_seed, AlgorithmState, ParamMap, RatingData};

/// Scores every item i.i.d. uniform over the training rating range (for
/// binary data the range is [0, 1), making the ranking a uniform
/// permutation). One RNG stream per user keeps output independent of the
/// prediction worker count.
struct RandomState {
    lo: f64,
    hi: f64,
    seed: u64,
}

impl AlgorithmState for RandomState {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let mut rng = rng::stream(self.seed, user as u64);
        (0..newdata.n_items())
            .map(|_| Some(self.lo + rng.gen::<f64>() * (self.hi - self.lo)))
            .collect()
    }
}

pub(super) fn fit_real(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    let (lo, hi) = data.as_real()?.rating_range().unwrap_or((0.0, 1.0));
    Ok(Box::new(RandomState {
        lo,
        hi,
        seed: param_seed(params)?,
    }))
}

pub(super) fn fit_binary(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    data.as_binary()?;
    Ok(Box::new(RandomState {
        lo: 0.0,
        hi: 1.0,
        seed: param_seed(params)?,
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{ParamMap, Registry};
    use super::*;
    use crate::ratings::RatingMatrix;
    use serde_json::json;

    #[test]
    fn identical_seed_identical_output() {
        let reg = Registry::with_builtins();
        let data = RatingData::Real(
            RatingMatrix::from_tuples(&[("a", "i1", 1.0), ("a", "i2", 5.0), ("b", "i1", 3.0)])
                .unwrap(),
        );
        let mut params = ParamMap::new();
        params.insert("seed".into(), json!(7));
        let m1 = reg.fit("RANDOM", &data, &params).unwrap();
        let m2 = reg.fit("RANDOM", &data, &params).unwrap();
        let a = m1.predict_top_n(&data, 2).unwrap();
        let b = m2.predict_top_n(&data, 2).unwrap();
        assert_eq!(a.lists, b.lists);
    }

    #[test]
    fn scores_within_training_range() {
        let reg = Registry::with_builtins();
        let data = RatingData::Real(
            RatingMatrix::from_tuples(&[("a", "i1", -2.0), ("a", "i2", 3.0), ("b", "i3", 1.0)])
                .unwrap(),
        );
        let model = reg.fit("RANDOM", &data, &ParamMap::new()).unwrap();
        let ratings = model.predict_ratings(&data).unwrap();
        for v in ratings.ratings() {
            assert!((-2.0..=3.0).contains(&v));
        }
    }
}
