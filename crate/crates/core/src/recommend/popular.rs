//! Non-personalized popularity recommender.
//!
//! Top-N lists rank items by how many training users rated them. Rating
//! predictions are the user's mean plus the item's column mean on the
//! normalized training matrix, mapped back to the user's rating scale.

use crate::error::Result;
use crate::ratings::NormalizationInfo;

use super::{param_normalize, param_seed, AlgorithmState, ParamMap, RatingData};

struct PopularReal {
    counts: Vec<usize>,
    norm_col_means: Vec<Option<f64>>,
    normalize: Option<crate::ratings::NormMethod>,
}

impl AlgorithmState for PopularReal {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let m = match newdata {
            RatingData::Real(m) => m,
            RatingData::Binary(_) => return vec![None; newdata.n_items()],
        };
        let row = m.row(user);
        let (mean, sd) = match self.normalize {
            Some(method) => match NormalizationInfo::for_row(row, method) {
                Ok(stats) => stats,
                Err(_) => return vec![None; m.n_items()],
            },
            None => (0.0, 1.0),
        };
        self.norm_col_means
            .iter()
            .map(|m| m.map(|v| v * sd + mean))
            .collect()
    }

    fn rank_user(&self, _newdata: &RatingData, _user: usize) -> Vec<Option<f64>> {
        self.counts.iter().map(|&c| Some(c as f64)).collect()
    }
}

pub(super) fn fit_real(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    param_seed(params)?;
    let m = data.as_real()?;
    let normalize = param_normalize(params)?;
    let counts = m.col_stats().iter().map(|s| s.count).collect();
    let norm_col_means = match normalize {
        Some(method) => {
            let (norm, _) = m.normalize(method)?;
            norm.col_stats().iter().map(|s| s.mean).collect()
        }
        None => m.col_stats().iter().map(|s| s.mean).collect(),
    };
    Ok(Box::new(PopularReal {
        counts,
        norm_col_means,
        normalize,
    }))
}

struct PopularBinary {
    counts: Vec<usize>,
    n_train: usize,
}

impl AlgorithmState for PopularBinary {
    fn score_user(&self, _newdata: &RatingData, _user: usize) -> Vec<Option<f64>> {
        self.counts
            .iter()
            .map(|&c| Some(c as f64 / self.n_train as f64))
            .collect()
    }

    fn rank_user(&self, _newdata: &RatingData, _user: usize) -> Vec<Option<f64>> {
        self.counts.iter().map(|&c| Some(c as f64)).collect()
    }
}

pub(super) fn fit_binary(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    param_seed(params)?;
    let m = data.as_binary()?;
    Ok(Box::new(PopularBinary {
        counts: m.col_stats().iter().map(|s| s.count).collect(),
        n_train: m.n_users(),
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{ParamMap, Registry};
    use super::*;
    use crate::ratings::RatingMatrix;

    fn train() -> RatingData {
        // i1 rated by 3 users, i2 by 2, i3 by 1, i4 by 1
        RatingData::Real(
            RatingMatrix::from_tuples(&[
                ("a", "i1", 4.0),
                ("a", "i2", 2.0),
                ("b", "i1", 5.0),
                ("b", "i2", 3.0),
                ("b", "i3", 1.0),
                ("c", "i1", 3.0),
                ("c", "i4", 4.0),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn top_n_follows_popularity_among_unknown() {
        let reg = Registry::with_builtins();
        let model = reg.fit("POPULAR", &train(), &ParamMap::new()).unwrap();
        let newdata =
            RatingData::Real(RatingMatrix::from_tuples(&[("x", "i1", 5.0)]).unwrap());
        let top = model.predict_top_n(&newdata, 3).unwrap();
        let labels = top.items_for(0);
        assert_eq!(labels, vec!["i2", "i3", "i4"], "i1 excluded, i3 before i4 by index");
    }

    #[test]
    fn full_profile_gives_empty_list() {
        let reg = Registry::with_builtins();
        let model = reg.fit("POPULAR", &train(), &ParamMap::new()).unwrap();
        let newdata = RatingData::Real(
            RatingMatrix::from_tuples(&[
                ("x", "i1", 1.0),
                ("x", "i2", 1.0),
                ("x", "i3", 1.0),
                ("x", "i4", 1.0),
            ])
            .unwrap(),
        );
        let top = model.predict_top_n(&newdata, 5).unwrap();
        assert!(top.lists[0].is_empty());
    }

    #[test]
    fn ratings_equal_user_mean_plus_centered_col_mean() {
        let reg = Registry::with_builtins();
        let data = train();
        let model = reg.fit("POPULAR", &data, &ParamMap::new()).unwrap();
        let newdata = RatingData::Real(
            RatingMatrix::from_tuples(&[("x", "i1", 2.0), ("x", "i2", 4.0)]).unwrap(),
        );
        let ratings = model.predict_ratings(&newdata).unwrap();
        // centered train: a=(1,-1), b=(2,0,-2), c=(-0.5,0.5)
        // col mean i3 = -2, i4 = 0.5; user mean = 3
        let m = data.as_real().unwrap();
        let i3 = m.item_index("i3").unwrap();
        let i4 = m.item_index("i4").unwrap();
        assert!((ratings.get(0, i3).unwrap() - 1.0).abs() < 1e-12);
        assert!((ratings.get(0, i4).unwrap() - 3.5).abs() < 1e-12);
        // known cells are masked
        assert_eq!(ratings.get(0, m.item_index("i1").unwrap()), None);
    }

    #[test]
    fn rating_matrix_carries_actual_ratings() {
        let reg = Registry::with_builtins();
        let data = train();
        let model = reg.fit("POPULAR", &data, &ParamMap::new()).unwrap();
        let newdata = RatingData::Real(
            RatingMatrix::from_tuples(&[("x", "i1", 2.0), ("x", "i2", 4.0)]).unwrap(),
        );
        let ratings = model.predict_ratings(&newdata).unwrap();
        let full = model.predict_rating_matrix(&newdata).unwrap();
        let m = data.as_real().unwrap();
        assert_eq!(full.get(0, m.item_index("i1").unwrap()), Some(2.0));
        // unknown cells agree between the two prediction types
        let i3 = m.item_index("i3").unwrap();
        assert_eq!(full.get(0, i3), ratings.get(0, i3));
    }

    #[test]
    fn binary_popularity() {
        let reg = Registry::with_builtins();
        let data = RatingData::Binary(
            crate::ratings::BinaryRatingMatrix::from_pairs(&[
                ("a", "i1"),
                ("b", "i1"),
                ("b", "i2"),
                ("c", "i3"),
            ])
            .unwrap(),
        );
        let model = reg.fit("POPULAR", &data, &ParamMap::new()).unwrap();
        let top = model.predict_top_n(&data, 2).unwrap();
        assert_eq!(top.items_for(2), vec!["i1", "i2"]);
    }
}
