//! User-based collaborative filtering.
//!
//! The model keeps the (normalized) training matrix. For each active user
//! the predictor normalizes the user's row, finds the `nn` most similar
//! training users, and aggregates their ratings per item: a plain mean, or
//! a similarity-weighted mean. Items rated by no neighbor get no
//! prediction. With `drop_nonpositive` (the default) neighbors with
//! similarity <= 0 are left out of the weighted sum; a weighted denominator
//! that is not strictly positive also yields no prediction.

use crate::error::{Error, Result};
use crate::ratings::{BinaryRatingMatrix, NormMethod, NormalizationInfo, RatingMatrix};
use crate::similarity::{self, Measure, NeighborhoodMode, SimilarityParams};

use super::{
    param_bool, param_seed, param_str, param_usize, AlgorithmState, ParamMap, RatingData,
};

struct UbcfReal {
    train_norm: RatingMatrix,
    normalize: Option<NormMethod>,
    measure: Measure,
    nn: usize,
    weighted: bool,
    min_matching: usize,
    drop_nonpositive: bool,
}

impl AlgorithmState for UbcfReal {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let n_items = self.train_norm.n_items();
        let m = match newdata {
            RatingData::Real(m) => m,
            RatingData::Binary(_) => return vec![None; n_items],
        };
        let row = m.row(user);
        if row.is_empty() {
            return vec![None; n_items];
        }
        let (mean, sd) = match self.normalize {
            Some(method) => match NormalizationInfo::for_row(row, method) {
                Ok(stats) => stats,
                Err(_) => return vec![None; n_items],
            },
            None => (0.0, 1.0),
        };
        let norm_row: Vec<(usize, f64)> =
            row.iter().map(|&(i, v)| (i, (v - mean) / sd)).collect();

        let params = SimilarityParams {
            measure: self.measure,
            min_matching: self.min_matching,
        };
        let sims: Vec<Option<f64>> = (0..self.train_norm.n_users())
            .map(|t| {
                similarity::similarity(&norm_row, self.train_norm.row(t), &params)
                    .expect("measure validated at fit time")
            })
            .collect();
        let hood = similarity::select_from_scores(&sims, usize::MAX, NeighborhoodMode::Knn(self.nn));

        let mut num = vec![0.0f64; n_items];
        let mut den = vec![0.0f64; n_items];
        let mut cnt = vec![0usize; n_items];
        for &(t, s) in &hood.members {
            if self.weighted && self.drop_nonpositive && s <= 0.0 {
                continue;
            }
            for &(i, v) in self.train_norm.row(t) {
                if self.weighted {
                    num[i] += s * v;
                    den[i] += s;
                } else {
                    num[i] += v;
                }
                cnt[i] += 1;
            }
        }
        (0..n_items)
            .map(|i| {
                let pred = if self.weighted {
                    if den[i] > 0.0 {
                        Some(num[i] / den[i])
                    } else {
                        None
                    }
                } else if cnt[i] > 0 {
                    Some(num[i] / cnt[i] as f64)
                } else {
                    None
                };
                pred.map(|p| p * sd + mean)
            })
            .collect()
    }
}

pub(super) fn fit_real(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    param_seed(params)?;
    let m = data.as_real()?;
    let measure = Measure::parse(param_str(params, "method")?.unwrap_or("cosine"))?;
    if measure == Measure::Jaccard {
        return Err(Error::invalid_param(
            "method",
            "jaccard is only defined for binary data",
        ));
    }
    let normalize = super::param_normalize(params)?;
    let train_norm = match normalize {
        Some(method) => m.normalize(method)?.0,
        None => m.clone(),
    };
    Ok(Box::new(UbcfReal {
        train_norm,
        normalize,
        measure,
        nn: param_usize(params, "nn")?.unwrap_or(25),
        weighted: param_bool(params, "weighted")?.unwrap_or(true),
        min_matching: param_usize(params, "min_matching_items")?.unwrap_or(0),
        drop_nonpositive: param_bool(params, "drop_nonpositive")?.unwrap_or(true),
    }))
}

struct UbcfBinary {
    train: BinaryRatingMatrix,
    nn: usize,
    weighted: bool,
    min_matching: usize,
}

impl AlgorithmState for UbcfBinary {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let n_items = self.train.n_items();
        let m = match newdata {
            RatingData::Binary(m) => m,
            RatingData::Real(_) => return vec![None; n_items],
        };
        let basket = m.row(user);
        let sims: Vec<Option<f64>> = (0..self.train.n_users())
            .map(|t| similarity::jaccard(basket, self.train.row(t), self.min_matching))
            .collect();
        let hood = similarity::select_from_scores(&sims, usize::MAX, NeighborhoodMode::Knn(self.nn));

        // binary rows are complete 0/1 vectors: every kept neighbor enters
        // the denominator, items they lack contribute 0
        let mut num = vec![0.0f64; n_items];
        let mut den = 0.0f64;
        let mut kept = 0usize;
        for &(t, s) in &hood.members {
            if self.weighted && s <= 0.0 {
                continue;
            }
            for &i in self.train.row(t) {
                num[i] += if self.weighted { s } else { 1.0 };
            }
            den += s;
            kept += 1;
        }
        (0..n_items)
            .map(|i| {
                if self.weighted {
                    if den > 0.0 {
                        Some(num[i] / den)
                    } else {
                        None
                    }
                } else if kept > 0 {
                    Some(num[i] / kept as f64)
                } else {
                    None
                }
            })
            .collect()
    }
}

pub(super) fn fit_binary(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    param_seed(params)?;
    let m = data.as_binary()?;
    let method = param_str(params, "method")?.unwrap_or("jaccard");
    if Measure::parse(method)? != Measure::Jaccard {
        return Err(Error::invalid_param(
            "method",
            "only jaccard is defined for binary data",
        ));
    }
    Ok(Box::new(UbcfBinary {
        train: m.clone(),
        nn: param_usize(params, "nn")?.unwrap_or(25),
        weighted: param_bool(params, "weighted")?.unwrap_or(true),
        min_matching: param_usize(params, "min_matching_items")?.unwrap_or(0),
    }))
}
