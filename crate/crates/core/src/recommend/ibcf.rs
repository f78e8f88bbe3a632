//! Item-based collaborative filtering.
//!
//! Fitting computes the item-to-item similarity matrix on the normalized
//! training data and keeps, per item, only the `k` largest defined
//! similarities (ties at the boundary broken by ascending index).
//! Prediction is a similarity-weighted mean of the user's ratings over the
//! retained neighbors they have rated; non-positive similarities are
//! skipped so the weights form a convex combination, and an empty
//! intersection yields no prediction. Binary data scores candidates by the
//! sum of similarities to basket items.

use crate::error::{Error, Result};
use crate::ratings::{NormMethod, NormalizationInfo};
use crate::similarity::{self, Axis, Measure, SimilarityParams};

use super::{
    param_bool, param_normalize, param_seed, param_str, param_usize, AlgorithmState, ParamMap,
    RatingData,
};

/// Retained similarity rows: per item, `(item, similarity)` sorted by item
/// index for merge joins.
fn truncate_rows(sim: &similarity::SimilarityMatrix, k: usize) -> Vec<Vec<(usize, f64)>> {
    (0..sim.size())
        .map(|i| {
            let mut row: Vec<(usize, f64)> = sim
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .filter_map(|(j, &s)| s.map(|v| (j, v)))
                .collect();
            row.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            row.truncate(k);
            row.sort_unstable_by_key(|&(j, _)| j);
            row
        })
        .collect()
}

struct IbcfReal {
    sim_rows: Vec<Vec<(usize, f64)>>,
    normalize: Option<NormMethod>,
    drop_nonpositive: bool,
}

impl AlgorithmState for IbcfReal {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let n_items = self.sim_rows.len();
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
        let mut rated = vec![None; n_items];
        for &(i, v) in row {
            rated[i] = Some((v - mean) / sd);
        }
        (0..n_items)
            .map(|i| {
                let mut num = 0.0;
                let mut den = 0.0;
                for &(j, s) in &self.sim_rows[i] {
                    if self.drop_nonpositive && s <= 0.0 {
                        continue;
                    }
                    if let Some(v) = rated[j] {
                        num += s * v;
                        den += s;
                    }
                }
                if den > 0.0 {
                    Some((num / den) * sd + mean)
                } else {
                    None
                }
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
    let normalize = param_normalize(params)?;
    let k = param_usize(params, "k")?.unwrap_or(30);
    let train_norm = match normalize {
        Some(method) => m.normalize(method)?.0,
        None => m.clone(),
    };
    let sim = similarity::similarity_matrix(
        &train_norm,
        Axis::Items,
        &SimilarityParams {
            measure,
            min_matching: param_usize(params, "min_matching_items")?.unwrap_or(0),
        },
    )?;
    Ok(Box::new(IbcfReal {
        sim_rows: truncate_rows(&sim, k),
        normalize,
        drop_nonpositive: param_bool(params, "drop_nonpositive")?.unwrap_or(true),
    }))
}

struct IbcfBinary {
    sim_rows: Vec<Vec<(usize, f64)>>,
}

impl AlgorithmState for IbcfBinary {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let n_items = self.sim_rows.len();
        let m = match newdata {
            RatingData::Binary(m) => m,
            RatingData::Real(_) => return vec![None; n_items],
        };
        let basket = m.row(user);
        let mut in_basket = vec![false; n_items];
        for &i in basket {
            in_basket[i] = true;
        }
        (0..n_items)
            .map(|i| {
                let mut sum = 0.0;
                let mut hits = 0usize;
                for &(j, s) in &self.sim_rows[i] {
                    if in_basket[j] {
                        sum += s;
                        hits += 1;
                    }
                }
                if hits > 0 {
                    Some(sum)
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
    let k = param_usize(params, "k")?.unwrap_or(30);
    let sim = similarity::similarity_matrix_binary(
        m,
        Axis::Items,
        param_usize(params, "min_matching_items")?.unwrap_or(0),
    );
    Ok(Box::new(IbcfBinary {
        sim_rows: truncate_rows(&sim, k),
    }))
}
