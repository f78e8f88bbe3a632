//! Hybrid recommender: weighted average of child scores.
//!
//! Each child's scores for a user are min-max scaled to [0, 1] over that
//! user's defined predictions, then combined as a weighted mean. Items a
//! child has no prediction for are ignored for that child, with the
//! weights renormalized over the children that do predict.

use serde_json::Value;

use crate::error::{Error, Result};

use super::{AlgorithmState, ParamMap, RatingData, RecommenderModel, Registry};

struct HybridState {
    children: Vec<(RecommenderModel, f64)>,
}

impl HybridState {
    fn combine<F>(&self, newdata: &RatingData, user: usize, score: F) -> Vec<Option<f64>>
    where
        F: Fn(&RecommenderModel) -> Vec<Option<f64>>,
    {
        let n_items = newdata.n_items();
        let known = newdata.known_items(user);
        let mut num = vec![0.0f64; n_items];
        let mut den = vec![0.0f64; n_items];
        for (child, weight) in &self.children {
            let mut scores = score(child);
            if !child.state_recommends_known() {
                for &i in &known {
                    scores[i] = None;
                }
            }
            let scaled = min_max_scale(&scores);
            for (i, s) in scaled.into_iter().enumerate() {
                if let Some(v) = s {
                    num[i] += weight * v;
                    den[i] += weight;
                }
            }
        }
        (0..n_items)
            .map(|i| {
                if den[i] > 0.0 {
                    Some(num[i] / den[i])
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Min-max scales the defined entries to [0, 1]; a degenerate range maps
/// everything to 0.5.
fn min_max_scale(scores: &[Option<f64>]) -> Vec<Option<f64>> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in scores.iter().flatten() {
        lo = lo.min(*s);
        hi = hi.max(*s);
    }
    scores
        .iter()
        .map(|s| {
            s.map(|v| {
                if hi > lo {
                    (v - lo) / (hi - lo)
                } else {
                    0.5
                }
            })
        })
        .collect()
}

impl AlgorithmState for HybridState {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        self.combine(newdata, user, |child| child.score_user_aligned(newdata, user))
    }

    fn rank_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        self.combine(newdata, user, |child| child.rank_user_aligned(newdata, user))
    }

    fn recommends_known(&self) -> bool {
        self.children
            .iter()
            .any(|(c, _)| c.state_recommends_known())
    }
}

pub(super) fn fit(
    registry: &Registry,
    data: &RatingData,
    params: &ParamMap,
) -> Result<Box<dyn AlgorithmState>> {
    super::param_seed(params)?;
    let specs = match params.get("recommenders") {
        Some(Value::Array(list)) if !list.is_empty() => list.clone(),
        _ => {
            return Err(Error::invalid_param(
                "recommenders",
                "expected a non-empty array of {name, params} objects",
            ))
        }
    };
    let weights: Vec<f64> = match params.get("weights") {
        None | Some(Value::Null) => vec![1.0; specs.len()],
        Some(Value::Array(ws)) => {
            if ws.len() != specs.len() {
                return Err(Error::invalid_param(
                    "weights",
                    "must have one weight per recommender",
                ));
            }
            let mut parsed = Vec::with_capacity(ws.len());
            for w in ws {
                let w = w
                    .as_f64()
                    .ok_or_else(|| Error::invalid_param("weights", "expected numbers"))?;
                if w.is_nan() || w < 0.0 {
                    return Err(Error::invalid_param("weights", "must be non-negative"));
                }
                parsed.push(w);
            }
            if parsed.iter().sum::<f64>() <= 0.0 {
                return Err(Error::invalid_param("weights", "must not all be zero"));
            }
            parsed
        }
        Some(other) => {
            return Err(Error::invalid_param(
                "weights",
                format!("expected an array, got {other}"),
            ))
        }
    };

    let mut children = Vec::with_capacity(specs.len());
    for (spec, weight) in specs.iter().zip(weights) {
        let obj = spec.as_object().ok_or_else(|| {
            Error::invalid_param("recommenders", "entries must be {name, params} objects")
        })?;
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::invalid_param("recommenders", "entry is missing `name`"))?;
        let child_params = match obj.get("params") {
            None | Some(Value::Null) => ParamMap::new(),
            Some(Value::Object(map)) => map.clone(),
            Some(other) => {
                return Err(Error::invalid_param(
                    "recommenders",
                    format!("`params` must be an object, got {other}"),
                ))
            }
        };
        for key in obj.keys() {
            if key != "name" && key != "params" {
                return Err(Error::invalid_param(
                    "recommenders",
                    format!("unknown entry field `{key}`"),
                ));
            }
        }
        children.push((registry.fit(name, data, &child_params)?, weight));
    }
    Ok(Box::new(HybridState { children }))
}
