//! Association-rule recommender for binary data.
//!
//! Fitting mines a rule set from the training baskets. Prediction finds
//! rules whose left-hand side is contained in the active user's basket and
//! recommends the unique right-hand sides with the highest confidence.

use crate::error::Result;
use crate::rulemine::{self, RuleSet, TransactionDb};

use super::{param_f64, param_seed, param_usize, AlgorithmState, ParamMap, RatingData};

struct ArState {
    rules: RuleSet,
}

impl AlgorithmState for ArState {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let mut scores = vec![None; newdata.n_items()];
        let m = match newdata {
            RatingData::Binary(m) => m,
            RatingData::Real(_) => return scores,
        };
        let ranked = rulemine::recommend_from_rules(&self.rules, m.row(user), newdata.n_items());
        for (item, confidence) in ranked {
            scores[item] = Some(confidence);
        }
        scores
    }

    fn top_n_user(
        &self,
        newdata: &RatingData,
        user: usize,
        n: usize,
    ) -> Option<Vec<(usize, f64)>> {
        match newdata {
            RatingData::Binary(m) => Some(rulemine::recommend_from_rules(
                &self.rules,
                m.row(user),
                n,
            )),
            RatingData::Real(_) => Some(Vec::new()),
        }
    }
}

pub(super) fn fit(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    param_seed(params)?;
    let m = data.as_binary()?;
    let support = param_f64(params, "support")?.unwrap_or(0.1);
    let confidence = param_f64(params, "confidence")?.unwrap_or(0.8);
    let maxlen = param_usize(params, "maxlen")?.unwrap_or(3);
    let db = TransactionDb::from_binary(m);
    let rules = rulemine::mine_rules(&db, support, confidence, maxlen)?;
    Ok(Box::new(ArState { rules }))
}
