//! Recommender algorithms: registry, fitting, and prediction.
//!
//! Algorithms are looked up by `(name, data kind)` in a [`Registry`].
//! Fitting returns a [`RecommenderModel`] holding immutable state; models
//! predict top-N lists, ratings (known cells missing), or a full rating
//! matrix (predictions merged with the user's actual ratings).

mod ar;
mod hybrid;
mod ibcf;
mod popular;
mod random;
mod registry;
mod rerecommend;
pub mod svd;
mod ubcf;

pub use registry::{AlgorithmSpec, Constructor, Registry};

use std::borrow::Cow;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exec;
use crate::ratings::{BinaryRatingMatrix, LabelMap, NormMethod, RatingMatrix};

/// Parameter map for algorithms: JSON values keyed by name, so parameters
/// round-trip through config files unchanged.
pub type ParamMap = serde_json::Map<String, Value>;

/// Kind of rating data an algorithm works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataKind {
    Real,
    Binary,
}

impl DataKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(DataKind::Real),
            "binary" => Ok(DataKind::Binary),
            other => Err(Error::InvalidArgument(format!(
                "unknown data kind `{other}`"
            ))),
        }
    }
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataKind::Real => write!(f, "real"),
            DataKind::Binary => write!(f, "binary"),
        }
    }
}

/// Either kind of rating matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum RatingData {
    Real(RatingMatrix),
    Binary(BinaryRatingMatrix),
}

impl From<RatingMatrix> for RatingData {
    fn from(m: RatingMatrix) -> Self {
        RatingData::Real(m)
    }
}

impl From<BinaryRatingMatrix> for RatingData {
    fn from(m: BinaryRatingMatrix) -> Self {
        RatingData::Binary(m)
    }
}

impl RatingData {
    pub fn kind(&self) -> DataKind {
        match self {
            RatingData::Real(_) => DataKind::Real,
            RatingData::Binary(_) => DataKind::Binary,
        }
    }

    pub fn n_users(&self) -> usize {
        match self {
            RatingData::Real(m) => m.n_users(),
            RatingData::Binary(m) => m.n_users(),
        }
    }

    pub fn n_items(&self) -> usize {
        match self {
            RatingData::Real(m) => m.n_items(),
            RatingData::Binary(m) => m.n_items(),
        }
    }

    pub fn user_labels(&self) -> &[String] {
        match self {
            RatingData::Real(m) => m.user_labels(),
            RatingData::Binary(m) => m.user_labels(),
        }
    }

    pub fn item_labels(&self) -> &[String] {
        match self {
            RatingData::Real(m) => m.item_labels(),
            RatingData::Binary(m) => m.item_labels(),
        }
    }

    pub fn as_real(&self) -> Result<&RatingMatrix> {
        match self {
            RatingData::Real(m) => Ok(m),
            RatingData::Binary(_) => Err(Error::InvalidArgument(
                "expected real-valued rating data".into(),
            )),
        }
    }

    pub fn as_binary(&self) -> Result<&BinaryRatingMatrix> {
        match self {
            RatingData::Binary(m) => Ok(m),
            RatingData::Real(_) => Err(Error::InvalidArgument(
                "expected binary rating data".into(),
            )),
        }
    }

    /// Sorted item indices the user has rated.
    pub fn known_items(&self, user: usize) -> Vec<usize> {
        match self {
            RatingData::Real(m) => m.row(user).iter().map(|&(i, _)| i).collect(),
            RatingData::Binary(m) => m.row(user).to_vec(),
        }
    }

    pub fn row_count(&self, user: usize) -> usize {
        match self {
            RatingData::Real(m) => m.row(user).len(),
            RatingData::Binary(m) => m.row(user).len(),
        }
    }

    pub fn select_users(&self, users: &[usize]) -> RatingData {
        match self {
            RatingData::Real(m) => RatingData::Real(m.select_users(users)),
            RatingData::Binary(m) => RatingData::Binary(m.select_users(users)),
        }
    }

    pub fn sample_users(&self, k: usize, seed: u64) -> Result<RatingData> {
        Ok(match self {
            RatingData::Real(m) => RatingData::Real(m.sample_users(k, seed)?),
            RatingData::Binary(m) => RatingData::Binary(m.sample_users(k, seed)?),
        })
    }

    pub(crate) fn users_map(&self) -> &LabelMap {
        match self {
            RatingData::Real(m) => m.users_map(),
            RatingData::Binary(m) => m.users_map(),
        }
    }

    pub(crate) fn items_map(&self) -> &LabelMap {
        match self {
            RatingData::Real(m) => m.items_map(),
            RatingData::Binary(m) => m.items_map(),
        }
    }
}

/// Fitted per-algorithm state. Implementations score one user of the
/// (item-aligned) new data at a time, so prediction can fan out across
/// users with results independent of the worker count.
pub trait AlgorithmState: Send + Sync {
    /// Rating-scale predictions per item for one user; `None` means the
    /// algorithm has no prediction for that cell.
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>>;

    /// Scores used for top-N ranking. Defaults to [`Self::score_user`];
    /// algorithms whose list order is not their rating prediction
    /// (e.g. popularity counts) override this.
    fn rank_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        self.score_user(newdata, user)
    }

    /// Fully ranked candidates for algorithms with their own tie policy;
    /// returning `Some` bypasses the generic score sort.
    fn top_n_user(
        &self,
        _newdata: &RatingData,
        _user: usize,
        _n: usize,
    ) -> Option<Vec<(usize, f64)>> {
        None
    }

    /// Whether recommendations may include the user's own known items.
    fn recommends_known(&self) -> bool {
        false
    }
}

/// What `predict` should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictType {
    TopNList,
    Ratings,
    RatingMatrix,
}

impl PredictType {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "topNList" | "topn" => Ok(PredictType::TopNList),
            "ratings" => Ok(PredictType::Ratings),
            "ratingMatrix" => Ok(PredictType::RatingMatrix),
            other => Err(Error::InvalidArgument(format!(
                "unknown prediction type `{other}`"
            ))),
        }
    }
}

/// Result of [`RecommenderModel::predict`].
#[derive(Debug, Clone)]
pub enum Prediction {
    TopN(TopNList),
    Ratings(RatingMatrix),
}

/// Ordered recommendation lists, one per active user.
///
/// Lists hold `(item index, score)` pairs with non-increasing scores and
/// may be shorter than `n` when fewer candidates have defined scores.
#[derive(Debug, Clone)]
pub struct TopNList {
    pub n: usize,
    pub user_labels: Vec<String>,
    pub item_labels: Vec<String>,
    pub lists: Vec<Vec<(usize, f64)>>,
}

impl TopNList {
    /// Prefix of each list; `n` must be at least 1.
    pub fn best_n(&self, n: usize) -> Result<TopNList> {
        if n < 1 {
            return Err(Error::invalid_param("n", "must be at least 1"));
        }
        Ok(TopNList {
            n: n.min(self.n),
            user_labels: self.user_labels.clone(),
            item_labels: self.item_labels.clone(),
            lists: self
                .lists
                .iter()
                .map(|l| l.iter().take(n).cloned().collect())
                .collect(),
        })
    }

    /// Item labels of one user's list, in rank order.
    pub fn items_for(&self, user: usize) -> Vec<&str> {
        self.lists[user]
            .iter()
            .map(|&(i, _)| self.item_labels[i].as_str())
            .collect()
    }
}

/// A fitted recommender: algorithm name, resolved parameters, and the
/// algorithm-specific state.
pub struct RecommenderModel {
    algorithm: String,
    data_kind: DataKind,
    params: ParamMap,
    n_train_users: usize,
    train_items: LabelMap,
    state: Box<dyn AlgorithmState>,
}

impl fmt::Display for RecommenderModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Recommender of type `{}` for {} data, learned using {} users.",
            self.algorithm, self.data_kind, self.n_train_users
        )
    }
}

impl fmt::Debug for RecommenderModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecommenderModel")
            .field("algorithm", &self.algorithm)
            .field("data_kind", &self.data_kind)
            .field("n_train_users", &self.n_train_users)
            .finish_non_exhaustive()
    }
}

impl RecommenderModel {
    pub(crate) fn new(
        algorithm: String,
        data_kind: DataKind,
        params: ParamMap,
        train: &RatingData,
        state: Box<dyn AlgorithmState>,
    ) -> Self {
        RecommenderModel {
            algorithm,
            data_kind,
            params,
            n_train_users: train.n_users(),
            train_items: train.items_map().clone(),
            state,
        }
    }

    pub fn algorithm(&self) -> &str {
        &self.algorithm
    }

    pub fn data_kind(&self) -> DataKind {
        self.data_kind
    }

    pub fn params(&self) -> &ParamMap {
        &self.params
    }

    pub fn n_train_users(&self) -> usize {
        self.n_train_users
    }

    /// Remaps new data into the training item space by label. Items unseen
    /// in training are an error; training items absent from the new data
    /// are simply unrated.
    fn align<'a>(&self, newdata: &'a RatingData) -> Result<Cow<'a, RatingData>> {
        if newdata.kind() != self.data_kind {
            return Err(Error::InvalidArgument(format!(
                "model was fitted on {} data, new data is {}",
                self.data_kind,
                newdata.kind()
            )));
        }
        if newdata.item_labels() == self.train_items.labels() {
            return Ok(Cow::Borrowed(newdata));
        }
        let mut remap = Vec::with_capacity(newdata.n_items());
        for label in newdata.item_labels() {
            match self.train_items.get(label) {
                Some(idx) => remap.push(idx),
                None => return Err(Error::UnknownItem(label.clone())),
            }
        }
        let users = newdata.users_map().clone();
        let items = self.train_items.clone();
        Ok(Cow::Owned(match newdata {
            RatingData::Real(m) => {
                let rows = (0..m.n_users())
                    .map(|u| {
                        let mut row: Vec<(usize, f64)> =
                            m.row(u).iter().map(|&(i, v)| (remap[i], v)).collect();
                        row.sort_unstable_by_key(|&(i, _)| i);
                        row
                    })
                    .collect();
                RatingData::Real(RatingMatrix::from_parts(users, items, rows))
            }
            RatingData::Binary(m) => {
                let rows = (0..m.n_users())
                    .map(|u| {
                        let mut row: Vec<usize> = m.row(u).iter().map(|&i| remap[i]).collect();
                        row.sort_unstable();
                        row
                    })
                    .collect();
                RatingData::Binary(BinaryRatingMatrix::from_parts(users, items, rows))
            }
        }))
    }

    /// Top-`n` recommendation lists for every user of `newdata`.
    pub fn predict_top_n(&self, newdata: &RatingData, n: usize) -> Result<TopNList> {
        if n < 1 {
            return Err(Error::invalid_param("n", "must be at least 1"));
        }
        let aligned = self.align(newdata)?;
        let data = aligned.as_ref();
        let state = &self.state;
        let lists = exec::map_indexed(data.n_users(), |u| {
            if let Some(list) = state.top_n_user(data, u, n) {
                return list;
            }
            let scores = state.rank_user(data, u);
            let known = data.known_items(u);
            let mut candidates: Vec<(usize, f64)> = scores
                .iter()
                .enumerate()
                .filter(|&(i, _)| state.recommends_known() || known.binary_search(&i).is_err())
                .filter_map(|(i, &s)| s.map(|v| (i, v)))
                .collect();
            candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            candidates.truncate(n);
            candidates
        });
        Ok(TopNList {
            n,
            user_labels: data.user_labels().to_vec(),
            item_labels: self.train_items.labels().to_vec(),
            lists,
        })
    }

    /// Predicted ratings with the users' known cells left missing.
    pub fn predict_ratings(&self, newdata: &RatingData) -> Result<RatingMatrix> {
        let aligned = self.align(newdata)?;
        let data = aligned.as_ref();
        let state = &self.state;
        let rows = exec::map_indexed(data.n_users(), |u| {
            let scores = state.score_user(data, u);
            let known = data.known_items(u);
            scores
                .into_iter()
                .enumerate()
                .filter(|&(i, _)| state.recommends_known() || known.binary_search(&i).is_err())
                .filter_map(|(i, s)| s.map(|v| (i, v)))
                .collect::<Vec<_>>()
        });
        Ok(RatingMatrix::from_parts(
            data.users_map().clone(),
            self.train_items.clone(),
            rows,
        ))
    }

    /// Predicted ratings merged with the users' actual ratings.
    pub fn predict_rating_matrix(&self, newdata: &RatingData) -> Result<RatingMatrix> {
        let aligned = self.align(newdata)?;
        let data = aligned.as_ref();
        let state = &self.state;
        let rows = exec::map_indexed(data.n_users(), |u| {
            let scores = state.score_user(data, u);
            let mut row: Vec<(usize, f64)> = Vec::new();
            match data {
                RatingData::Real(m) => {
                    let mut actual = m.row(u).iter().peekable();
                    for (i, s) in scores.into_iter().enumerate() {
                        if let Some(&&(j, v)) = actual.peek() {
                            if j == i {
                                row.push((i, v));
                                actual.next();
                                continue;
                            }
                        }
                        if let Some(v) = s {
                            row.push((i, v));
                        }
                    }
                }
                RatingData::Binary(m) => {
                    let known = m.row(u);
                    for (i, s) in scores.into_iter().enumerate() {
                        if known.binary_search(&i).is_ok() {
                            row.push((i, 1.0));
                        } else if let Some(v) = s {
                            row.push((i, v));
                        }
                    }
                }
            }
            row
        });
        Ok(RatingMatrix::from_parts(
            data.users_map().clone(),
            self.train_items.clone(),
            rows,
        ))
    }

    /// Umbrella over the three prediction types; `n` applies to top-N only.
    pub fn predict(&self, newdata: &RatingData, kind: PredictType, n: usize) -> Result<Prediction> {
        Ok(match kind {
            PredictType::TopNList => Prediction::TopN(self.predict_top_n(newdata, n)?),
            PredictType::Ratings => Prediction::Ratings(self.predict_ratings(newdata)?),
            PredictType::RatingMatrix => Prediction::Ratings(self.predict_rating_matrix(newdata)?),
        })
    }

    /// Raw per-user ranking scores in the training item space, for model
    /// composition. Known-cell masking is the caller's responsibility.
    pub(crate) fn rank_user_aligned(&self, data: &RatingData, user: usize) -> Vec<Option<f64>> {
        self.state.rank_user(data, user)
    }

    pub(crate) fn score_user_aligned(&self, data: &RatingData, user: usize) -> Vec<Option<f64>> {
        self.state.score_user(data, user)
    }

    pub(crate) fn state_recommends_known(&self) -> bool {
        self.state.recommends_known()
    }
}

// ---------------------------------------------------------------------------
// parameter extraction helpers shared by the algorithm constructors

pub(crate) fn param_f64(params: &ParamMap, name: &str) -> Result<Option<f64>> {
    match params.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Number(n)) => n
            .as_f64()
            .map(Some)
            .ok_or_else(|| Error::invalid_param(name, "expected a number")),
        Some(other) => Err(Error::invalid_param(
            name,
            format!("expected a number, got {other}"),
        )),
    }
}

pub(crate) fn param_usize(params: &ParamMap, name: &str) -> Result<Option<usize>> {
    match params.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Number(n)) => n
            .as_u64()
            .map(|v| Some(v as usize))
            .ok_or_else(|| Error::invalid_param(name, "expected a non-negative integer")),
        Some(other) => Err(Error::invalid_param(
            name,
            format!("expected an integer, got {other}"),
        )),
    }
}

pub(crate) fn param_bool(params: &ParamMap, name: &str) -> Result<Option<bool>> {
    match params.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Bool(b)) => Ok(Some(*b)),
        Some(other) => Err(Error::invalid_param(
            name,
            format!("expected a boolean, got {other}"),
        )),
    }
}

pub(crate) fn param_str<'a>(params: &'a ParamMap, name: &str) -> Result<Option<&'a str>> {
    match params.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.as_str())),
        Some(other) => Err(Error::invalid_param(
            name,
            format!("expected a string, got {other}"),
        )),
    }
}

pub(crate) fn param_seed(params: &ParamMap) -> Result<u64> {
    match params.get("seed") {
        None | Some(Value::Null) => Ok(0),
        Some(Value::Number(n)) => n
            .as_u64()
            .or_else(|| n.as_i64().map(|v| v as u64))
            .ok_or_else(|| Error::invalid_param("seed", "expected an integer")),
        Some(other) => Err(Error::invalid_param(
            "seed",
            format!("expected an integer, got {other}"),
        )),
    }
}

/// Parses `normalize`: `"center"`, `"z-score"`, `"none"` or null.
pub(crate) fn param_normalize(params: &ParamMap) -> Result<Option<NormMethod>> {
    match param_str(params, "normalize")? {
        None | Some("none") => Ok(None),
        Some(s) => NormMethod::parse(s)
            .map(Some)
            .map_err(|_| Error::invalid_param("normalize", format!("unknown method `{s}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_real() -> RatingData {
        RatingData::Real(
            RatingMatrix::from_tuples(&[
                ("a", "i1", 1.0),
                ("a", "i2", 4.0),
                ("b", "i1", 2.0),
                ("b", "i3", 5.0),
                ("c", "i2", 3.0),
                ("c", "i3", 3.0),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn best_n_is_prefix_and_idempotent() {
        let l = TopNList {
            n: 5,
            user_labels: vec!["a".into()],
            item_labels: vec!["x".into(), "y".into(), "z".into()],
            lists: vec![vec![(2, 3.0), (0, 2.0), (1, 1.0)]],
        };
        let b3 = l.best_n(3).unwrap();
        assert_eq!(b3.lists[0].len(), 3);
        let b2 = l.best_n(2).unwrap();
        assert_eq!(b2.lists[0], vec![(2, 3.0), (0, 2.0)]);
        let again = b2.best_n(2).unwrap();
        assert_eq!(again.lists, b2.lists);
        // larger than list length leaves it unchanged
        assert_eq!(l.best_n(10).unwrap().lists, l.lists);
        assert!(l.best_n(0).is_err());
    }

    #[test]
    fn predict_requires_matching_kind() {
        let reg = Registry::with_builtins();
        let data = small_real();
        let model = reg.fit("POPULAR", &data, &ParamMap::new()).unwrap();
        let binary = RatingData::Binary(
            BinaryRatingMatrix::from_pairs(&[("a", "i1"), ("b", "i2"), ("c", "i3")]).unwrap(),
        );
        assert!(model.predict_top_n(&binary, 2).is_err());
    }

    #[test]
    fn align_by_label_reorders_items() {
        let reg = Registry::with_builtins();
        let data = small_real();
        let model = reg.fit("POPULAR", &data, &ParamMap::new()).unwrap();
        // same items in a different order
        let newdata = RatingData::Real(
            RatingMatrix::from_tuples(&[("q", "i3", 5.0), ("q", "i1", 1.0)]).unwrap(),
        );
        let ratings = model.predict_ratings(&newdata).unwrap();
        assert_eq!(ratings.item_labels(), data.item_labels());
        // the known cells are masked in the training item space
        let i3 = ratings.item_index("i3").unwrap();
        assert_eq!(ratings.get(0, i3), None);
    }

    #[test]
    fn unknown_item_label_rejected() {
        let reg = Registry::with_builtins();
        let data = small_real();
        let model = reg.fit("POPULAR", &data, &ParamMap::new()).unwrap();
        let newdata =
            RatingData::Real(RatingMatrix::from_tuples(&[("q", "mystery", 5.0)]).unwrap());
        assert!(matches!(
            model.predict_ratings(&newdata),
            Err(Error::UnknownItem(_))
        ));
    }

    #[test]
    fn model_reports_training_size() {
        let reg = Registry::with_builtins();
        let data = small_real();
        let model = reg.fit("POPULAR", &data, &ParamMap::new()).unwrap();
        assert_eq!(model.to_string().contains("learned using 3 users"), true);
    }
}
