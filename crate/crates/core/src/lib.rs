//! reclab-core: a self-contained collaborative-filtering research toolkit.
//!
//! The crate provides sparse rating-matrix data structures with explicit
//! missing-value semantics ([`ratings`]), pairwise similarity measures and
//! neighborhood selection ([`similarity`]), a registry of recommender
//! algorithms ([`recommend`]), association-rule mining ([`rulemine`]), and
//! an evaluation harness with train/test schemes, error metrics and
//! ROC/precision-recall outputs ([`evaluate`]).
//!
//! Data-parallel inner loops (pairwise similarities, per-user prediction,
//! fold × algorithm evaluation) run on rayon when the default `parallel`
//! feature is enabled and fall back to sequential iteration without it;
//! results are identical either way.

pub mod error;
pub mod evaluate;
mod exec;
pub mod ratings;
pub mod recommend;
pub mod rng;
pub mod rulemine;
pub mod similarity;

pub use error::{Error, Result};
pub use ratings::{BinaryRatingMatrix, CsvFormat, NormMethod, NormalizationInfo, RatingMatrix};
pub use recommend::{
    AlgorithmSpec, AlgorithmState, DataKind, ParamMap, PredictType, RatingData, RecommenderModel,
    Registry, TopNList,
};
