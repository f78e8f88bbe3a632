//! Evaluation of recommender algorithms: train/test schemes, rating-error
//! metrics, and top-N confusion-matrix evaluation with ROC and
//! precision-recall outputs.

mod metrics;
mod runner;
mod scheme;

pub use metrics::{
    confusion_for_user, derived_metrics, e_measure, f_measure, prediction_accuracy, AccuracyRow,
    ConfusionCounts, DerivedMetrics,
};
pub use runner::{
    auc, curve_points, evaluate, results_csv, AlgorithmConfig, ConfusionRow, CurveKind,
    CurvePoint, EvalMode, EvaluationResult, RunResult, RunTable,
};
pub use scheme::{EvaluationScheme, Part, SchemeMethod};
