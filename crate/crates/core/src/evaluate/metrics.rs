//! Rating-error metrics and the top-N confusion matrix.

use crate::error::{Error, Result};
use crate::ratings::RatingMatrix;

/// Rating-prediction error over the cells that are both predicted and
/// present in the truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyRow {
    pub rmse: f64,
    pub mse: f64,
    pub mae: f64,
}

/// Computes RMSE/MSE/MAE between a prediction matrix and the withheld
/// truth. Labels must align; no overlapping cells is an error.
pub fn prediction_accuracy(pred: &RatingMatrix, truth: &RatingMatrix) -> Result<AccuracyRow> {
    if pred.n_users() != truth.n_users() || pred.item_labels() != truth.item_labels() {
        return Err(Error::ShapeMismatch(
            "prediction and truth matrices must share users and item labels".into(),
        ));
    }
    let mut n = 0usize;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    for u in 0..pred.n_users() {
        let (mut i, mut j) = (0, 0);
        let p = pred.row(u);
        let t = truth.row(u);
        while i < p.len() && j < t.len() {
            match p[i].0.cmp(&t[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let err = t[j].1 - p[i].1;
                    abs_sum += err.abs();
                    sq_sum += err * err;
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    if n == 0 {
        return Err(Error::UndefinedMetric(
            "no cell is both predicted and withheld".into(),
        ));
    }
    let mse = sq_sum / n as f64;
    Ok(AccuracyRow {
        rmse: mse.sqrt(),
        mse,
        mae: abs_sum / n as f64,
    })
}

/// Per-user confusion counts over the recommendable universe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fne: usize,
    pub tn: usize,
    /// Universe size: items minus the user's known items.
    pub universe: usize,
}

/// Confusion counts for one user's top-N list against the withheld
/// relevant items. `known_count` is the number of items shown to the
/// algorithm; the universe is everything else.
pub fn confusion_for_user(
    topn: &[usize],
    known_count: usize,
    relevant: &[usize],
    n_items: usize,
) -> ConfusionCounts {
    let tp = topn
        .iter()
        .filter(|i| relevant.binary_search(i).is_ok())
        .count();
    let fp = topn.len() - tp;
    let fne = relevant.len() - tp;
    let universe = n_items - known_count;
    ConfusionCounts {
        tp,
        fp,
        fne,
        tn: universe - tp - fp - fne,
        universe,
    }
}

/// Metrics derived from a confusion matrix; each is `None` when its
/// denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedMetrics {
    pub precision: Option<f64>,
    /// Identical to the true positive rate.
    pub recall: Option<f64>,
    pub fpr: Option<f64>,
    pub accuracy: f64,
    /// Fraction of misclassified cells over the universe.
    pub mae01: f64,
}

pub fn derived_metrics(c: &ConfusionCounts) -> DerivedMetrics {
    let (tp, fp, fne, tn) = (c.tp as f64, c.fp as f64, c.fne as f64, c.tn as f64);
    let total = c.universe as f64;
    DerivedMetrics {
        precision: if c.tp + c.fp > 0 {
            Some(tp / (tp + fp))
        } else {
            None
        },
        recall: if c.tp + c.fne > 0 {
            Some(tp / (tp + fne))
        } else {
            None
        },
        fpr: if c.fp + c.tn > 0 {
            Some(fp / (fp + tn))
        } else {
            None
        },
        accuracy: (tn + tp) / total,
        mae01: (fp + fne) / total,
    }
}

/// E-measure: trades off precision against recall via `alpha`.
pub fn e_measure(precision: f64, recall: f64, alpha: f64) -> f64 {
    1.0 / (alpha * (1.0 / precision) + (1.0 - alpha) * (1.0 / recall))
}

/// F-measure: the harmonic mean of precision and recall.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    2.0 * precision * recall / (precision + recall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratings::RatingMatrix;

    #[test]
    fn perfect_prediction_zero_error() {
        let m = RatingMatrix::from_tuples(&[("a", "i1", 2.0), ("a", "i2", 4.0)]).unwrap();
        let acc = prediction_accuracy(&m, &m).unwrap();
        assert_eq!(acc, AccuracyRow { rmse: 0.0, mse: 0.0, mae: 0.0 });
    }

    #[test]
    fn constant_error_of_one() {
        let truth = RatingMatrix::from_tuples(&[
            ("a", "i1", 2.0),
            ("a", "i2", 4.0),
            ("b", "i1", 3.0),
            ("b", "i2", 5.0),
        ])
        .unwrap();
        let pred = RatingMatrix::from_tuples(&[
            ("a", "i1", 3.0),
            ("a", "i2", 3.0),
            ("b", "i1", 4.0),
            ("b", "i2", 4.0),
        ])
        .unwrap();
        let acc = prediction_accuracy(&pred, &truth).unwrap();
        assert!((acc.mae - 1.0).abs() < 1e-12);
        assert!((acc.mse - 1.0).abs() < 1e-12);
        assert!((acc.rmse - 1.0).abs() < 1e-12);
    }

    #[test]
    fn accuracy_matches_flat_loop_oracle() {
        use rand::Rng;
        let mut rng = crate::rng::seeded(77);
        let mut dense_t = vec![vec![None; 10]; 10];
        let mut dense_p = vec![vec![None; 10]; 10];
        for u in 0..10 {
            for i in 0..10 {
                if rng.gen::<f64>() < 0.5 {
                    dense_t[u][i] = Some(rng.gen::<f64>() * 5.0);
                }
                if rng.gen::<f64>() < 0.5 {
                    dense_p[u][i] = Some(rng.gen::<f64>() * 5.0);
                }
            }
        }
        // render both through the dense CSV format so label spaces match
        let to_matrix = |cells: &Vec<Vec<Option<f64>>>| {
            let mut text = String::from("user,i0,i1,i2,i3,i4,i5,i6,i7,i8,i9\n");
            for (u, row) in cells.iter().enumerate() {
                text.push_str(&format!("u{u}"));
                for cell in row {
                    text.push(',');
                    if let Some(v) = cell {
                        text.push_str(&format!("{v}"));
                    }
                }
                text.push('\n');
            }
            crate::ratings::read_csv_str(&text, crate::ratings::CsvFormat::Dense).unwrap()
        };
        let truth = to_matrix(&dense_t);
        let pred = to_matrix(&dense_p);

        let mut n = 0usize;
        let mut abs = 0.0;
        let mut sq = 0.0;
        for u in 0..10 {
            for i in 0..10 {
                if let (Some(t), Some(p)) = (dense_t[u][i], dense_p[u][i]) {
                    n += 1;
                    abs += (t - p).abs();
                    sq += (t - p) * (t - p);
                }
            }
        }
        assert!(n > 0);
        let acc = prediction_accuracy(&pred, &truth).unwrap();
        assert!((acc.mae - abs / n as f64).abs() < 1e-12);
        assert!((acc.mse - sq / n as f64).abs() < 1e-12);
        assert!((acc.rmse - (sq / n as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn no_overlap_is_undefined() {
        let truth = RatingMatrix::from_tuples(&[("a", "i1", 2.0), ("a", "i2", 1.0)]).unwrap();
        let pred = {
            let full = RatingMatrix::from_tuples(&[("a", "i1", 2.0), ("a", "i2", 1.0)]).unwrap();
            let (_, rest) = full.split_rows(&vec![vec![0, 1]]);
            rest
        };
        assert!(matches!(
            prediction_accuracy(&pred, &truth),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn confusion_identities() {
        let c = confusion_for_user(&[1, 2, 5], 3, &[2, 5, 7, 9], 100);
        assert_eq!(c.tp, 2);
        assert_eq!(c.fp, 1);
        assert_eq!(c.fne, 2);
        assert_eq!(c.universe, 97);
        assert_eq!(c.tp + c.fp + c.fne + c.tn, 97);
    }

    #[test]
    fn perfect_list_has_no_errors() {
        let c = confusion_for_user(&[2, 5], 3, &[2, 5], 50);
        assert_eq!(c.fp, 0);
        assert_eq!(c.fne, 0);
    }

    #[test]
    fn empty_relevant_all_false_positives() {
        let c = confusion_for_user(&[1, 2], 0, &[], 20);
        assert_eq!(c.tp, 0);
        assert_eq!(c.fne, 0);
        assert_eq!(c.fp, 2);
    }

    #[test]
    fn derived_metric_formulas() {
        let c = ConfusionCounts {
            tp: 2,
            fp: 3,
            fne: 4,
            tn: 91,
            universe: 100,
        };
        let d = derived_metrics(&c);
        assert!((d.precision.unwrap() - 0.4).abs() < 1e-12);
        assert!((d.recall.unwrap() - 2.0 / 6.0).abs() < 1e-12);
        assert!((d.fpr.unwrap() - 3.0 / 94.0).abs() < 1e-12);
        assert!((d.accuracy - 0.93).abs() < 1e-12);
        assert!((d.mae01 - 0.07).abs() < 1e-12);
    }

    #[test]
    fn f_is_harmonic_mean() {
        assert!((f_measure(0.5, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn e_at_half_alpha_equals_f() {
        let cases = [(0.3, 0.7), (0.9, 0.1), (0.5, 0.5), (1.0, 1.0)];
        for (p, r) in cases {
            assert!((e_measure(p, r, 0.5) - f_measure(p, r)).abs() < 1e-12);
        }
    }
}
