//! Runs algorithms against an evaluation scheme and aggregates results.
//!
//! Per-list-length metrics are macro-averaged: each test user contributes
//! their own ratio, and the ratios are averaged. Users whose returned list
//! is empty contribute precision 0; users with no relevant withheld items
//! are excluded from the recall/TPR average; users with no negative
//! candidates are excluded from the FPR average.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::exec;
use crate::recommend::{ParamMap, RatingData, Registry};

use super::metrics::{self, AccuracyRow, ConfusionCounts};
use super::scheme::{EvaluationScheme, Part};

/// One algorithm to evaluate: a display label, registry name, and
/// parameter overrides.
#[derive(Debug, Clone)]
pub struct AlgorithmConfig {
    pub label: String,
    pub name: String,
    pub params: ParamMap,
}

impl AlgorithmConfig {
    pub fn new(name: &str) -> Self {
        AlgorithmConfig {
            label: name.to_string(),
            name: name.to_string(),
            params: ParamMap::new(),
        }
    }
}

/// What to evaluate: top-N lists at each listed length, or predicted
/// ratings.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalMode {
    TopN { n_values: Vec<usize> },
    Ratings,
}

/// Averaged confusion matrix for one list length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionRow {
    pub n: usize,
    pub tp: f64,
    pub fp: f64,
    pub fne: f64,
    pub tn: f64,
    /// Average universe size (items minus known).
    pub universe: f64,
    pub precision: f64,
    pub recall: f64,
    pub tpr: f64,
    pub fpr: f64,
}

/// Result table of one run.
#[derive(Debug, Clone)]
pub enum RunTable {
    TopN(Vec<ConfusionRow>),
    Ratings(AccuracyRow),
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub model_seconds: f64,
    pub predict_seconds: f64,
    pub table: RunTable,
}

/// Per-algorithm evaluation outcome over all runs.
#[derive(Debug, Clone)]
pub struct EvaluationResult {
    pub algorithm: String,
    pub runs: Vec<RunResult>,
    /// Reason the algorithm was skipped (e.g. not available for the data
    /// kind); `runs` is empty in that case.
    pub skipped: Option<String>,
}

impl EvaluationResult {
    /// Elementwise mean of the per-run confusion tables.
    pub fn avg_confusion(&self) -> Result<Vec<ConfusionRow>> {
        let tables: Vec<&Vec<ConfusionRow>> = self
            .runs
            .iter()
            .map(|r| match &r.table {
                RunTable::TopN(rows) => Ok(rows),
                RunTable::Ratings(_) => Err(Error::WrongMode(
                    "expected top-N results, found ratings".into(),
                )),
            })
            .collect::<Result<_>>()?;
        if tables.is_empty() {
            return Err(Error::WrongMode("no runs to average".into()));
        }
        let rows = tables[0].len();
        let k = tables.len() as f64;
        Ok((0..rows)
            .map(|i| {
                let mut avg = ConfusionRow {
                    n: tables[0][i].n,
                    tp: 0.0,
                    fp: 0.0,
                    fne: 0.0,
                    tn: 0.0,
                    universe: 0.0,
                    precision: 0.0,
                    recall: 0.0,
                    tpr: 0.0,
                    fpr: 0.0,
                };
                for t in &tables {
                    let r = &t[i];
                    avg.tp += r.tp / k;
                    avg.fp += r.fp / k;
                    avg.fne += r.fne / k;
                    avg.tn += r.tn / k;
                    avg.universe += r.universe / k;
                    avg.precision += r.precision / k;
                    avg.recall += r.recall / k;
                    avg.tpr += r.tpr / k;
                    avg.fpr += r.fpr / k;
                }
                avg
            })
            .collect())
    }

    /// Mean RMSE/MSE/MAE over runs.
    pub fn avg_accuracy(&self) -> Result<AccuracyRow> {
        let rows: Vec<&AccuracyRow> = self
            .runs
            .iter()
            .map(|r| match &r.table {
                RunTable::Ratings(row) => Ok(row),
                RunTable::TopN(_) => Err(Error::WrongMode(
                    "expected ratings results, found top-N".into(),
                )),
            })
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Err(Error::WrongMode("no runs to average".into()));
        }
        let k = rows.len() as f64;
        Ok(AccuracyRow {
            rmse: rows.iter().map(|r| r.rmse).sum::<f64>() / k,
            mse: rows.iter().map(|r| r.mse).sum::<f64>() / k,
            mae: rows.iter().map(|r| r.mae).sum::<f64>() / k,
        })
    }
}

/// Evaluates each algorithm under the scheme: per run, fit on the training
/// users, predict for the test users from their known items, and score
/// against the withheld items. Algorithms not registered for the data kind
/// are skipped with a notice. `(algorithm, run)` units are independent and
/// may execute on parallel workers; results are keyed and ordered
/// deterministically.
pub fn evaluate(
    registry: &Registry,
    scheme: &EvaluationScheme,
    algorithms: &[AlgorithmConfig],
    mode: &EvalMode,
) -> Result<Vec<EvaluationResult>> {
    if let EvalMode::TopN { n_values } = mode {
        if n_values.is_empty() {
            return Err(Error::InvalidArgument("n_values must not be empty".into()));
        }
        if scheme.data().kind() == crate::recommend::DataKind::Real
            && scheme.good_rating().is_none()
        {
            return Err(Error::InvalidArgument(
                "top-N evaluation on real ratings requires good_rating".into(),
            ));
        }
    }
    if *mode == EvalMode::Ratings && scheme.data().kind() == crate::recommend::DataKind::Binary {
        return Err(Error::WrongMode(
            "ratings evaluation requires real-valued data".into(),
        ));
    }

    let kind = scheme.data().kind();
    let mut results: Vec<EvaluationResult> = Vec::with_capacity(algorithms.len());
    let mut units: Vec<(usize, usize)> = Vec::new(); // (algorithm index, run)
    for (a, algo) in algorithms.iter().enumerate() {
        if registry.get(&algo.name, kind).is_none() {
            results.push(EvaluationResult {
                algorithm: algo.label.clone(),
                runs: Vec::new(),
                skipped: Some(format!(
                    "{} does not implement a method for {kind} data",
                    algo.name
                )),
            });
        } else {
            results.push(EvaluationResult {
                algorithm: algo.label.clone(),
                runs: Vec::new(),
                skipped: None,
            });
            units.extend((0..scheme.runs()).map(|r| (a, r)));
        }
    }

    let run_outputs: Vec<Result<(usize, usize, RunResult)>> = exec::map_slice(&units, |&(a, r)| {
        evaluate_unit(registry, scheme, &algorithms[a], mode, r).map(|out| (a, r, out))
    });
    let mut collected: Vec<(usize, usize, RunResult)> = Vec::with_capacity(run_outputs.len());
    for out in run_outputs {
        collected.push(out?);
    }
    collected.sort_by_key(|&(a, r, _)| (a, r));
    for (a, _, run) in collected {
        results[a].runs.push(run);
    }
    Ok(results)
}

fn evaluate_unit(
    registry: &Registry,
    scheme: &EvaluationScheme,
    algo: &AlgorithmConfig,
    mode: &EvalMode,
    run: usize,
) -> Result<RunResult> {
    let train = scheme.get_data(run, Part::Train)?;
    let known = scheme.get_data(run, Part::Known)?;
    let unknown = scheme.get_data(run, Part::Unknown)?;

    let params = with_derived_seed(&algo.params, scheme.seed(), run);
    let fit_start = Instant::now();
    let model = registry.fit(&algo.name, &train, &params)?;
    let model_seconds = fit_start.elapsed().as_secs_f64();

    let predict_start = Instant::now();
    let table = match mode {
        EvalMode::Ratings => {
            let pred = model.predict_ratings(&known)?;
            let truth = match &unknown {
                RatingData::Real(m) => m,
                RatingData::Binary(_) => unreachable!("checked in evaluate"),
            };
            RunTable::Ratings(metrics::prediction_accuracy(&pred, truth)?)
        }
        EvalMode::TopN { n_values } => {
            let n_max = *n_values.iter().max().unwrap();
            let top = model.predict_top_n(&known, n_max)?;
            RunTable::TopN(score_top_n(
                &top.lists,
                &known,
                &unknown,
                scheme.good_rating(),
                n_values,
            ))
        }
    };
    let predict_seconds = predict_start.elapsed().as_secs_f64();

    Ok(RunResult {
        model_seconds,
        predict_seconds,
        table,
    })
}

/// Fills in a deterministic seed derived from the scheme seed and run index
/// when the algorithm's own seed parameter is unset.
fn with_derived_seed(params: &ParamMap, scheme_seed: u64, run: usize) -> ParamMap {
    let mut params = params.clone();
    let unset = matches!(
        params.get("seed"),
        None | Some(serde_json::Value::Null)
    );
    if unset {
        let derived = scheme_seed
            .wrapping_mul(0x9E3779B97F4A7C15)
            .wrapping_add(run as u64 + 1);
        params.insert("seed".into(), serde_json::json!(derived));
    }
    params
}

/// Items in the withheld part that count as hits: rating at or above
/// `good_rating` for real data, every withheld 1 for binary data.
fn relevant_items(unknown: &RatingData, user: usize, good_rating: Option<f64>) -> Vec<usize> {
    match unknown {
        RatingData::Real(m) => {
            let threshold = good_rating.expect("checked in evaluate");
            m.row(user)
                .iter()
                .filter(|&&(_, v)| v >= threshold)
                .map(|&(i, _)| i)
                .collect()
        }
        RatingData::Binary(m) => m.row(user).to_vec(),
    }
}

fn score_top_n(
    lists: &[Vec<(usize, f64)>],
    known: &RatingData,
    unknown: &RatingData,
    good_rating: Option<f64>,
    n_values: &[usize],
) -> Vec<ConfusionRow> {
    let n_items = known.n_items();
    let n_users = known.n_users();
    let per_user: Vec<(Vec<usize>, usize, Vec<usize>)> = (0..n_users)
        .map(|u| {
            let items: Vec<usize> = lists[u].iter().map(|&(i, _)| i).collect();
            (items, known.row_count(u), relevant_items(unknown, u, good_rating))
        })
        .collect();

    n_values
        .iter()
        .map(|&n| {
            let mut sums = ConfusionRow {
                n,
                tp: 0.0,
                fp: 0.0,
                fne: 0.0,
                tn: 0.0,
                universe: 0.0,
                precision: 0.0,
                recall: 0.0,
                tpr: 0.0,
                fpr: 0.0,
            };
            let mut recall_users = 0usize;
            let mut fpr_users = 0usize;
            for (items, known_count, relevant) in &per_user {
                let prefix = &items[..n.min(items.len())];
                let c: ConfusionCounts =
                    metrics::confusion_for_user(prefix, *known_count, relevant, n_items);
                let d = metrics::derived_metrics(&c);
                sums.tp += c.tp as f64;
                sums.fp += c.fp as f64;
                sums.fne += c.fne as f64;
                sums.tn += c.tn as f64;
                sums.universe += c.universe as f64;
                // empty lists contribute precision 0
                sums.precision += d.precision.unwrap_or(0.0);
                if let Some(recall) = d.recall {
                    sums.recall += recall;
                    recall_users += 1;
                }
                if let Some(fpr) = d.fpr {
                    sums.fpr += fpr;
                    fpr_users += 1;
                }
            }
            let m = n_users as f64;
            sums.tp /= m;
            sums.fp /= m;
            sums.fne /= m;
            sums.tn /= m;
            sums.universe /= m;
            sums.precision /= m;
            if recall_users > 0 {
                sums.recall /= recall_users as f64;
            }
            if fpr_users > 0 {
                sums.fpr /= fpr_users as f64;
            }
            sums.tpr = sums.recall;
            sums
        })
        .collect()
}

/// A point of a ROC or precision-recall curve, tagged with its list length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Roc,
    PrecRec,
}

/// Curve points from a top-N result's averaged table, ordered by list
/// length: `(FPR, TPR)` for ROC, `(recall, precision)` otherwise.
pub fn curve_points(result: &EvaluationResult, kind: CurveKind) -> Result<Vec<CurvePoint>> {
    let rows = result.avg_confusion()?;
    Ok(rows
        .iter()
        .map(|r| match kind {
            CurveKind::Roc => CurvePoint {
                x: r.fpr,
                y: r.tpr,
                n: r.n,
            },
            CurveKind::PrecRec => CurvePoint {
                x: r.recall,
                y: r.precision,
                n: r.n,
            },
        })
        .collect())
}

/// Area under a ROC curve by trapezoid rule, anchored at (0,0) and
/// completed to (1,1).
pub fn auc(points: &[CurvePoint]) -> f64 {
    let mut xs = vec![(0.0, 0.0)];
    xs.extend(points.iter().map(|p| (p.x, p.y)));
    xs.push((1.0, 1.0));
    let mut area = 0.0;
    for w in xs.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        area += (x1 - x0) * (y0 + y1) / 2.0;
    }
    area
}

/// Renders results as CSV, mirroring the per-run tables:
/// `algorithm,run,n,TP,FP,FN,TN,N,precision,recall,TPR,FPR` for top-N
/// results and `algorithm,run,RMSE,MSE,MAE` for ratings results.
pub fn results_csv(results: &[EvaluationResult], mode: &EvalMode) -> String {
    let mut out = String::new();
    match mode {
        EvalMode::TopN { .. } => {
            out.push_str("algorithm,run,n,TP,FP,FN,TN,N,precision,recall,TPR,FPR\n");
            for result in results {
                for (run, r) in result.runs.iter().enumerate() {
                    if let RunTable::TopN(rows) = &r.table {
                        for row in rows {
                            out.push_str(&format!(
                                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                                result.algorithm,
                                run,
                                row.n,
                                row.tp,
                                row.fp,
                                row.fne,
                                row.tn,
                                row.universe,
                                row.precision,
                                row.recall,
                                row.tpr,
                                row.fpr
                            ));
                        }
                    }
                }
            }
        }
        EvalMode::Ratings => {
            out.push_str("algorithm,run,RMSE,MSE,MAE\n");
            for result in results {
                for (run, r) in result.runs.iter().enumerate() {
                    if let RunTable::Ratings(row) = &r.table {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            result.algorithm, run, row.rmse, row.mse, row.mae
                        ));
                    }
                }
            }
        }
    }
    out
}
