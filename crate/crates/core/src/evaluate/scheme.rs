//! Train/test partition plans.
//!
//! A scheme fixes, per run, which users train the model and which are
//! tested, and per test user which rated items are shown to the algorithm
//! (`known`) and which are withheld (`unknown`). Positive `given` values
//! reveal exactly that many items; negative values withhold exactly that
//! many. Users with too few ratings for the protocol are dropped before
//! partitioning, with a count kept for reporting.
//!
//! Per-run RNG streams are derived as `seed ^ run`, so runs can be
//! prepared or consumed in any order with identical results.

use rand::seq::index::sample as index_sample;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::recommend::RatingData;
use crate::rng;

/// How users are partitioned into training and test sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeMethod {
    /// A random `train` proportion of users trains, the rest test.
    Split { train: f64 },
    /// k-fold cross-validation: every user tests exactly once.
    Cross { k: usize },
    /// `train_size` users drawn with replacement train (duplicates
    /// collapsed for fitting); undrawn users test.
    Bootstrap { train_size: Option<usize> },
}

/// Which materialized matrix to fetch from a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Train,
    Known,
    Unknown,
}

struct RunPlan {
    train_users: Vec<usize>,
    test_users: Vec<usize>,
    /// Per test user: positions into the user's row that are shown to the
    /// algorithm.
    known_positions: Vec<Vec<usize>>,
}

pub struct EvaluationScheme {
    data: RatingData,
    method: SchemeMethod,
    given: i64,
    good_rating: Option<f64>,
    seed: u64,
    excluded_users: usize,
    plans: Vec<RunPlan>,
}

impl EvaluationScheme {
    /// Builds a scheme. `runs` is the number of independent repetitions for
    /// split and bootstrap; cross-validation always runs `k` times.
    pub fn new(
        data: RatingData,
        method: SchemeMethod,
        runs: usize,
        given: i64,
        good_rating: Option<f64>,
        seed: u64,
    ) -> Result<Self> {
        if given == 0 {
            return Err(Error::InvalidArgument(
                "given must be positive (Given-x) or negative (All-but-x)".into(),
            ));
        }
        let floor = given.unsigned_abs() as usize + 1;
        let eligible: Vec<usize> = (0..data.n_users())
            .filter(|&u| data.row_count(u) >= floor)
            .collect();
        let excluded_users = data.n_users() - eligible.len();
        if eligible.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "only {} users have the {} ratings required by given={}",
                eligible.len(),
                floor,
                given
            )));
        }

        let n_runs = match method {
            SchemeMethod::Cross { k } => {
                if k < 2 {
                    return Err(Error::InvalidArgument("cross-validation needs k >= 2".into()));
                }
                if k > eligible.len() {
                    return Err(Error::InvalidArgument(format!(
                        "cannot make {k} folds from {} eligible users",
                        eligible.len()
                    )));
                }
                k
            }
            SchemeMethod::Split { train } => {
                if !(train > 0.0 && train < 1.0) {
                    return Err(Error::InvalidArgument(
                        "split proportion must be in (0, 1)".into(),
                    ));
                }
                runs.max(1)
            }
            SchemeMethod::Bootstrap { train_size } => {
                if train_size == Some(0) {
                    return Err(Error::InvalidArgument(
                        "bootstrap train_size must be at least 1".into(),
                    ));
                }
                runs.max(1)
            }
        };

        // fold assignment is drawn once, on its own stream
        let folds: Option<Vec<Vec<usize>>> = match method {
            SchemeMethod::Cross { k } => {
                let mut shuffled = eligible.clone();
                shuffled.shuffle(&mut rng::stream(seed, 1));
                let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
                for (pos, &u) in shuffled.iter().enumerate() {
                    folds[pos % k].push(u);
                }
                Some(folds)
            }
            _ => None,
        };

        let mut plans = Vec::with_capacity(n_runs);
        for run in 0..n_runs {
            let mut run_rng = rng::seeded(seed ^ run as u64);
            let (mut train_users, mut test_users) = match method {
                SchemeMethod::Split { train } => {
                    let n = eligible.len();
                    let train_count =
                        ((train * n as f64).round() as usize).clamp(1, n - 1);
                    let mut shuffled = eligible.clone();
                    shuffled.shuffle(&mut run_rng);
                    let test = shuffled.split_off(train_count);
                    (shuffled, test)
                }
                SchemeMethod::Cross { .. } => {
                    let folds = folds.as_ref().unwrap();
                    let test = folds[run].clone();
                    let train = folds
                        .iter()
                        .enumerate()
                        .filter(|&(f, _)| f != run)
                        .flat_map(|(_, users)| users.iter().copied())
                        .collect();
                    (train, test)
                }
                SchemeMethod::Bootstrap { train_size } => {
                    let n = eligible.len();
                    let size = train_size.unwrap_or(n);
                    let mut drawn = vec![false; n];
                    for _ in 0..size {
                        drawn[run_rng.gen_range(0..n)] = true;
                    }
                    let train: Vec<usize> = eligible
                        .iter()
                        .enumerate()
                        .filter(|&(pos, _)| drawn[pos])
                        .map(|(_, &u)| u)
                        .collect();
                    let test: Vec<usize> = eligible
                        .iter()
                        .enumerate()
                        .filter(|&(pos, _)| !drawn[pos])
                        .map(|(_, &u)| u)
                        .collect();
                    if test.is_empty() {
                        return Err(Error::InvalidArgument(
                            "bootstrap drew every user into training; nothing left to test".into(),
                        ));
                    }
                    (train, test)
                }
            };
            train_users.sort_unstable();
            test_users.sort_unstable();

            let known_positions = test_users
                .iter()
                .map(|&u| {
                    let row_len = data.row_count(u);
                    let k_known = if given > 0 {
                        given as usize
                    } else {
                        row_len - given.unsigned_abs() as usize
                    };
                    let mut positions = index_sample(&mut run_rng, row_len, k_known).into_vec();
                    positions.sort_unstable();
                    positions
                })
                .collect();

            plans.push(RunPlan {
                train_users,
                test_users,
                known_positions,
            });
        }

        Ok(EvaluationScheme {
            data,
            method,
            given,
            good_rating,
            seed,
            excluded_users,
            plans,
        })
    }

    pub fn data(&self) -> &RatingData {
        &self.data
    }

    pub fn method(&self) -> SchemeMethod {
        self.method
    }

    pub fn runs(&self) -> usize {
        self.plans.len()
    }

    pub fn given(&self) -> i64 {
        self.given
    }

    pub fn good_rating(&self) -> Option<f64> {
        self.good_rating
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Users dropped for having fewer than `|given| + 1` ratings.
    pub fn excluded_users(&self) -> usize {
        self.excluded_users
    }

    pub fn train_users(&self, run: usize) -> Result<&[usize]> {
        Ok(&self.plan(run)?.train_users)
    }

    pub fn test_users(&self, run: usize) -> Result<&[usize]> {
        Ok(&self.plan(run)?.test_users)
    }

    fn plan(&self, run: usize) -> Result<&RunPlan> {
        self.plans.get(run).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "run {run} out of range; scheme has {} runs",
                self.plans.len()
            ))
        })
    }

    /// Materializes a partition of one run. `Known` and `Unknown` share the
    /// test user set and partition each test user's ratings.
    pub fn get_data(&self, run: usize, part: Part) -> Result<RatingData> {
        let plan = self.plan(run)?;
        match part {
            Part::Train => Ok(self.data.select_users(&plan.train_users)),
            Part::Known | Part::Unknown => {
                let test = self.data.select_users(&plan.test_users);
                let (known, unknown) = match &test {
                    RatingData::Real(m) => {
                        let (k, u) = m.split_rows(&plan.known_positions);
                        (RatingData::Real(k), RatingData::Real(u))
                    }
                    RatingData::Binary(m) => {
                        let (k, u) = m.split_rows(&plan.known_positions);
                        (RatingData::Binary(k), RatingData::Binary(u))
                    }
                };
                Ok(if part == Part::Known { known } else { unknown })
            }
        }
    }
}
