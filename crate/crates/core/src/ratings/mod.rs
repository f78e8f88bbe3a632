//! Sparse rating-matrix data structures.
//!
//! A [`RatingMatrix`] stores real-valued ratings row-major with explicit
//! missing-value semantics: presence of an entry means "rated", absence
//! means missing. An explicit rating of `0.0` is a real rating, distinct
//! from missing. A [`BinaryRatingMatrix`] stores only the 1s of a 0-1
//! preference matrix.
//!
//! Both types are immutable after construction and safe to share across
//! threads; every transform returns a new value.

mod io;
mod normalize;

pub use io::{
    read_binary_csv, read_binary_csv_str, read_csv, read_csv_str, write_csv, write_csv_string,
    CsvFormat,
};
pub use normalize::{NormMethod, NormalizationInfo};

use std::collections::HashMap;

use rand::seq::index::sample as index_sample;

use crate::error::{Error, Result};
use crate::rng;

/// Unique labels with a label ↔ index bijection.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelMap {
    pub fn new() -> Self {
        LabelMap {
            labels: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_labels(labels: Vec<String>) -> Result<Self> {
        let mut map = LabelMap::new();
        for label in labels {
            if map.index.contains_key(&label) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate label `{label}`"
                )));
            }
            map.intern(&label);
        }
        Ok(map)
    }

    /// Returns the index for `label`, inserting it if new.
    pub fn intern(&mut self, label: &str) -> usize {
        if let Some(&idx) = self.index.get(label) {
            return idx;
        }
        let idx = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), idx);
        idx
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

impl Default for LabelMap {
    fn default() -> Self {
        Self::new()
    }
}

/// Per-row (or per-column) descriptive statistics over non-missing entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub sum: f64,
    /// `None` when the row/column has no entries.
    pub mean: Option<f64>,
}

fn stats_from(count: usize, sum: f64) -> Stats {
    Stats {
        count,
        sum,
        mean: if count > 0 {
            Some(sum / count as f64)
        } else {
            None
        },
    }
}

/// Sparse user × item matrix of real ratings.
///
/// Rows hold `(item index, rating)` pairs sorted by item index with no
/// duplicates. Users with zero ratings are representable (e.g. rows of a
/// prediction matrix), though they cannot be expressed as tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    users: LabelMap,
    items: LabelMap,
    rows: Vec<Vec<(usize, f64)>>,
}

impl RatingMatrix {
    /// Builds a matrix from `(user, item, rating)` tuples.
    ///
    /// Duplicate `(user, item)` pairs and non-finite ratings are errors;
    /// an empty tuple list is an error. Labels are interned in first-seen
    /// order.
    pub fn from_tuples<S: AsRef<str>>(tuples: &[(S, S, f64)]) -> Result<Self> {
        if tuples.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut users = LabelMap::new();
        let mut items = LabelMap::new();
        let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
        for (user, item, rating) in tuples {
            let (user, item) = (user.as_ref(), item.as_ref());
            if !rating.is_finite() {
                return Err(Error::InvalidRating {
                    user: user.to_string(),
                    item: item.to_string(),
                    value: *rating,
                });
            }
            let u = users.intern(user);
            if u == rows.len() {
                rows.push(Vec::new());
            }
            let i = items.intern(item);
            if rows[u].iter().any(|&(j, _)| j == i) {
                return Err(Error::DuplicateEntry {
                    user: user.to_string(),
                    item: item.to_string(),
                });
            }
            rows[u].push((i, *rating));
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(i, _)| i);
        }
        Ok(RatingMatrix { users, items, rows })
    }

    /// Builds a matrix from pre-indexed rows. Internal constructor used by
    /// transforms; rows must be sorted by item index without duplicates.
    pub(crate) fn from_parts(
        users: LabelMap,
        items: LabelMap,
        rows: Vec<Vec<(usize, f64)>>,
    ) -> Self {
        debug_assert_eq!(users.len(), rows.len());
        debug_assert!(rows
            .iter()
            .all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        RatingMatrix { users, items, rows }
    }

    pub fn n_users(&self) -> usize {
        self.rows.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn user_labels(&self) -> &[String] {
        self.users.labels()
    }

    pub fn item_labels(&self) -> &[String] {
        self.items.labels()
    }

    pub fn user_index(&self, label: &str) -> Option<usize> {
        self.users.get(label)
    }

    pub fn item_index(&self, label: &str) -> Option<usize> {
        self.items.get(label)
    }

    pub(crate) fn users_map(&self) -> &LabelMap {
        &self.users
    }

    pub(crate) fn items_map(&self) -> &LabelMap {
        &self.items
    }

    /// Sparse row of a user: `(item index, rating)` sorted by item index.
    pub fn row(&self, user: usize) -> &[(usize, f64)] {
        &self.rows[user]
    }

    pub fn get(&self, user: usize, item: usize) -> Option<f64> {
        self.rows[user]
            .binary_search_by_key(&item, |&(i, _)| i)
            .ok()
            .map(|pos| self.rows[user][pos].1)
    }

    /// Total number of stored ratings.
    pub fn n_ratings(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// All stored ratings in row-major order.
    pub fn ratings(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().flat_map(|r| r.iter().map(|&(_, v)| v))
    }

    /// `(min, max)` over stored ratings, `None` for an all-empty matrix.
    pub fn rating_range(&self) -> Option<(f64, f64)> {
        let mut range: Option<(f64, f64)> = None;
        for v in self.ratings() {
            range = Some(match range {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
        range
    }

    /// Converts back to `(user, item, rating)` tuples, row-major.
    pub fn to_tuples(&self) -> Vec<(String, String, f64)> {
        let mut out = Vec::with_capacity(self.n_ratings());
        for (u, row) in self.rows.iter().enumerate() {
            for &(i, v) in row {
                out.push((
                    self.users.label(u).to_string(),
                    self.items.label(i).to_string(),
                    v,
                ));
            }
        }
        out
    }

    pub fn row_stats(&self) -> Vec<Stats> {
        self.rows
            .iter()
            .map(|row| stats_from(row.len(), row.iter().map(|&(_, v)| v).sum()))
            .collect()
    }

    pub fn col_stats(&self) -> Vec<Stats> {
        let mut count = vec![0usize; self.n_items()];
        let mut sum = vec![0.0f64; self.n_items()];
        for row in &self.rows {
            for &(i, v) in row {
                count[i] += 1;
                sum[i] += v;
            }
        }
        count
            .into_iter()
            .zip(sum)
            .map(|(c, s)| stats_from(c, s))
            .collect()
    }

    /// Column-major view: per item, `(user index, rating)` sorted by user.
    pub fn columns(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n_items()];
        for (u, row) in self.rows.iter().enumerate() {
            for &(i, v) in row {
                cols[i].push((u, v));
            }
        }
        cols
    }

    /// 0-1 matrix with a one wherever a rating is present and `>= min_rating`.
    pub fn binarize(&self, min_rating: f64) -> BinaryRatingMatrix {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|&&(_, v)| v >= min_rating)
                    .map(|&(i, _)| i)
                    .collect()
            })
            .collect();
        BinaryRatingMatrix {
            users: self.users.clone(),
            items: self.items.clone(),
            rows,
        }
    }

    /// Selects `k` distinct users uniformly at random, deterministic for a
    /// fixed seed. Row order is the sampled order.
    pub fn sample_users(&self, k: usize, seed: u64) -> Result<Self> {
        let picked = sample_indices(self.n_users(), k, seed)?;
        Ok(self.select_users(&picked))
    }

    /// New matrix containing the given user rows, in the given order.
    /// Item labels (and indices) are preserved.
    pub fn select_users(&self, user_indices: &[usize]) -> Self {
        let mut users = LabelMap::new();
        let mut rows = Vec::with_capacity(user_indices.len());
        for &u in user_indices {
            users.intern(self.users.label(u));
            rows.push(self.rows[u].clone());
        }
        RatingMatrix {
            users,
            items: self.items.clone(),
            rows,
        }
    }

    /// Splits each user's row into two matrices: entries whose positions are
    /// listed in `keep[u]` and the rest. Positions index into the row, not
    /// the item space.
    pub(crate) fn split_rows(&self, keep: &[Vec<usize>]) -> (Self, Self) {
        debug_assert_eq!(keep.len(), self.n_users());
        let mut kept_rows = Vec::with_capacity(self.n_users());
        let mut rest_rows = Vec::with_capacity(self.n_users());
        for (u, positions) in keep.iter().enumerate() {
            let row = &self.rows[u];
            let mut flags = vec![false; row.len()];
            for &p in positions {
                flags[p] = true;
            }
            let mut kept = Vec::with_capacity(positions.len());
            let mut rest = Vec::with_capacity(row.len() - positions.len());
            for (p, &entry) in row.iter().enumerate() {
                if flags[p] {
                    kept.push(entry);
                } else {
                    rest.push(entry);
                }
            }
            kept_rows.push(kept);
            rest_rows.push(rest);
        }
        (
            RatingMatrix::from_parts(self.users.clone(), self.items.clone(), kept_rows),
            RatingMatrix::from_parts(self.users.clone(), self.items.clone(), rest_rows),
        )
    }
}

/// Sparse 0-1 user × item matrix storing only the 1s.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryRatingMatrix {
    users: LabelMap,
    items: LabelMap,
    rows: Vec<Vec<usize>>,
}

impl BinaryRatingMatrix {
    /// Builds a matrix from `(user, item)` pairs; duplicates are an error.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut users = LabelMap::new();
        let mut items = LabelMap::new();
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for (user, item) in pairs {
            let (user, item) = (user.as_ref(), item.as_ref());
            let u = users.intern(user);
            if u == rows.len() {
                rows.push(Vec::new());
            }
            let i = items.intern(item);
            if rows[u].contains(&i) {
                return Err(Error::DuplicateEntry {
                    user: user.to_string(),
                    item: item.to_string(),
                });
            }
            rows[u].push(i);
        }
        for row in &mut rows {
            row.sort_unstable();
        }
        Ok(BinaryRatingMatrix { users, items, rows })
    }

    pub(crate) fn from_parts(users: LabelMap, items: LabelMap, rows: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(users.len(), rows.len());
        BinaryRatingMatrix { users, items, rows }
    }

    pub fn n_users(&self) -> usize {
        self.rows.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn user_labels(&self) -> &[String] {
        self.users.labels()
    }

    pub fn item_labels(&self) -> &[String] {
        self.items.labels()
    }

    pub fn user_index(&self, label: &str) -> Option<usize> {
        self.users.get(label)
    }

    pub(crate) fn users_map(&self) -> &LabelMap {
        &self.users
    }

    pub(crate) fn items_map(&self) -> &LabelMap {
        &self.items
    }

    /// Sorted item indices rated 1 by the user.
    pub fn row(&self, user: usize) -> &[usize] {
        &self.rows[user]
    }

    pub fn get(&self, user: usize, item: usize) -> bool {
        self.rows[user].binary_search(&item).is_ok()
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_stats(&self) -> Vec<Stats> {
        self.rows
            .iter()
            .map(|row| stats_from(row.len(), row.len() as f64))
            .collect()
    }

    pub fn col_stats(&self) -> Vec<Stats> {
        let mut count = vec![0usize; self.n_items()];
        for row in &self.rows {
            for &i in row {
                count[i] += 1;
            }
        }
        count
            .into_iter()
            .map(|c| stats_from(c, c as f64))
            .collect()
    }

    /// Column-major view: per item, sorted user indices with a 1.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); self.n_items()];
        for (u, row) in self.rows.iter().enumerate() {
            for &i in row {
                cols[i].push(u);
            }
        }
        cols
    }

    pub fn sample_users(&self, k: usize, seed: u64) -> Result<Self> {
        let picked = sample_indices(self.n_users(), k, seed)?;
        Ok(self.select_users(&picked))
    }

    pub fn select_users(&self, user_indices: &[usize]) -> Self {
        let mut users = LabelMap::new();
        let mut rows = Vec::with_capacity(user_indices.len());
        for &u in user_indices {
            users.intern(self.users.label(u));
            rows.push(self.rows[u].clone());
        }
        BinaryRatingMatrix {
            users,
            items: self.items.clone(),
            rows,
        }
    }

    pub(crate) fn split_rows(&self, keep: &[Vec<usize>]) -> (Self, Self) {
        debug_assert_eq!(keep.len(), self.n_users());
        let mut kept_rows = Vec::with_capacity(self.n_users());
        let mut rest_rows = Vec::with_capacity(self.n_users());
        for (u, positions) in keep.iter().enumerate() {
            let row = &self.rows[u];
            let mut flags = vec![false; row.len()];
            for &p in positions {
                flags[p] = true;
            }
            let mut kept = Vec::new();
            let mut rest = Vec::new();
            for (p, &item) in row.iter().enumerate() {
                if flags[p] {
                    kept.push(item);
                } else {
                    rest.push(item);
                }
            }
            kept_rows.push(kept);
            rest_rows.push(rest);
        }
        (
            BinaryRatingMatrix::from_parts(self.users.clone(), self.items.clone(), kept_rows),
            BinaryRatingMatrix::from_parts(self.users.clone(), self.items.clone(), rest_rows),
        )
    }
}

fn sample_indices(n: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "sample size must be at least 1".into(),
        ));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "cannot sample {k} of {n} users"
        )));
    }
    let mut rng = rng::seeded(seed);
    Ok(index_sample(&mut rng, n, k).into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 5 × 10 example matrix used throughout: 19 ratings, including an
    /// explicit 0.0 for (u4, i8) and two never-rated columns (i5, i7).
    pub(crate) fn example_matrix() -> RatingMatrix {
        super::read_csv_str(
            "user,i1,i2,i3,i4,i5,i6,i7,i8,i9,i10\n\
             u1,,2,3,5,,5,,4,,\n\
             u2,2,,,,,,,,2,3\n\
             u3,2,,,,,1,,,,\n\
             u4,2,2,1,,,5,,0,2,\n\
             u5,5,,,,,,,5,,4\n",
            super::CsvFormat::Dense,
        )
        .unwrap()
    }

    #[test]
    fn from_tuples_basic() {
        let m = RatingMatrix::from_tuples(&[("u1", "i2", 2.0), ("u1", "i3", 3.0)]).unwrap();
        assert_eq!(m.n_users(), 1);
        assert_eq!(m.n_items(), 2);
        assert_eq!(m.row_stats()[0].count, 2);
    }

    #[test]
    fn example_has_19_ratings() {
        let m = example_matrix();
        assert_eq!(m.n_users(), 5);
        assert_eq!(m.n_items(), 10);
        assert_eq!(m.n_ratings(), 19);
    }

    #[test]
    fn empty_input_rejected() {
        let tuples: Vec<(&str, &str, f64)> = vec![];
        assert!(matches!(
            RatingMatrix::from_tuples(&tuples),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn duplicate_pair_rejected() {
        let err = RatingMatrix::from_tuples(&[("u1", "i1", 1.0), ("u1", "i1", 2.0)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateEntry { .. }));
    }

    #[test]
    fn non_finite_rating_rejected() {
        let err = RatingMatrix::from_tuples(&[("u1", "i1", f64::NAN)]).unwrap_err();
        assert!(matches!(err, Error::InvalidRating { .. }));
    }

    #[test]
    fn explicit_zero_is_a_rating() {
        let m = example_matrix();
        assert_eq!(m.get(3, m.item_index("i8").unwrap()), Some(0.0));
        assert_eq!(m.get(3, m.item_index("i4").unwrap()), None);
    }

    #[test]
    fn round_trip_tuples() {
        let m = example_matrix();
        let mut a = m.to_tuples();
        let m2 = RatingMatrix::from_tuples(&a).unwrap();
        let mut b = m2.to_tuples();
        a.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        b.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        assert_eq!(a, b);
    }

    #[test]
    fn row_stats_mean() {
        let m = example_matrix();
        let stats = m.row_stats();
        assert_eq!(stats[0].count, 5);
        assert!((stats[0].mean.unwrap() - 3.8).abs() < 1e-12);
    }

    #[test]
    fn empty_row_stats_flagged() {
        let m = example_matrix();
        let (known, _) = m.split_rows(&vec![vec![], vec![0], vec![], vec![], vec![]]);
        let stats = known.row_stats();
        assert_eq!(stats[0].count, 0);
        assert_eq!(stats[0].mean, None);
        assert_eq!(stats[1].count, 1);
    }

    #[test]
    fn binarize_example_has_7_ones() {
        let m = example_matrix();
        let b = m.binarize(4.0);
        assert_eq!(b.count_ones(), 7);
        let ones: Vec<Vec<&str>> = (0..5)
            .map(|u| b.row(u).iter().map(|&i| b.item_labels()[i].as_str()).collect())
            .collect();
        assert_eq!(ones[0], vec!["i4", "i6", "i8"]);
        assert!(ones[1].is_empty());
        assert!(ones[2].is_empty());
        assert_eq!(ones[3], vec!["i6"]);
        assert_eq!(ones[4], vec!["i1", "i8", "i10"]);
    }

    #[test]
    fn binarize_threshold_extremes() {
        let m = example_matrix();
        assert_eq!(m.binarize(100.0).count_ones(), 0);
        assert_eq!(m.binarize(-100.0).count_ones(), m.n_ratings());
    }

    #[test]
    fn sample_users_deterministic() {
        let m = example_matrix();
        let a = m.sample_users(3, 42).unwrap();
        let b = m.sample_users(3, 42).unwrap();
        assert_eq!(a.user_labels(), b.user_labels());
        assert_eq!(a.n_users(), 3);
    }

    #[test]
    fn sample_all_users_is_permutation() {
        let m = example_matrix();
        let s = m.sample_users(5, 9).unwrap();
        let mut labels = s.user_labels().to_vec();
        labels.sort();
        assert_eq!(labels, vec!["u1", "u2", "u3", "u4", "u5"]);
        assert_eq!(s.n_ratings(), m.n_ratings());
    }

    #[test]
    fn sample_bounds() {
        let m = example_matrix();
        assert!(m.sample_users(0, 1).is_err());
        assert!(m.sample_users(6, 1).is_err());
    }

    #[test]
    fn binary_from_pairs_duplicates() {
        assert!(BinaryRatingMatrix::from_pairs(&[("u", "a"), ("u", "a")]).is_err());
    }

    #[test]
    fn binary_row_stats() {
        let b = example_matrix().binarize(4.0);
        let stats = b.row_stats();
        assert_eq!(stats[0].count, 3);
        assert_eq!(stats[1].count, 0);
        assert_eq!(stats[1].mean, None);
    }
}
