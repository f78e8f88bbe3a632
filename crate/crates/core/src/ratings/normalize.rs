//! Row normalization: centering and Z-score.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::RatingMatrix;

/// Row-normalization method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    /// Subtract each user's mean rating.
    Center,
    /// Subtract the mean and divide by the sample standard deviation.
    ZScore,
}

impl NormMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "center" => Ok(NormMethod::Center),
            "z-score" | "zscore" | "Z-score" => Ok(NormMethod::ZScore),
            other => Err(Error::InvalidArgument(format!(
                "unknown normalization method `{other}`"
            ))),
        }
    }
}

/// Per-user statistics recorded by [`RatingMatrix::normalize`], sufficient
/// for exact inversion.
///
/// Z-score rows with fewer than two ratings or zero variance fall back to
/// centering and record a standard deviation of 1, which keeps
/// [`RatingMatrix::denormalize`] total.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationInfo {
    pub method: NormMethod,
    pub row_means: Vec<f64>,
    /// Present only for Z-score.
    pub row_sds: Option<Vec<f64>>,
}

impl NormalizationInfo {
    /// Statistics for a single sparse row, applying the same degenerate-row
    /// fallback as full-matrix normalization.
    pub fn for_row(row: &[(usize, f64)], method: NormMethod) -> Result<(f64, f64)> {
        if row.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot normalize a user with no ratings".into(),
            ));
        }
        let n = row.len() as f64;
        let mean = row.iter().map(|&(_, v)| v).sum::<f64>() / n;
        let sd = match method {
            NormMethod::Center => 1.0,
            NormMethod::ZScore => {
                if row.len() < 2 {
                    1.0
                } else {
                    let ss = row.iter().map(|&(_, v)| (v - mean) * (v - mean)).sum::<f64>();
                    let sd = (ss / (n - 1.0)).sqrt();
                    if sd == 0.0 {
                        1.0
                    } else {
                        sd
                    }
                }
            }
        };
        Ok((mean, sd))
    }
}

impl RatingMatrix {
    /// Normalizes each row, returning the transformed matrix and the
    /// statistics needed to invert it. The missing pattern is unchanged.
    pub fn normalize(&self, method: NormMethod) -> Result<(RatingMatrix, NormalizationInfo)> {
        let mut means = Vec::with_capacity(self.n_users());
        let mut sds = Vec::with_capacity(self.n_users());
        let mut rows = Vec::with_capacity(self.n_users());
        for u in 0..self.n_users() {
            let row = self.row(u);
            let (mean, sd) = NormalizationInfo::for_row(row, method)?;
            means.push(mean);
            sds.push(sd);
            rows.push(
                row.iter()
                    .map(|&(i, v)| (i, (v - mean) / sd))
                    .collect::<Vec<_>>(),
            );
        }
        let info = NormalizationInfo {
            method,
            row_means: means,
            row_sds: match method {
                NormMethod::Center => None,
                NormMethod::ZScore => Some(sds),
            },
        };
        Ok((
            RatingMatrix::from_parts(self.users_map().clone(), self.items_map().clone(), rows),
            info,
        ))
    }

    /// Inverts [`RatingMatrix::normalize`] given the recorded statistics.
    pub fn denormalize(&self, info: &NormalizationInfo) -> Result<RatingMatrix> {
        if info.row_means.len() != self.n_users() {
            return Err(Error::ShapeMismatch(format!(
                "normalization info covers {} users, matrix has {}",
                info.row_means.len(),
                self.n_users()
            )));
        }
        if let Some(sds) = &info.row_sds {
            if sds.len() != self.n_users() {
                return Err(Error::ShapeMismatch(
                    "row standard deviations do not match user count".into(),
                ));
            }
        }
        let mut rows = Vec::with_capacity(self.n_users());
        for u in 0..self.n_users() {
            let mean = info.row_means[u];
            let sd = info.row_sds.as_ref().map_or(1.0, |s| s[u]);
            rows.push(
                self.row(u)
                    .iter()
                    .map(|&(i, v)| (i, v * sd + mean))
                    .collect::<Vec<_>>(),
            );
        }
        Ok(RatingMatrix::from_parts(
            self.users_map().clone(),
            self.items_map().clone(),
            rows,
        ))
    }
}
