//! Latent-factor baseline: rank-k SVD with column-mean imputation.
//!
//! Fitting normalizes the training matrix, fills missing cells with the
//! column means of the normalized data, and factorizes the dense result.
//! New users are folded in by projecting their imputed row onto the item
//! factors; predictions are the projected values mapped back to the user's
//! rating scale.
//!
//! The factorization itself extracts singular triplets one at a time by
//! power iteration on the deflated residual (tolerance 1e-9, up to
//! `maxiter` sweeps per triplet). Each deflation annihilates the extracted
//! row-space direction exactly, so at full rank the triplets reconstruct
//! the input to machine precision even when an individual triplet stops at
//! the iteration cap.

use crate::error::{Error, Result};
use crate::ratings::{NormMethod, NormalizationInfo};

use super::{param_normalize, param_seed, param_usize, AlgorithmState, ParamMap, RatingData};

/// Rank-k factorization `A ≈ U diag(s) Vᵀ`.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    /// Singular values, non-increasing.
    pub singular_values: Vec<f64>,
    /// Left singular vectors, one `Vec<f64>` of length `n_rows` per factor.
    pub user_factors: Vec<Vec<f64>>,
    /// Right singular vectors, one `Vec<f64>` of length `n_cols` per factor.
    pub item_factors: Vec<Vec<f64>>,
}

impl TruncatedSvd {
    /// Reconstructed cell `(i, j)` of `U diag(s) Vᵀ`.
    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        self.singular_values
            .iter()
            .zip(&self.user_factors)
            .zip(&self.item_factors)
            .map(|((s, u), v)| s * u[i] * v[j])
            .sum()
    }
}

/// Truncated SVD of a dense row-major matrix by deflated power iteration.
pub fn truncated_svd(matrix: &[Vec<f64>], k: usize, maxiter: usize, tol: f64) -> TruncatedSvd {
    let m = matrix.len();
    let n = if m > 0 { matrix[0].len() } else { 0 };
    let rank_cap = m.min(n).min(k);
    let mut residual: Vec<Vec<f64>> = matrix.to_vec();

    let mut singular_values = Vec::with_capacity(rank_cap);
    let mut user_factors = Vec::with_capacity(rank_cap);
    let mut item_factors = Vec::with_capacity(rank_cap);

    for _ in 0..rank_cap {
        let mut v = start_vector(&residual, n);
        if norm(&v) == 0.0 {
            break; // residual is numerically zero
        }
        normalize_vec(&mut v);
        for _ in 0..maxiter {
            // one power step on the Gram matrix: v <- Aᵀ(A v)
            let av = mat_vec(&residual, &v);
            let mut next = mat_t_vec(&residual, &av);
            let len = norm(&next);
            if len == 0.0 {
                break;
            }
            for x in &mut next {
                *x /= len;
            }
            // sign-align before measuring the change
            let dot: f64 = next.iter().zip(&v).map(|(a, b)| a * b).sum();
            if dot < 0.0 {
                for x in &mut next {
                    *x = -*x;
                }
            }
            let delta = next
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            v = next;
            if delta < tol {
                break;
            }
        }
        let av = mat_vec(&residual, &v);
        let sigma = norm(&av);
        if sigma <= f64::EPSILON * (m.max(n) as f64) {
            break;
        }
        let u: Vec<f64> = av.iter().map(|x| x / sigma).collect();
        for (row, &ui) in residual.iter_mut().zip(&u) {
            for (cell, &vj) in row.iter_mut().zip(&v) {
                *cell -= sigma * ui * vj;
            }
        }
        singular_values.push(sigma);
        user_factors.push(u);
        item_factors.push(v);
    }

    TruncatedSvd {
        singular_values,
        user_factors,
        item_factors,
    }
}

/// Deterministic start: the residual's largest-norm column.
fn start_vector(residual: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut col_norms = vec![0.0f64; n];
    for row in residual {
        for (j, &x) in row.iter().enumerate() {
            col_norms[j] += x * x;
        }
    }
    let best = col_norms
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(j, _)| j)
        .unwrap_or(0);
    let mut v = vec![0.0; n];
    if col_norms.get(best).copied().unwrap_or(0.0) > 0.0 {
        v[best] = 1.0;
    }
    v
}

fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn mat_t_vec(a: &[Vec<f64>], u: &[f64]) -> Vec<f64> {
    let n = if a.is_empty() { 0 } else { a[0].len() };
    let mut out = vec![0.0; n];
    for (row, &ui) in a.iter().zip(u) {
        for (o, &x) in out.iter_mut().zip(row) {
            *o += ui * x;
        }
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize_vec(v: &mut [f64]) {
    let len = norm(v);
    if len > 0.0 {
        for x in v {
            *x /= len;
        }
    }
}

struct SvdState {
    item_factors: Vec<Vec<f64>>,
    impute: Vec<f64>,
    normalize: Option<NormMethod>,
}

impl AlgorithmState for SvdState {
    fn score_user(&self, newdata: &RatingData, user: usize) -> Vec<Option<f64>> {
        let n_items = self.impute.len();
        let m = match newdata {
            RatingData::Real(m) => m,
            RatingData::Binary(_) => return vec![None; n_items],
        };
        let row = m.row(user);
        if row.is_empty() {
            return vec![None; n_items];
        }
        let (mean, sd) = match self.normalize {
            Some(method) => match NormalizationInfo::for_row(row, method) {
                Ok(stats) => stats,
                Err(_) => return vec![None; n_items],
            },
            None => (0.0, 1.0),
        };
        let mut x = self.impute.clone();
        for &(i, v) in row {
            x[i] = (v - mean) / sd;
        }
        // project onto the item-factor span: x V Vᵀ
        let mut recon = vec![0.0f64; n_items];
        for v in &self.item_factors {
            let z: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
            for (r, &vj) in recon.iter_mut().zip(v) {
                *r += z * vj;
            }
        }
        recon.into_iter().map(|p| Some(p * sd + mean)).collect()
    }
}

pub(super) fn fit_real(data: &RatingData, params: &ParamMap) -> Result<Box<dyn AlgorithmState>> {
    param_seed(params)?;
    let m = data.as_real()?;
    let k = param_usize(params, "k")?.unwrap_or(10);
    if k == 0 {
        return Err(Error::invalid_param("k", "must be at least 1"));
    }
    let maxiter = param_usize(params, "maxiter")?.unwrap_or(100);
    let normalize = param_normalize(params)?;
    let train_norm = match normalize {
        Some(method) => m.normalize(method)?.0,
        None => m.clone(),
    };
    let impute: Vec<f64> = train_norm
        .col_stats()
        .iter()
        .map(|s| s.mean.unwrap_or(0.0))
        .collect();
    let dense: Vec<Vec<f64>> = (0..train_norm.n_users())
        .map(|u| {
            let mut row = impute.clone();
            for &(i, v) in train_norm.row(u) {
                row[i] = v;
            }
            row
        })
        .collect();
    let svd = truncated_svd(&dense, k, maxiter, 1e-9);
    Ok(Box::new(SvdState {
        item_factors: svd.item_factors,
        impute,
        normalize,
    }))
}
