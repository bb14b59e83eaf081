//! Rank-based estimation of the max-min coefficient from observations.
//!
//! Each column is replaced by its empirical distribution function `F_i`. For sample `k`
//! the block statistic is `M_k(I_j) = max_{i in I_j} F_i(X_ik)^{lambda_j}` and
//!
//! ```text
//! R_hat = (1/n) sum_k [ max_j M_k(I_j) - min_j M_k(I_j) ]
//! ```
//!
//! The report also carries, for every non-empty block subset `T`, the mean
//! `m_bar(T) = (1/n) sum_k max_{j in T} M_k(I_j)`; inclusion–exclusion over these means
//! reproduces `R_hat`.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::inclusion_exclusion_range;
use crate::data::{MatrixKind, SampleMatrix};
use crate::error::{Error, Result};
use crate::partition::{check_block_capacity, Partition, WeightVector};
use crate::summation::CompensatedSum;

/// Denominator of the empirical distribution function.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EcdfDenominator {
    /// `#{X <= x} / n`; the column maximum maps to 1.
    #[default]
    N,
    /// `#{X <= x} / (n + 1)`.
    NPlusOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    #[serde(rename = "R")]
    pub r_hat: f64,
    /// Sample means of block-subset maxima keyed by block mask.
    pub m_bar_terms: BTreeMap<u64, f64>,
    pub partition: Partition,
    pub lambda: WeightVector,
    pub n: usize,
}

impl EstimateReport {
    /// `R_hat` rebuilt from the `m_bar` terms by inclusion–exclusion.
    pub fn r_hat_inclusion_exclusion(&self) -> f64 {
        inclusion_exclusion_range(&mask_indexed(&self.m_bar_terms), self.partition.len())
    }
}

fn mask_indexed(terms: &BTreeMap<u64, f64>) -> Vec<f64> {
    let mut out = vec![0.0; terms.len() + 1];
    for (&m, &v) in terms {
        out[m as usize] = v;
    }
    out
}

/// Empirical distribution transform with the default `/ n` convention.
pub fn rank_transform(data: &SampleMatrix) -> Result<SampleMatrix> {
    rank_transform_with(data, EcdfDenominator::N)
}

/// Replaces entry `(k, j)` by `#{k': X_k'j <= X_kj} / n` (or `/(n+1)`). Tied values all
/// receive the largest count.
pub fn rank_transform_with(
    data: &SampleMatrix,
    denominator: EcdfDenominator,
) -> Result<SampleMatrix> {
    let n = data.rows();
    let d = data.cols();
    if n < 2 {
        return Err(Error::input(format!(
            "rank transform needs at least 2 rows, got {n}"
        )));
    }
    let scale = match denominator {
        EcdfDenominator::N => n as f64,
        EcdfDenominator::NPlusOne => (n + 1) as f64,
    };
    let columns: Vec<Vec<f64>> = (0..d)
        .into_par_iter()
        .map(|j| {
            let col = data.column(j);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
            if col[order[0]] == col[order[n - 1]] {
                return Err(Error::Degenerate(format!(
                    "column {:?} is constant; its ranks carry no information",
                    data.column_names()[j]
                )));
            }
            let mut ranks = vec![0.0; n];
            let mut start = 0;
            while start < n {
                let mut end = start + 1;
                while end < n && col[order[end]] == col[order[start]] {
                    end += 1;
                }
                let value = end as f64 / scale;
                for &k in &order[start..end] {
                    ranks[k] = value;
                }
                start = end;
            }
            Ok(ranks)
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(n * d);
    for k in 0..n {
        values.extend(columns.iter().map(|c| c[k]));
    }
    SampleMatrix::new(
        values,
        data.column_names().to_vec(),
        MatrixKind::RankTransformed,
    )
}

fn ranked(data: &SampleMatrix) -> Result<std::borrow::Cow<'_, SampleMatrix>> {
    match data.kind() {
        MatrixKind::RankTransformed => Ok(std::borrow::Cow::Borrowed(data)),
        MatrixKind::Raw => Ok(std::borrow::Cow::Owned(rank_transform(data)?)),
    }
}

fn check_shape(data: &SampleMatrix, partition: &Partition, lambda: &WeightVector) -> Result<()> {
    if data.cols() != partition.dimension() {
        return Err(Error::input(format!(
            "data has {} columns, partition covers {} components",
            data.cols(),
            partition.dimension()
        )));
    }
    if data.rows() < 2 {
        return Err(Error::input("estimation needs at least 2 rows"));
    }
    lambda.check_matches(partition)
}

/// Per-block statistics `max_{i in I_j} F_i^{lambda_j}` for one ranked row.
fn block_stats(row: &[f64], partition: &Partition, lambda: &WeightVector, out: &mut [f64]) {
    for (j, block) in partition.blocks().iter().enumerate() {
        let top = block.iter().map(|&i| row[i]).fold(0.0, f64::max);
        out[j] = if lambda[j] == 1.0 {
            top
        } else {
            top.powf(lambda[j])
        };
    }
}

/// Estimates `R` and all subset means. Raw data is rank-transformed first; already
/// rank-transformed data is used as is.
pub fn estimate_r(
    data: &SampleMatrix,
    partition: &Partition,
    lambda: &WeightVector,
) -> Result<EstimateReport> {
    check_shape(data, partition, lambda)?;
    check_block_capacity(partition.len())?;
    let data = ranked(data)?;
    let p = partition.len();
    let full = partition.full_mask() as usize;

    let mut stats = vec![0.0; p];
    let mut best = vec![0.0; full + 1];
    let mut direct = CompensatedSum::new();
    let mut sums = vec![CompensatedSum::new(); full + 1];
    for row in data.iter_rows() {
        block_stats(row, partition, lambda, &mut stats);
        let hi = stats.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = stats.iter().copied().fold(f64::INFINITY, f64::min);
        direct.add(hi - lo);
        for mask in 1..=full {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            best[mask] = if rest == 0 {
                stats[low]
            } else {
                best[rest].max(stats[low])
            };
            sums[mask].add(best[mask]);
        }
    }
    let n = data.rows();
    let nf = n as f64;
    Ok(EstimateReport {
        r_hat: direct.value() / nf,
        m_bar_terms: (1..=full)
            .map(|m| (m as u64, sums[m].value() / nf))
            .collect(),
        partition: partition.clone(),
        lambda: lambda.clone(),
        n,
    })
}

/// `(1/n) sum_k max_{j in T} max_{i in I_j} F_i^{lambda_j}(X_ik)` for the blocks in `mask`.
pub fn m_bar(
    data: &SampleMatrix,
    partition: &Partition,
    lambda: &WeightVector,
    mask: u64,
) -> Result<f64> {
    check_shape(data, partition, lambda)?;
    if mask == 0 || mask & !partition.full_mask() != 0 {
        return Err(Error::input(format!(
            "block subset mask {mask:#b} is empty or out of range"
        )));
    }
    let data = ranked(data)?;
    let mut stats = vec![0.0; partition.len()];
    let sum: CompensatedSum = data
        .iter_rows()
        .map(|row| {
            block_stats(row, partition, lambda, &mut stats);
            (0..partition.len())
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| stats[j])
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(sum.value() / data.rows() as f64)
}

/// `R_hat` from subset means indexed by block mask (`terms[0]` ignored).
pub fn r_hat_from_m_bar(terms: &[f64], p: usize) -> Result<f64> {
    let needed = crate::partition::full_mask(p) as usize + 1;
    if p == 0 || terms.len() != needed {
        return Err(Error::input(format!(
            "{p} blocks need {} subset means, got {}",
            needed - 1,
            terms.len().saturating_sub(1)
        )));
    }
    Ok(inclusion_exclusion_range(terms, p))
}

/// `r_t = -log(p_t / p_{t-1})`.
pub fn neg_log_returns(prices: &[f64]) -> Result<Vec<f64>> {
    if prices.len() < 2 {
        return Err(Error::input("need at least two prices to form a return"));
    }
    if let Some(p) = prices.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::input(format!(
            "prices must be positive and finite, got {p}"
        )));
    }
    Ok(prices.windows(2).map(|w| -(w[1] / w[0]).ln()).collect())
}

/// Maximum of the entries sharing each label, in order of first appearance.
pub fn block_maxima<L: Eq + Hash + Clone>(series: &[f64], labels: &[L]) -> Result<Vec<(L, f64)>> {
    if series.is_empty() {
        return Err(Error::input("series is empty"));
    }
    if labels.len() != series.len() {
        return Err(Error::input(format!(
            "{} labels for {} entries",
            labels.len(),
            series.len()
        )));
    }
    let mut slot: HashMap<&L, usize> = HashMap::new();
    let mut out: Vec<(L, f64)> = Vec::new();
    for (label, &v) in labels.iter().zip(series) {
        match slot.get(label) {
            Some(&s) => out[s].1 = out[s].1.max(v),
            None => {
                slot.insert(label, out.len());
                out.push((label.clone(), v));
            }
        }
    }
    Ok(out)
}
