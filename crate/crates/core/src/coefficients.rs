//! Max-min dependence coefficients.
//!
//! For a partition `I_1..I_p` of the components and weights `lambda`, the
//! coefficient is the expected range
//!
//! ```text
//! R = E[ max_j F^{lambda_j}(M(I_j)) - min_j F^{lambda_j}(M(I_j)) ],   M(I_j) = max_{i in I_j} X_i
//! ```
//!
//! Each expected maximum over a union of blocks `T` equals `l(w_T) / (1 + l(w_T))`,
//! where `w_T` puts `1/lambda_j` on the components of block `j in T` (the "e-term").
//! Writing the minimum as an alternating sum of maxima gives
//! `R = e(full) - sum_{T != {}} (-1)^{|T|+1} e(T)`.
//!
//! Subsets of blocks are bit masks; bit `j` selects block `j` (zero-based). Sums run in
//! increasing mask order with compensated accumulation, so results are reproducible.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{check_block_capacity, full_mask, Partition, WeightVector};
use crate::summation::CompensatedSum;
use crate::tail_models::{Family, ModelDescriptor, TailModel};

/// Block counts from which e-terms are evaluated on the rayon pool.
const PARALLEL_BLOCKS: usize = 10;

/// Result of [`max_min_r`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    #[serde(rename = "R")]
    pub r: f64,
    /// `e(T)` keyed by block mask.
    pub e_terms: BTreeMap<u64, f64>,
    pub lower: f64,
    pub upper: f64,
    pub model: ModelDescriptor,
    pub partition: Partition,
    pub lambda: WeightVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

fn check_inputs(model: &TailModel, partition: &Partition, lambda: &WeightVector) -> Result<()> {
    if partition.dimension() != model.dimension() {
        return Err(Error::input(format!(
            "partition covers {} components, model dimension is {}",
            partition.dimension(),
            model.dimension()
        )));
    }
    lambda.check_matches(partition)
}

fn check_mask(partition: &Partition, mask: u64) -> Result<()> {
    if mask == 0 {
        return Err(Error::input("block subset must be non-empty"));
    }
    if mask & !partition.full_mask() != 0 {
        return Err(Error::input(format!(
            "block subset mask {mask:#b} selects blocks beyond the {} available",
            partition.len()
        )));
    }
    Ok(())
}

/// The point `sum_{j in T} lambda_j^{-1} delta(I_j)`: coordinate `i` is `1/lambda_j`
/// when component `i` lies in block `j` and `j` is selected by `mask`, otherwise zero.
pub fn weighted_indicator(
    partition: &Partition,
    lambda: &WeightVector,
    mask: u64,
) -> Result<Vec<f64>> {
    lambda.check_matches(partition)?;
    check_mask(partition, mask)?;
    Ok(indicator_unchecked(partition, lambda, mask))
}

fn indicator_unchecked(partition: &Partition, lambda: &WeightVector, mask: u64) -> Vec<f64> {
    (0..partition.dimension())
        .map(|i| {
            let j = partition.block_of(i);
            if mask >> j & 1 == 1 {
                1.0 / lambda[j]
            } else {
                0.0
            }
        })
        .collect()
}

/// `E[max_{j in T} max_{i in I_j} F^{lambda_j}(X_i)] = l(w_T) / (1 + l(w_T))`.
pub fn e_term(
    model: &TailModel,
    partition: &Partition,
    lambda: &WeightVector,
    mask: u64,
) -> Result<f64> {
    check_inputs(model, partition, lambda)?;
    check_mask(partition, mask)?;
    Ok(e_term_unchecked(model, partition, lambda, mask))
}

fn e_term_unchecked(
    model: &TailModel,
    partition: &Partition,
    lambda: &WeightVector,
    mask: u64,
) -> f64 {
    let l = model.eval_unchecked(&indicator_unchecked(partition, lambda, mask));
    expected_max(l)
}

/// Mean of `U^{1/l}`-type maxima: `l / (1 + l)`.
fn expected_max(l: f64) -> f64 {
    l / (1.0 + l)
}

/// All e-terms indexed by mask; index 0 is unused and left at zero.
fn all_e_terms(model: &TailModel, partition: &Partition, lambda: &WeightVector) -> Vec<f64> {
    let full = partition.full_mask();
    let term = |mask: u64| {
        if mask == 0 {
            0.0
        } else {
            e_term_unchecked(model, partition, lambda, mask)
        }
    };
    if partition.len() >= PARALLEL_BLOCKS {
        (0..=full).into_par_iter().map(term).collect()
    } else {
        (0..=full).map(term).collect()
    }
}

/// `terms[full] - sum_{mask != 0} (-1)^{|mask|+1} terms[mask]`, in increasing mask order.
///
/// `terms` is indexed by block mask over `p` blocks; `terms[0]` is ignored. Works equally for
/// exact e-terms and for sample means of block maxima.
pub fn inclusion_exclusion_range(terms: &[f64], p: usize) -> f64 {
    let full = full_mask(p) as usize;
    assert!(terms.len() > full, "need one term per block subset");
    let mut acc = CompensatedSum::new();
    acc.add(terms[full]);
    for (mask, &t) in terms.iter().enumerate().take(full + 1).skip(1) {
        if mask.count_ones() % 2 == 1 {
            acc.add(-t);
        } else {
            acc.add(t);
        }
    }
    acc.value()
}

/// Reindexes mask-indexed terms onto the sub-partition formed by the blocks in `keep`
/// (zero-based block indices, in the order they become the new blocks).
pub fn restrict_terms(terms: &[f64], keep: &[usize]) -> Vec<f64> {
    let sub_full = full_mask(keep.len());
    (0..=sub_full)
        .map(|sub| {
            if sub == 0 {
                return 0.0;
            }
            let mask = keep
                .iter()
                .enumerate()
                .filter(|(b, _)| sub >> b & 1 == 1)
                .fold(0u64, |m, (_, &j)| m | 1 << j);
            terms[mask as usize]
        })
        .collect()
}

fn range_with_terms(
    model: &TailModel,
    partition: &Partition,
    lambda: &WeightVector,
) -> Result<(f64, Vec<f64>)> {
    check_inputs(model, partition, lambda)?;
    check_block_capacity(partition.len())?;
    let terms = all_e_terms(model, partition, lambda);
    let r = inclusion_exclusion_range(&terms, partition.len());
    Ok((r, terms))
}

/// The coefficient `R` alone, without bounds or the report.
pub fn max_min_r_value(
    model: &TailModel,
    partition: &Partition,
    lambda: &WeightVector,
) -> Result<f64> {
    range_with_terms(model, partition, lambda).map(|(r, _)| r)
}

/// Full coefficient report: `R`, every e-term, and the comonotone / block-independent bounds.
pub fn max_min_r(
    model: &TailModel,
    partition: &Partition,
    lambda: &WeightVector,
) -> Result<CoefficientReport> {
    let (r, terms) = range_with_terms(model, partition, lambda)?;
    let bounds = bounds_r(model, partition, lambda)?;
    Ok(CoefficientReport {
        r,
        e_terms: terms
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, &e)| (m as u64, e))
            .collect(),
        lower: bounds.lower,
        upper: bounds.upper,
        model: model.descriptor(),
        partition: partition.clone(),
        lambda: lambda.clone(),
    })
}

/// `R` at unit weights from extremal coefficients of block unions only.
pub fn max_min_r_unit(model: &TailModel, partition: &Partition) -> Result<f64> {
    if partition.dimension() != model.dimension() {
        return Err(Error::input(format!(
            "partition covers {} components, model dimension is {}",
            partition.dimension(),
            model.dimension()
        )));
    }
    check_block_capacity(partition.len())?;
    let full = partition.full_mask();
    let mut terms = vec![0.0; full as usize + 1];
    for mask in 1..=full {
        let eps = model.extremal_coefficient(&partition.union_of(mask))?;
        terms[mask as usize] = expected_max(eps);
    }
    Ok(inclusion_exclusion_range(&terms, partition.len()))
}

/// Direct alternating-sum expressions for the logistic and M4 families.
///
/// ```text
/// R = sum_{{} != T proper} (-1)^{|T|+1} / (1 + l_T)  -  (1 + (-1)^p) / (1 + l_full)
/// ```
///
/// with `l_T = (sum_{t in T} lambda_t^{-1/theta} |I_t|)^theta` for the logistic family and
/// `l_T = sum_s max_{t in T} max_{j in I_t} alpha[s][j] / lambda_t` for M4. These never touch
/// the generic tail-function evaluation and serve as an independent check on [`max_min_r`].
pub fn closed_form_r(
    model: &TailModel,
    partition: &Partition,
    lambda: &WeightVector,
) -> Result<f64> {
    check_inputs(model, partition, lambda)?;
    check_block_capacity(partition.len())?;
    let p = partition.len();
    let lam = lambda.as_slice();
    let l_of: Box<dyn Fn(u64) -> f64> = match model.family() {
        Family::Logistic(params) => {
            let theta = params.theta();
            // log of lambda_t^{-1/theta} |I_t|, combined with log-sum-exp
            let logs: Vec<f64> = (0..p)
                .map(|t| -lam[t].ln() / theta + (partition.block(t).len() as f64).ln())
                .collect();
            Box::new(move |mask| {
                let chosen = (0..p).filter(|t| mask >> t & 1 == 1).map(|t| logs[t]);
                let top = chosen.clone().fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = chosen.map(|v| (v - top).exp()).sum();
                (theta * (top + s.ln())).exp()
            })
        }
        Family::M4(params) => {
            let alpha = params.alpha().to_vec();
            let blocks = partition.blocks().to_vec();
            let lam = lam.to_vec();
            Box::new(move |mask| {
                alpha
                    .iter()
                    .map(|row| {
                        (0..p)
                            .filter(|t| mask >> t & 1 == 1)
                            .flat_map(|t| blocks[t].iter().map(move |&j| (t, j)))
                            .map(|(t, j)| row[j] / lam[t])
                            .fold(0.0, f64::max)
                    })
                    .sum()
            })
        }
        other => {
            return Err(Error::input(format!(
                "no closed form for the {} family (logistic and m4 only)",
                other.name()
            )))
        }
    };

    let full = full_mask(p);
    let mut acc = CompensatedSum::new();
    for mask in 1..full {
        let sign = if mask.count_ones() % 2 == 1 {
            1.0
        } else {
            -1.0
        };
        acc.add(sign / (1.0 + l_of(mask)));
    }
    let parity = if p.is_multiple_of(2) { 2.0 } else { 0.0 };
    acc.add(-parity / (1.0 + l_of(full)));
    Ok(acc.value())
}

/// Lower and upper bounds on `R`.
///
/// Both come from vectors whose blocks keep the model's within-block law. In the lower one
/// the block maxima are comonotone: `F(M(I_j))^{lambda_j}` is then `V^{a_j}` for a single
/// uniform `V` with `a_j = lambda_j / eps(I_j)`, so the bound is
/// `1/(1 + min a) - 1/(1 + max a)`. It vanishes at unit weights whenever the blocks share
/// one extremal coefficient (singletons, comonotone models). The upper one makes the
/// blocks mutually independent.
pub fn bounds_r(model: &TailModel, partition: &Partition, lambda: &WeightVector) -> Result<Bounds> {
    check_inputs(model, partition, lambda)?;
    let mut a_min = f64::INFINITY;
    let mut a_max = f64::NEG_INFINITY;
    for (j, block) in partition.blocks().iter().enumerate() {
        let a = lambda[j] / model.extremal_coefficient(block)?;
        a_min = a_min.min(a);
        a_max = a_max.max(a);
    }
    let lower = 1.0 / (1.0 + a_min) - 1.0 / (1.0 + a_max);
    let independent_blocks = model.make_block_independent(partition)?;
    let upper = max_min_r_value(&independent_blocks, partition, lambda)?;
    Ok(Bounds { lower, upper })
}

/// Coefficient of a fully comonotone vector: `1/(1 + min lambda) - 1/(1 + max lambda)`.
///
/// Zero at unit weights. This is not a lower bound for other models once the weights differ
/// and the blocks have unequal extremal coefficients; [`bounds_r`] accounts for that.
pub fn fully_comonotone_r(lambda: &WeightVector) -> f64 {
    let lam = lambda.as_slice();
    let lo = lam.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lam.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    1.0 / (1.0 + lo) - 1.0 / (1.0 + hi)
}

/// Upper bound at unit weights written in the within-block extremal coefficients:
/// with `s_T = sum_{j in T} eps(I_j)`, `R = s_full/(1+s_full) - sum_T (-1)^{|T|+1} s_T/(1+s_T)`.
pub fn block_independent_upper_unit(model: &TailModel, partition: &Partition) -> Result<f64> {
    if partition.dimension() != model.dimension() {
        return Err(Error::input("partition and model dimensions differ"));
    }
    check_block_capacity(partition.len())?;
    let eps = partition
        .blocks()
        .iter()
        .map(|b| model.extremal_coefficient(b))
        .collect::<Result<Vec<_>>>()?;
    let full = partition.full_mask();
    let terms: Vec<f64> = (0..=full)
        .map(|mask| {
            let s: f64 = (0..eps.len())
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| eps[j])
                .sum();
            expected_max(s)
        })
        .collect();
    Ok(inclusion_exclusion_range(&terms, partition.len()))
}

/// Generalized madogram between two groups: half the two-block coefficient.
pub fn pairwise_madogram(
    model: &TailModel,
    partition: &Partition,
    lambda: &WeightVector,
) -> Result<f64> {
    if partition.len() != 2 {
        return Err(Error::input(format!(
            "madogram needs exactly two blocks, got {}",
            partition.len()
        )));
    }
    Ok(0.5 * max_min_r_value(model, partition, lambda)?)
}

/// Bivariate lambda-madogram: weights `(lambda, 1 - lambda)` on a two-component model.
pub fn lambda_madogram(model: &TailModel, lambda: f64) -> Result<f64> {
    if model.dimension() != 2 {
        return Err(Error::input(
            "the lambda-madogram is defined for two components",
        ));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::input(format!(
            "lambda must lie in (0, 1), got {lambda}"
        )));
    }
    let weights = WeightVector::new(vec![lambda, 1.0 - lambda])?;
    pairwise_madogram(model, &Partition::singletons(2)?, &weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tail_models::M4Params;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn blocks(d: usize, b: &[&[usize]]) -> Partition {
        Partition::from_one_based(d, &b.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn weighted_indicator_examples() {
        let p = blocks(3, &[&[1, 2], &[3]]);
        assert_eq!(
            weighted_indicator(&p, &WeightVector::ones(2), 0b01).unwrap(),
            vec![1.0, 1.0, 0.0]
        );
        let w = WeightVector::new(vec![2.0, 4.0]).unwrap();
        assert_eq!(
            weighted_indicator(&p, &w, 0b11).unwrap(),
            vec![0.5, 0.5, 0.25]
        );
        let s = Partition::singletons(2).unwrap();
        assert_eq!(
            weighted_indicator(&s, &WeightVector::ones(2), 0b11).unwrap(),
            vec![1.0, 1.0]
        );
        assert!(weighted_indicator(&p, &WeightVector::ones(2), 0).is_err());
        assert!(weighted_indicator(&p, &WeightVector::ones(2), 0b100).is_err());
        assert!(weighted_indicator(&p, &WeightVector::ones(3), 0b1).is_err());
    }

    #[test]
    fn e_term_examples() {
        let s2 = Partition::singletons(2).unwrap();
        let ones = WeightVector::ones(2);
        let c = TailModel::comonotone(2).unwrap();
        assert_eq!(e_term(&c, &s2, &ones, 0b01).unwrap(), 0.5);
        let ind = TailModel::independence(2).unwrap();
        assert!((e_term(&ind, &s2, &ones, 0b11).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let l = TailModel::logistic(2, 0.5).unwrap();
        let expected = SQRT2 / (1.0 + SQRT2);
        assert!((e_term(&l, &s2, &ones, 0b11).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.5857864).abs() < 1e-7);
    }

    #[test]
    fn max_min_r_examples() {
        let r = max_min_r_value(
            &TailModel::independence(2).unwrap(),
            &Partition::singletons(2).unwrap(),
            &WeightVector::ones(2),
        )
        .unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-15);

        let c = TailModel::comonotone(5).unwrap();
        let p = blocks(5, &[&[1, 4], &[2], &[3, 5]]);
        assert_eq!(
            max_min_r_value(&c, &p, &WeightVector::ones(3)).unwrap(),
            0.0
        );

        let l = TailModel::logistic(3, 0.5).unwrap();
        let r = max_min_r_value(
            &l,
            &Partition::singletons(3).unwrap(),
            &WeightVector::ones(3),
        )
        .unwrap();
        let expected = 1.5 - 3.0 / (1.0 + SQRT2);
        assert!((r - expected).abs() < 1e-12);
        assert!((expected - 0.2573593).abs() < 1e-7);

        let r = max_min_r_value(
            &TailModel::independence(4).unwrap(),
            &Partition::singletons(4).unwrap(),
            &WeightVector::ones(4),
        )
        .unwrap();
        assert!((r - 0.6).abs() < 1e-12);
    }

    #[test]
    fn report_lists_every_subset() {
        let l = TailModel::logistic(4, 0.7).unwrap();
        let p = blocks(4, &[&[1], &[2, 3], &[4]]);
        let rep = max_min_r(&l, &p, &WeightVector::ones(3)).unwrap();
        assert_eq!(rep.e_terms.len(), 7);
        assert_eq!(
            rep.e_terms.keys().copied().collect::<Vec<_>>(),
            (1..=7).collect::<Vec<_>>()
        );
        let mut terms = vec![0.0];
        terms.extend(rep.e_terms.values());
        assert_eq!(inclusion_exclusion_range(&terms, 3), rep.r);
        assert!(rep.lower <= rep.r && rep.r <= rep.upper);
        let json = serde_json::to_value(&rep).unwrap();
        for key in [
            "R",
            "e_terms",
            "lower",
            "upper",
            "model",
            "partition",
            "lambda",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn capacity_refused() {
        let d = 21;
        let m = TailModel::independence(d).unwrap();
        let p = Partition::singletons(d).unwrap();
        let err = max_min_r(&m, &p, &WeightVector::ones(d)).unwrap_err();
        assert!(err.is_capacity());
        assert!(max_min_r_unit(&m, &p).unwrap_err().is_capacity());
    }

    #[test]
    fn unit_route_examples() {
        let ind = TailModel::independence(3).unwrap();
        let r = max_min_r_unit(&ind, &Partition::singletons(3).unwrap()).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let c = TailModel::comonotone(4).unwrap();
        assert_eq!(
            max_min_r_unit(&c, &blocks(4, &[&[1, 2], &[3, 4]])).unwrap(),
            0.0
        );
        let l = TailModel::logistic(3, 0.5).unwrap();
        let p = blocks(3, &[&[1, 2], &[3]]);
        let a = max_min_r_unit(&l, &p).unwrap();
        let b = max_min_r_value(&l, &p, &WeightVector::ones(2)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let l = TailModel::logistic(5, 1.0).unwrap();
        let r = closed_form_r(
            &l,
            &Partition::singletons(5).unwrap(),
            &WeightVector::ones(5),
        )
        .unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-12);

        let near = TailModel::logistic(3, 0.01).unwrap();
        let r = closed_form_r(
            &near,
            &Partition::singletons(3).unwrap(),
            &WeightVector::ones(3),
        )
        .unwrap();
        assert!(r.abs() < 0.02, "{r}");

        let m4 = TailModel::m4(M4Params::from_rows(vec![vec![1.0; 4]]).unwrap());
        let r = closed_form_r(
            &m4,
            &blocks(4, &[&[1, 3], &[2], &[4]]),
            &WeightVector::ones(3),
        )
        .unwrap();
        assert!(r.abs() < 1e-15);

        let err = closed_form_r(
            &TailModel::comonotone(2).unwrap(),
            &Partition::singletons(2).unwrap(),
            &WeightVector::ones(2),
        );
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn closed_form_single_block_is_zero() {
        let l = TailModel::logistic(3, 0.4).unwrap();
        let p = blocks(3, &[&[1, 2, 3]]);
        let w = WeightVector::new(vec![2.5]).unwrap();
        assert_eq!(closed_form_r(&l, &p, &w).unwrap(), 0.0);
        assert!(max_min_r_value(&l, &p, &w).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bounds_examples() {
        let l = TailModel::logistic(3, 0.5).unwrap();
        let p = blocks(3, &[&[1, 2], &[3]]);
        let b = bounds_r(&l, &p, &WeightVector::ones(2)).unwrap();
        let s = 1.0 + SQRT2;
        let expected = s / (1.0 + s) - (SQRT2 / (1.0 + SQRT2) + 0.5 - s / (1.0 + s));
        assert!((b.upper - expected).abs() < 1e-12);
        assert!((expected - 0.3284).abs() < 1e-4);
        assert!((block_independent_upper_unit(&l, &p).unwrap() - b.upper).abs() < 1e-12);
        // block maxima with extremal coefficients sqrt(2) and 1
        assert!((b.lower - (SQRT2 / (1.0 + SQRT2) - 0.5)).abs() < 1e-15);

        for d in 2..=6 {
            let ind = TailModel::independence(d).unwrap();
            let s = Partition::singletons(d).unwrap();
            let b = bounds_r(&ind, &s, &WeightVector::ones(d)).unwrap();
            let r = max_min_r_value(&ind, &s, &WeightVector::ones(d)).unwrap();
            let target = (d as f64 - 1.0) / (d as f64 + 1.0);
            assert_eq!(b.lower, 0.0);
            assert!((b.upper - target).abs() < 1e-12);
            assert!((r - b.upper).abs() < 1e-12);
        }

        let c = TailModel::comonotone(5).unwrap();
        let p5 = blocks(5, &[&[1, 4], &[2], &[3, 5]]);
        assert_eq!(
            bounds_r(&c, &p5, &WeightVector::ones(3)).unwrap().lower,
            0.0
        );

        // singleton blocks: the lower bound is the fully comonotone coefficient
        let w = WeightVector::new(vec![0.5, 3.0]).unwrap();
        let s2 = Partition::singletons(2).unwrap();
        let b = bounds_r(&TailModel::logistic(2, 0.3).unwrap(), &s2, &w).unwrap();
        assert!((b.lower - (1.0 / 1.5 - 1.0 / 4.0)).abs() < 1e-15);
        assert_eq!(b.lower, fully_comonotone_r(&w));
    }

    #[test]
    fn fully_comonotone_matches_comonotone_model() {
        let c = TailModel::comonotone(4).unwrap();
        let p = blocks(4, &[&[1], &[2, 4], &[3]]);
        for w in [
            vec![1.0, 1.0, 1.0],
            vec![0.3, 2.0, 1.1],
            vec![4.0, 0.25, 0.25],
        ] {
            let w = WeightVector::new(w).unwrap();
            let r = max_min_r_value(&c, &p, &w).unwrap();
            assert!((r - fully_comonotone_r(&w)).abs() < 1e-14);
        }
    }

    #[test]
    fn madogram_examples() {
        let ind = TailModel::independence(2).unwrap();
        let s = Partition::singletons(2).unwrap();
        let half = WeightVector::new(vec![0.5, 0.5]).unwrap();
        let v = pairwise_madogram(&ind, &s, &half).unwrap();
        assert!((v - (0.8 - 1.5 / 2.25)).abs() < 1e-12);
        assert!((v - 0.133333).abs() < 1e-6);

        let c = TailModel::comonotone(2).unwrap();
        assert!(pairwise_madogram(&c, &s, &half).unwrap().abs() < 1e-15);

        let l = TailModel::logistic(4, 0.6).unwrap();
        let p = blocks(4, &[&[1, 2], &[3, 4]]);
        let eps = l.extremal_coefficient(&[0, 1, 2, 3]).unwrap();
        let v = pairwise_madogram(&l, &p, &WeightVector::ones(2)).unwrap();
        // with two blocks at unit weights the whole-vector coefficient is what matters
        let eps1 = l.extremal_coefficient(&[0, 1]).unwrap();
        let expected = 0.5 * (2.0 * eps / (1.0 + eps) - 2.0 * eps1 / (1.0 + eps1));
        assert!((v - expected).abs() < 1e-12);

        let s2 = TailModel::logistic(2, 0.6).unwrap();
        let eps = s2.extremal_coefficient(&[0, 1]).unwrap();
        let v = pairwise_madogram(&s2, &s, &WeightVector::ones(2)).unwrap();
        assert!((v - 0.5 * (eps - 1.0) / (eps + 1.0)).abs() < 1e-12);

        assert!(pairwise_madogram(
            &l,
            &Partition::singletons(4).unwrap(),
            &WeightVector::ones(4)
        )
        .is_err());
        assert!(lambda_madogram(&s2, 1.0).is_err());
    }

    #[test]
    fn restrict_terms_picks_sub_masks() {
        let terms: Vec<f64> = (0..8).map(|m| m as f64).collect();
        assert_eq!(restrict_terms(&terms, &[0, 2]), vec![0.0, 1.0, 4.0, 5.0]);
        assert_eq!(restrict_terms(&terms, &[2, 1]), vec![0.0, 4.0, 2.0, 6.0]);
    }
}
