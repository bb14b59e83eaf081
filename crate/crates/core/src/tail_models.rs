//! Tail dependence functions of multivariate extreme value laws.
//!
//! A [`TailModel`] evaluates `l(x) = -log G(1/x_1, ..., 1/x_d)` for a law `G`
//! with unit Fréchet margins. Every family satisfies
//! `max_i x_i <= l(x) <= sum_i x_i` and is homogeneous of order one.
//! Evaluating `l` at the indicator vector of a subset gives the extremal
//! coefficient of that subvector.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Relative tolerance for the unit-margin check on M4 coefficients.
pub const M4_MARGIN_TOLERANCE: f64 = 1e-9;

/// Symmetric logistic dependence `l(x) = (sum x_j^(1/theta))^theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    theta: f64,
}

impl LogisticParams {
    /// `theta` must lie in `(0, 1]`; `theta = 1` is independence.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::input(format!(
                "logistic theta must lie in (0, 1], got {theta}"
            )));
        }
        Ok(LogisticParams { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Coefficients of a multivariate maxima of moving maxima law over a finite signature set.
///
/// `l(x) = sum_s max_j alpha[s][j] * x_j`. Each column of `alpha` sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct M4Params {
    signatures: Vec<String>,
    alpha: Vec<Vec<f64>>,
}

impl M4Params {
    /// `alpha[s][j]` is the coefficient of signature `s` on component `j` (zero-based).
    pub fn new(signatures: Vec<String>, alpha: Vec<Vec<f64>>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::input("M4 model needs at least one signature"));
        }
        if signatures.len() != alpha.len() {
            return Err(Error::input(
                "M4 signature labels and coefficient rows differ in count",
            ));
        }
        let d = alpha[0].len();
        if d == 0 {
            return Err(Error::input("M4 coefficient rows are empty"));
        }
        if alpha.iter().any(|row| row.len() != d) {
            return Err(Error::input("M4 coefficient rows have unequal lengths"));
        }
        for (s, row) in alpha.iter().enumerate() {
            if let Some(a) = row.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
                return Err(Error::input(format!(
                    "M4 coefficient {a} for signature {} is not a finite non-negative number",
                    signatures[s]
                )));
            }
        }
        for j in 0..d {
            let total: f64 = alpha.iter().map(|row| row[j]).sum();
            if (total - 1.0).abs() > M4_MARGIN_TOLERANCE {
                return Err(Error::input(format!(
                    "M4 coefficients for component {} sum to {total}, expected 1",
                    j + 1
                )));
            }
        }
        Ok(M4Params { signatures, alpha })
    }

    /// Unlabelled rows; signatures are named `1..=S`.
    pub fn from_rows(alpha: Vec<Vec<f64>>) -> Result<Self> {
        let signatures = (1..=alpha.len()).map(|s| s.to_string()).collect();
        M4Params::new(signatures, alpha)
    }

    /// Reads `signature_id,component_index,alpha` records (header required, 1-based components).
    ///
    /// Pairs that are not listed have coefficient zero. When `dimension` is `None`
    /// it is taken from the largest component index.
    pub fn from_csv_reader<R: Read>(reader: R, dimension: Option<usize>) -> Result<Self> {
        #[derive(Deserialize)]
        struct Record {
            signature_id: String,
            component_index: usize,
            alpha: f64,
        }

        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut order: Vec<String> = Vec::new();
        let mut entries: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut max_component = 0;
        for record in rdr.deserialize() {
            let r: Record = record?;
            if r.component_index == 0 {
                return Err(Error::input("component_index is 1-based"));
            }
            let s = match order.iter().position(|x| *x == r.signature_id) {
                Some(s) => s,
                None => {
                    order.push(r.signature_id.clone());
                    order.len() - 1
                }
            };
            if entries
                .insert((s, r.component_index - 1), r.alpha)
                .is_some()
            {
                return Err(Error::input(format!(
                    "duplicate coefficient for signature {} component {}",
                    r.signature_id, r.component_index
                )));
            }
            max_component = max_component.max(r.component_index);
        }
        let d = match dimension {
            Some(d) if d < max_component => {
                return Err(Error::input(format!(
                    "coefficient file references component {max_component} but dimension is {d}"
                )))
            }
            Some(d) => d,
            None => max_component,
        };
        let mut alpha = vec![vec![0.0; d]; order.len()];
        for ((s, j), a) in entries {
            alpha[s][j] = a;
        }
        M4Params::new(order, alpha)
    }

    pub fn from_csv_path(path: impl AsRef<Path>, dimension: Option<usize>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())?;
        M4Params::from_csv_reader(file, dimension)
    }

    pub fn dimension(&self) -> usize {
        self.alpha[0].len()
    }

    pub fn signatures(&self) -> &[String] {
        &self.signatures
    }

    pub fn alpha(&self) -> &[Vec<f64>] {
        &self.alpha
    }
}

/// Independent blocks, each distributed as the base model restricted to that block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockIndependentModel {
    base: TailModel,
    partition: Partition,
}

impl BlockIndependentModel {
    pub fn base(&self) -> &TailModel {
        &self.base
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Logistic(LogisticParams),
    M4(M4Params),
    Independence,
    Comonotone,
    BlockIndependent(Box<BlockIndependentModel>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Logistic(_) => "logistic",
            Family::M4(_) => "m4",
            Family::Independence => "independence",
            Family::Comonotone => "comonotone",
            Family::BlockIndependent(_) => "block_independent",
        }
    }
}

/// A tail dependence function together with its dimension. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TailModel {
    dimension: usize,
    family: Family,
}

impl TailModel {
    pub fn logistic(dimension: usize, theta: f64) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(TailModel {
            dimension,
            family: Family::Logistic(LogisticParams::new(theta)?),
        })
    }

    pub fn m4(params: M4Params) -> Self {
        TailModel {
            dimension: params.dimension(),
            family: Family::M4(params),
        }
    }

    pub fn independence(dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(TailModel {
            dimension,
            family: Family::Independence,
        })
    }

    pub fn comonotone(dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(TailModel {
            dimension,
            family: Family::Comonotone,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Evaluates `l(x)` after validating `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::input(format!(
                "point has {} coordinates, model dimension is {}",
                x.len(),
                self.dimension
            )));
        }
        for &v in x {
            if !v.is_finite() {
                return Err(Error::input(format!("coordinate {v} is not finite")));
            }
            if v < 0.0 {
                return Err(Error::input(format!("coordinate {v} is negative")));
            }
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation on a point already known to be finite, non-negative and of the right length.
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match &self.family {
            Family::Independence => x.iter().sum(),
            Family::Comonotone => x.iter().copied().fold(0.0, f64::max),
            Family::Logistic(params) => logistic_l(params.theta, x),
            Family::M4(params) => params
                .alpha
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, v)| a * v).fold(0.0, f64::max))
                .sum(),
            Family::BlockIndependent(bi) => {
                let mut masked = vec![0.0; self.dimension];
                bi.partition
                    .blocks()
                    .iter()
                    .map(|block| {
                        masked.iter_mut().for_each(|v| *v = 0.0);
                        for &i in block {
                            masked[i] = x[i];
                        }
                        bi.base.eval_unchecked(&masked)
                    })
                    .sum()
            }
        }
    }

    /// Extremal coefficient of the subvector indexed by `subset` (zero-based components).
    pub fn extremal_coefficient(&self, subset: &[usize]) -> Result<f64> {
        if subset.is_empty() {
            return Err(Error::input(
                "extremal coefficient needs a non-empty subset",
            ));
        }
        let mut x = vec![0.0; self.dimension];
        for &i in subset {
            if i >= self.dimension {
                return Err(Error::input(format!(
                    "component {} is outside 1..={}",
                    i + 1,
                    self.dimension
                )));
            }
            x[i] = 1.0;
        }
        Ok(self.eval_unchecked(&x))
    }

    /// The model in which the blocks of `partition` are mutually independent and each
    /// block keeps the base model's joint law.
    pub fn make_block_independent(&self, partition: &Partition) -> Result<TailModel> {
        if partition.dimension() != self.dimension {
            return Err(Error::input(format!(
                "partition covers {} components, model dimension is {}",
                partition.dimension(),
                self.dimension
            )));
        }
        Ok(TailModel {
            dimension: self.dimension,
            family: Family::BlockIndependent(Box::new(BlockIndependentModel {
                base: self.clone(),
                partition: partition.clone(),
            })),
        })
    }

    /// Law of the subvector with the given (zero-based, distinct) components, in that order.
    pub fn marginal(&self, components: &[usize]) -> Result<TailModel> {
        if components.is_empty() {
            return Err(Error::input("marginal needs at least one component"));
        }
        let mut seen = vec![false; self.dimension];
        for &i in components {
            if i >= self.dimension || std::mem::replace(&mut seen[i], true) {
                return Err(Error::input(format!(
                    "invalid or repeated component {}",
                    i + 1
                )));
            }
        }
        let k = components.len();
        let family = match &self.family {
            Family::Logistic(p) => Family::Logistic(*p),
            Family::Independence => Family::Independence,
            Family::Comonotone => Family::Comonotone,
            Family::M4(params) => {
                let alpha = params
                    .alpha
                    .iter()
                    .map(|row| components.iter().map(|&i| row[i]).collect())
                    .collect();
                Family::M4(M4Params::new(params.signatures.clone(), alpha)?)
            }
            Family::BlockIndependent(bi) => {
                let position = |i: usize| components.iter().position(|&c| c == i);
                let blocks: Vec<Vec<usize>> = bi
                    .partition
                    .blocks()
                    .iter()
                    .map(|b| b.iter().filter_map(|&i| position(i)).collect::<Vec<_>>())
                    .filter(|b: &Vec<usize>| !b.is_empty())
                    .collect();
                let partition = Partition::new(k, blocks)?;
                let base = bi.base.marginal(components)?;
                Family::BlockIndependent(Box::new(BlockIndependentModel { base, partition }))
            }
        };
        Ok(TailModel {
            dimension: k,
            family,
        })
    }

    /// JSON descriptor `{family, dimension, parameters}`.
    pub fn descriptor(&self) -> ModelDescriptor {
        let parameters = match &self.family {
            Family::Logistic(p) => json!({ "theta": p.theta }),
            Family::M4(p) => json!({ "signatures": p.signatures, "alpha": p.alpha }),
            Family::Independence | Family::Comonotone => json!({}),
            Family::BlockIndependent(bi) => json!({
                "base": bi.base.descriptor(),
                "blocks": bi.partition.to_one_based(),
            }),
        };
        ModelDescriptor {
            family: self.family.name().to_string(),
            dimension: self.dimension,
            parameters,
        }
    }

    pub fn from_descriptor(desc: &ModelDescriptor) -> Result<Self> {
        let d = desc.dimension;
        let field = |name: &str| {
            desc.parameters.get(name).ok_or_else(|| {
                Error::input(format!(
                    "{} descriptor lacks parameter {name:?}",
                    desc.family
                ))
            })
        };
        let model = match desc.family.as_str() {
            "logistic" => {
                let theta = field("theta")?
                    .as_f64()
                    .ok_or_else(|| Error::input("theta must be a number"))?;
                TailModel::logistic(d, theta)?
            }
            "m4" => {
                let alpha: Vec<Vec<f64>> = serde_json::from_value(field("alpha")?.clone())?;
                let params = match desc.parameters.get("signatures") {
                    Some(s) => M4Params::new(serde_json::from_value(s.clone())?, alpha)?,
                    None => M4Params::from_rows(alpha)?,
                };
                TailModel::m4(params)
            }
            "independence" => TailModel::independence(d)?,
            "comonotone" => TailModel::comonotone(d)?,
            "block_independent" => {
                let base: ModelDescriptor = serde_json::from_value(field("base")?.clone())?;
                let blocks: Vec<Vec<usize>> = serde_json::from_value(field("blocks")?.clone())?;
                let base = TailModel::from_descriptor(&base)?;
                base.make_block_independent(&Partition::from_one_based(base.dimension, &blocks)?)?
            }
            other => return Err(Error::input(format!("unknown model family {other:?}"))),
        };
        if model.dimension != d {
            return Err(Error::input(format!(
                "descriptor dimension {d} does not match the parameters (dimension {})",
                model.dimension
            )));
        }
        Ok(model)
    }
}

/// Serializable model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub family: String,
    pub dimension: usize,
    pub parameters: Value,
}

fn check_dimension(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::input("model dimension must be at least 1"));
    }
    Ok(())
}

/// Max-factored logistic evaluation; zero coordinates contribute nothing.
fn logistic_l(theta: f64, x: &[f64]) -> f64 {
    let x_max = x.iter().copied().fold(0.0, f64::max);
    if x_max == 0.0 {
        return 0.0;
    }
    if theta == 1.0 {
        return x.iter().sum();
    }
    let inv = 1.0 / theta;
    let s: f64 = x
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| (v / x_max).powf(inv))
        .sum();
    x_max * s.powf(theta)
}
