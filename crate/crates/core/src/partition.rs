//! Block structure over the components `{1..d}` and the per-block weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subset enumeration refuses more blocks than this unless overridden.
pub const DEFAULT_MAX_BLOCKS: usize = 20;

/// Hard ceiling on the block count, whatever the override says.
pub const HARD_MAX_BLOCKS: usize = 30;

/// Environment variable that overrides [`DEFAULT_MAX_BLOCKS`].
pub const MAX_BLOCKS_ENV: &str = "EVDMM_MAX_P";

/// Current block-count cap, honouring `EVDMM_MAX_P` when it parses.
pub fn max_blocks() -> usize {
    std::env::var(MAX_BLOCKS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.clamp(1, HARD_MAX_BLOCKS))
        .unwrap_or(DEFAULT_MAX_BLOCKS)
}

pub(crate) fn check_block_capacity(p: usize) -> Result<()> {
    let cap = max_blocks();
    if p > cap {
        return Err(Error::Capacity(format!(
            "{p} blocks need 2^{p} subset terms; the limit is {cap} (set {MAX_BLOCKS_ENV} to raise it)"
        )));
    }
    Ok(())
}

/// Ordered, disjoint, non-empty blocks covering `{0..d}` (zero-based internally).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    dimension: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Builds a partition from zero-based blocks.
    pub fn new(dimension: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::input("partition dimension must be at least 1"));
        }
        if blocks.is_empty() {
            return Err(Error::input("partition needs at least one block"));
        }
        let mut block_of = vec![usize::MAX; dimension];
        for (j, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::input(format!("block {} is empty", j + 1)));
            }
            for &i in block {
                if i >= dimension {
                    return Err(Error::input(format!(
                        "component {} is outside 1..={dimension}",
                        i + 1
                    )));
                }
                if block_of[i] != usize::MAX {
                    return Err(Error::input(format!(
                        "component {} appears in more than one block",
                        i + 1
                    )));
                }
                block_of[i] = j;
            }
        }
        if let Some(i) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::input(format!(
                "component {} is not covered by any block",
                i + 1
            )));
        }
        Ok(Partition {
            dimension,
            blocks,
            block_of,
        })
    }

    /// Builds a partition from one-based blocks, as users write them.
    pub fn from_one_based(dimension: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let zero = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&i| {
                        i.checked_sub(1)
                            .ok_or_else(|| Error::input("component indices are 1-based"))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(dimension, zero)
    }

    /// One block per component.
    pub fn singletons(dimension: usize) -> Result<Self> {
        Partition::new(dimension, (0..dimension).map(|i| vec![i]).collect())
    }

    /// Parses `"i,j,...|k,..."`. Tokens are either all 1-based indices or all column names.
    pub fn parse(text: &str, dimension: usize, column_names: Option<&[String]>) -> Result<Self> {
        let groups: Vec<Vec<&str>> = text
            .split('|')
            .map(|g| g.split(',').map(str::trim).collect())
            .collect();
        if groups.iter().flatten().any(|t| t.is_empty()) {
            return Err(Error::input(format!(
                "malformed group specification {text:?}"
            )));
        }
        let numeric = |t: &str| t.parse::<usize>().is_ok();
        let all_numeric = groups.iter().flatten().all(|t| numeric(t));
        let any_numeric = groups.iter().flatten().any(|t| numeric(t));

        let blocks = if all_numeric {
            groups
                .iter()
                .map(|g| g.iter().map(|t| t.parse::<usize>().unwrap()).collect())
                .collect::<Vec<Vec<usize>>>()
        } else {
            let names = column_names.ok_or_else(|| {
                Error::input(format!(
                    "group specification {text:?} uses names but no column names are known"
                ))
            })?;
            // A name that happens to look numeric is fine as long as every token resolves by name.
            let by_name = |t: &str| names.iter().position(|n| n == t);
            if any_numeric && groups.iter().flatten().any(|t| by_name(t).is_none()) {
                return Err(Error::input(format!(
                    "group specification {text:?} mixes indices and column names"
                )));
            }
            groups
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|t| {
                            by_name(t)
                                .map(|i| i + 1)
                                .ok_or_else(|| Error::input(format!("unknown column name {t:?}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?
        };
        Partition::from_one_based(dimension, &blocks)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of blocks `p`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &[usize] {
        &self.blocks[j]
    }

    /// Index of the block containing component `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    /// Mask over blocks with every bit set.
    pub fn full_mask(&self) -> u64 {
        full_mask(self.len())
    }

    /// Components covered by the blocks selected in `mask`, sorted.
    pub fn union_of(&self, mask: u64) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.len())
            .filter(|j| mask >> j & 1 == 1)
            .flat_map(|j| self.blocks[j].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Blocks rendered one-based, for reports.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|i| i + 1).collect())
            .collect()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text: Vec<String> = self
            .to_one_based()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&text.join("|"))
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    dimension: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;

    fn try_from(r: PartitionRepr) -> Result<Self> {
        Partition::from_one_based(r.dimension, &r.blocks)
    }
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> Self {
        PartitionRepr {
            dimension: p.dimension,
            blocks: p.to_one_based(),
        }
    }
}

pub(crate) fn full_mask(p: usize) -> u64 {
    if p >= 64 {
        u64::MAX
    } else {
        (1u64 << p) - 1
    }
}

/// Strictly positive finite weights, one per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::input("weight vector is empty"));
        }
        if let Some(bad) = lambda.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::input(format!(
                "weights must be positive and finite, got {bad}"
            )));
        }
        Ok(WeightVector(lambda))
    }

    /// All weights equal to one.
    pub fn ones(p: usize) -> Self {
        WeightVector(vec![1.0; p])
    }

    /// Parses a comma-separated list such as `"1,0.5,2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::input(format!("weight {t:?} is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightVector::new(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&l| l == 1.0)
    }

    pub(crate) fn check_matches(&self, partition: &Partition) -> Result<()> {
        if self.len() != partition.len() {
            return Err(Error::input(format!(
                "{} weights given for {} blocks",
                self.len(),
                partition.len()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, j: usize) -> &f64 {
        &self.0[j]
    }
}
