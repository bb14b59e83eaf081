//! Max-min dependence coefficients for multivariate extreme value distributions.
//!
//! For a random vector with unit Fréchet margins, a partition of its components into
//! blocks and positive block weights `lambda`, the max-min coefficient is the expected
//! range of the weighted, uniform-transformed block maxima. It is zero when all
//! components are totally dependent (at unit weights) and `(d-1)/(d+1)` for `d`
//! independent singletons.
//!
//! - [`tail_models`]: tail dependence functions and extremal coefficients;
//! - [`coefficients`]: exact coefficients, closed forms, bounds and madograms;
//! - [`simulate`]: seedable samplers used as Monte Carlo checks;
//! - [`estimate`]: rank-based estimation from data and block-maxima preprocessing.

pub mod coefficients;
pub mod data;
pub mod error;
pub mod estimate;
pub mod partition;
pub mod simulate;
mod summation;
pub mod table1;
pub mod tail_models;

pub use coefficients::{
    block_independent_upper_unit, bounds_r, closed_form_r, e_term, fully_comonotone_r,
    lambda_madogram, max_min_r, max_min_r_unit, max_min_r_value, pairwise_madogram,
    weighted_indicator, Bounds, CoefficientReport,
};
pub use data::{MatrixKind, SampleMatrix};
pub use error::{Error, Result};
pub use estimate::{estimate_r, m_bar, rank_transform, EstimateReport};
pub use partition::{Partition, WeightVector};
pub use simulate::{frechet_cdf, frechet_quantile, sample, SimulationSpec};
pub use tail_models::{Family, M4Params, ModelDescriptor, TailModel};
