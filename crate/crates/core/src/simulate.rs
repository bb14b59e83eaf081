//! Seedable samplers for extreme value vectors with unit Fréchet margins.
//!
//! Random numbers come from ChaCha20 (`rand_chacha` 0.3). Rows are generated in shards of
//! [`SHARD_ROWS`]; shard `k` uses the generator seeded with `seed` and switched to stream
//! `k`, so the output does not depend on how many threads run the shards.
//!
//! Samplers:
//! - independence: iid unit Fréchet components;
//! - comonotone: one unit Fréchet draw repeated in every component;
//! - logistic: `X_j = (S / E_j)^theta` with `E_j` iid unit exponential and `S` positive
//!   stable with Laplace transform `exp(-t^theta)`, drawn by Kanter's representation;
//! - M4: `X_j = max_s alpha[s][j] Z_s` with iid unit Fréchet `Z_s`;
//! - block-independent: each block filled from an independent draw of the base model.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::data::{MatrixKind, SampleMatrix};
use crate::error::{Error, Result};
use crate::tail_models::{Family, TailModel};

/// Rows per independently seeded shard.
pub const SHARD_ROWS: usize = 4096;

/// Default ceiling on `n * d`.
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 27;

/// Unit Fréchet distribution function `exp(-1/x)`.
pub fn frechet_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Inverse of [`frechet_cdf`]: `-1 / log(u)`.
pub fn frechet_quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::input(format!(
            "probability must lie in (0, 1), got {u}"
        )));
    }
    Ok(-1.0 / u.ln())
}

#[derive(Debug, Clone)]
pub struct SimulationSpec {
    pub model: TailModel,
    pub sample_count: usize,
    pub seed: u64,
    pub max_entries: usize,
}

impl SimulationSpec {
    pub fn new(model: TailModel, sample_count: usize, seed: u64) -> Self {
        SimulationSpec {
            model,
            sample_count,
            seed,
            max_entries: DEFAULT_MAX_ENTRIES,
        }
    }
}

/// Draws `sample_count` independent rows from the model's law.
pub fn sample(spec: &SimulationSpec) -> Result<SampleMatrix> {
    let n = spec.sample_count;
    let d = spec.model.dimension();
    if n == 0 {
        return Err(Error::input("sample count must be at least 1"));
    }
    match n.checked_mul(d) {
        Some(entries) if entries <= spec.max_entries => {}
        _ => {
            return Err(Error::Capacity(format!(
                "{n} x {d} samples exceed the limit of {} entries",
                spec.max_entries
            )))
        }
    }

    let mut values = vec![0.0; n * d];
    values
        .par_chunks_mut(SHARD_ROWS * d)
        .enumerate()
        .for_each(|(shard, chunk)| {
            let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
            rng.set_stream(shard as u64);
            let mut scratch = Vec::new();
            for row in chunk.chunks_exact_mut(d) {
                draw_row(&spec.model, &mut rng, row, &mut scratch);
            }
        });
    let names = (1..=d).map(|j| format!("X{j}")).collect();
    Ok(SampleMatrix::with_kind(values, names, MatrixKind::Raw))
}

fn open01<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

fn unit_exponential<R: Rng>(rng: &mut R) -> f64 {
    -open01(rng).ln()
}

fn unit_frechet<R: Rng>(rng: &mut R) -> f64 {
    1.0 / unit_exponential(rng)
}

/// `log S` for `S` positive stable with `E exp(-tS) = exp(-t^alpha)`, `0 < alpha < 1`.
fn log_positive_stable<R: Rng>(alpha: f64, rng: &mut R) -> f64 {
    let u = std::f64::consts::PI * open01(rng);
    let e = unit_exponential(rng);
    (alpha * u).sin().ln() - u.sin().ln() / alpha
        + (1.0 - alpha) / alpha * (((1.0 - alpha) * u).sin().ln() - e.ln())
}

fn draw_row<R: Rng>(model: &TailModel, rng: &mut R, out: &mut [f64], scratch: &mut Vec<f64>) {
    match model.family() {
        Family::Independence => out.iter_mut().for_each(|x| *x = unit_frechet(rng)),
        Family::Comonotone => {
            let z = unit_frechet(rng);
            out.iter_mut().for_each(|x| *x = z);
        }
        Family::Logistic(params) => {
            let theta = params.theta();
            if theta == 1.0 {
                out.iter_mut().for_each(|x| *x = unit_frechet(rng));
            } else {
                let log_s = log_positive_stable(theta, rng);
                out.iter_mut()
                    .for_each(|x| *x = (theta * (log_s - unit_exponential(rng).ln())).exp());
            }
        }
        Family::M4(params) => {
            out.iter_mut().for_each(|x| *x = 0.0);
            for row in params.alpha() {
                let z = unit_frechet(rng);
                for (x, a) in out.iter_mut().zip(row) {
                    *x = x.max(a * z);
                }
            }
        }
        Family::BlockIndependent(bi) => {
            let mut inner = Vec::new();
            scratch.resize(out.len(), 0.0);
            for block in bi.partition().blocks() {
                draw_row(bi.base(), rng, scratch, &mut inner);
                for &i in block {
                    out[i] = scratch[i];
                }
            }
        }
    }
}
