#![allow(dead_code)]

use evdmm::{M4Params, Partition, TailModel, WeightVector};
use rand::seq::SliceRandom;
use rand::Rng;

/// Uniform random partition of `d` components into `p` non-empty blocks.
pub fn random_partition<R: Rng>(rng: &mut R, d: usize, p: usize) -> Partition {
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = order[..p].iter().map(|&i| vec![i]).collect();
    for &i in &order[p..] {
        let j = rng.gen_range(0..p);
        blocks[j].push(i);
    }
    Partition::new(d, blocks).unwrap()
}

pub fn random_partition_any<R: Rng>(rng: &mut R, d: usize) -> Partition {
    let p = rng.gen_range(1..=d);
    random_partition(rng, d, p)
}

pub fn random_weights<R: Rng>(rng: &mut R, p: usize, lo: f64, hi: f64) -> WeightVector {
    WeightVector::new((0..p).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

/// Theta drawn from (0, 1].
pub fn random_theta<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// M4 coefficients with a random sparsity pattern, normalized per component.
pub fn random_m4<R: Rng>(rng: &mut R, d: usize, signatures: usize) -> TailModel {
    let mut alpha: Vec<Vec<f64>> = (0..signatures)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        0.0
                    } else {
                        rng.gen::<f64>()
                    }
                })
                .collect()
        })
        .collect();
    for j in 0..d {
        if alpha.iter().all(|row| row[j] == 0.0) {
            alpha[0][j] = 1.0;
        }
        let total: f64 = alpha.iter().map(|row| row[j]).sum();
        alpha.iter_mut().for_each(|row| row[j] /= total);
    }
    TailModel::m4(M4Params::from_rows(alpha).unwrap())
}

/// A model from any family (block-independent built on a random base).
pub fn random_model<R: Rng>(rng: &mut R, d: usize) -> TailModel {
    match rng.gen_range(0..5) {
        0 => TailModel::logistic(d, random_theta(rng)).unwrap(),
        1 => {
            let s = rng.gen_range(1..6);
            random_m4(rng, d, s)
        }
        2 => TailModel::independence(d).unwrap(),
        3 => TailModel::comonotone(d).unwrap(),
        _ => {
            let base = TailModel::logistic(d, random_theta(rng)).unwrap();
            let p = random_partition_any(rng, d);
            base.make_block_independent(&p).unwrap()
        }
    }
}
