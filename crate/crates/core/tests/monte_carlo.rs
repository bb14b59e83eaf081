mod common;

use evdmm::{
    e_term, estimate_r, frechet_cdf, max_min_r_value, sample, Partition, SampleMatrix,
    SimulationSpec, TailModel, WeightVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 100_000;

fn draw(model: TailModel, n: usize, seed: u64) -> SampleMatrix {
    sample(&SimulationSpec::new(model, n, seed)).unwrap()
}

/// `1 / mean(1 / max(X_i, X_j))`: the componentwise maximum is Fréchet with scale eps.
fn empirical_pair_coefficient(m: &SampleMatrix, i: usize, j: usize) -> f64 {
    let s: f64 = m.iter_rows().map(|r| 1.0 / r[i].max(r[j])).sum();
    m.rows() as f64 / s
}

#[test]
fn independence_pair_coefficient() {
    let m = draw(TailModel::independence(2).unwrap(), N, 1);
    let eps = empirical_pair_coefficient(&m, 0, 1);
    assert!((1.97..=2.03).contains(&eps), "{eps}");
}

#[test]
fn logistic_pair_coefficient() {
    let m = draw(TailModel::logistic(2, 0.5).unwrap(), N, 2);
    let eps = empirical_pair_coefficient(&m, 0, 1);
    let target = std::f64::consts::SQRT_2;
    assert!((eps - target).abs() <= 0.03, "{eps}");
}

#[test]
fn m4_pair_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let model = common::random_m4(&mut rng, 3, 4);
    let m = draw(model.clone(), N, 3);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let eps = empirical_pair_coefficient(&m, i, j);
        let exact = model.extremal_coefficient(&[i, j]).unwrap();
        assert!(
            (eps - exact).abs() <= 0.03,
            "pair ({i},{j}): {eps} vs {exact}"
        );
    }
}

#[test]
fn margins_are_unit_frechet() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = Partition::from_one_based(4, &[vec![1, 3], vec![2, 4]]).unwrap();
    let models = [
        TailModel::independence(4).unwrap(),
        TailModel::comonotone(4).unwrap(),
        TailModel::logistic(4, 0.3).unwrap(),
        TailModel::logistic(4, 0.9).unwrap(),
        common::random_m4(&mut rng, 4, 3),
        TailModel::logistic(4, 0.4)
            .unwrap()
            .make_block_independent(&p)
            .unwrap(),
    ];
    for (s, model) in models.into_iter().enumerate() {
        let m = draw(model, N, 10 + s as u64);
        for j in 0..4 {
            let mean: f64 = m.column(j).iter().map(|&x| frechet_cdf(x)).sum::<f64>() / N as f64;
            assert!((mean - 0.5).abs() <= 0.005, "model {s} column {j}: {mean}");
        }
    }
}

#[test]
fn expected_weighted_maxima_match_tail_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = 4.0 / (N as f64).sqrt();
    for case in 0..8 {
        let d = rng.gen_range(2..=5);
        let theta = rng.gen_range(0.1..1.0);
        let model = TailModel::logistic(d, theta).unwrap();
        let p = Partition::singletons(d).unwrap();
        let w = common::random_weights(&mut rng, d, 0.2, 5.0);
        let m = draw(model.clone(), N, 100 + case);
        let mean: f64 = m
            .iter_rows()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| frechet_cdf(x).powf(w[j]))
                    .fold(0.0, f64::max)
            })
            .sum::<f64>()
            / N as f64;
        let exact = e_term(&model, &p, &w, p.full_mask()).unwrap();
        assert!(
            (mean - exact).abs() <= tol,
            "case {case}: {mean} vs {exact}"
        );
    }
}

#[test]
fn direct_range_matches_exact_coefficient() {
    // E[max - min] of the weighted block maxima using the true margins, no ranks involved
    let model = TailModel::logistic(4, 0.6).unwrap();
    let p = Partition::from_one_based(4, &[vec![1, 2], vec![3], vec![4]]).unwrap();
    let w = WeightVector::new(vec![0.7, 1.0, 2.5]).unwrap();
    let m = draw(model.clone(), N, 6);
    let mean: f64 = m
        .iter_rows()
        .map(|row| {
            let stats: Vec<f64> = p
                .blocks()
                .iter()
                .enumerate()
                .map(|(j, b)| {
                    b.iter()
                        .map(|&i| frechet_cdf(row[i]).powf(w[j]))
                        .fold(0.0, f64::max)
                })
                .collect();
            stats.iter().copied().fold(0.0, f64::max) - stats.iter().copied().fold(1.0, f64::min)
        })
        .sum::<f64>()
        / N as f64;
    let exact = max_min_r_value(&model, &p, &w).unwrap();
    assert!(
        (mean - exact).abs() <= 4.0 / (N as f64).sqrt(),
        "{mean} vs {exact}"
    );
}

#[test]
fn estimator_converges_on_logistic_data() {
    for (k, theta) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        for d in 2..=5 {
            let model = TailModel::logistic(d, theta).unwrap();
            let p = Partition::singletons(d).unwrap();
            let ones = WeightVector::ones(d);
            let exact = max_min_r_value(&model, &p, &ones).unwrap();
            let big = estimate_r(
                &draw(model.clone(), N, 1000 + 10 * k as u64 + d as u64),
                &p,
                &ones,
            )
            .unwrap();
            assert!(
                (big.r_hat - exact).abs() <= 0.01,
                "theta {theta} d {d}: {} vs {exact}",
                big.r_hat
            );

            let small_err: f64 = (0..5)
                .map(|s| {
                    let est = estimate_r(&draw(model.clone(), 200, 5000 + s), &p, &ones).unwrap();
                    (est.r_hat - exact).abs()
                })
                .sum::<f64>()
                / 5.0;
            assert!((big.r_hat - exact).abs() < small_err, "theta {theta} d {d}");
        }
    }
}

#[test]
fn estimator_respects_block_structure_and_weights() {
    let model = TailModel::logistic(5, 0.5).unwrap();
    let p = Partition::from_one_based(5, &[vec![1, 4], vec![2, 3], vec![5]]).unwrap();
    let w = WeightVector::new(vec![0.5, 1.5, 2.0]).unwrap();
    let exact = max_min_r_value(&model, &p, &w).unwrap();
    let est = estimate_r(&draw(model, N, 77), &p, &w).unwrap();
    assert!(
        (est.r_hat - exact).abs() <= 0.01,
        "{} vs {exact}",
        est.r_hat
    );
}

#[test]
fn comonotone_sample_estimates_zero() {
    let m = draw(TailModel::comonotone(4).unwrap(), 5000, 9);
    let p = Partition::from_one_based(4, &[vec![1], vec![2, 3], vec![4]]).unwrap();
    let est = estimate_r(&m, &p, &WeightVector::ones(3)).unwrap();
    assert_eq!(est.r_hat, 0.0);
}
