//! Poisson variates from the pinned generator.
//!
//! Small means use sequential-search inversion (one uniform per draw). From
//! `PTRS_THRESHOLD` upward, where `exp(-lambda)` starts losing precision and
//! inversion gets slow, Hormann's transformed rejection with squeeze (PTRS)
//! takes over.

use statrs::function::gamma::ln_gamma;

use crate::rng::DeterministicRng;

const PTRS_THRESHOLD: f64 = 10.0;

/// Draw `k` with probability `exp(-lambda) lambda^k / k!`.
///
/// `lambda` must be finite and non-negative; zero always yields zero.
pub fn poisson_sample(lambda: f64, rng: &mut DeterministicRng) -> u64 {
    debug_assert!(lambda.is_finite() && lambda >= 0.0);
    if lambda <= 0.0 {
        0
    } else if lambda < PTRS_THRESHOLD {
        inversion(lambda, rng)
    } else {
        ptrs(lambda, rng)
    }
}

fn inversion(lambda: f64, rng: &mut DeterministicRng) -> u64 {
    let u = rng.next_f64();
    let mut k = 0u64;
    let mut p = (-lambda).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= lambda / k as f64;
        if p == 0.0 {
            break;
        }
        cdf += p;
    }
    k
}

fn ptrs(lambda: f64, rng: &mut DeterministicRng) -> u64 {
    let slam = lambda.sqrt();
    let loglam = lambda.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);

    loop {
        let u = rng.next_f64() - 0.5;
        let v = rng.next_f64();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        // v == 0 gives ln(0) = -inf, which always accepts; that matches the
        // limit of the acceptance test.
        if v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln()
            <= -lambda + k * loglam - ln_gamma(k + 1.0)
        {
            return k as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(lambda: f64, n: usize, seed: u64) -> (f64, f64) {
        let mut rng = DeterministicRng::from_seed(seed);
        let xs: Vec<f64> = (0..n)
            .map(|_| poisson_sample(lambda, &mut rng) as f64)
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        (mean, var)
    }

    /// Pearson statistic against the analytic pmf, tail lumped into one cell.
    fn chi_square(lambda: f64, n: usize, seed: u64, cells: usize) -> f64 {
        let mut rng = DeterministicRng::from_seed(seed);
        let mut observed = vec![0usize; cells + 1];
        for _ in 0..n {
            let k = poisson_sample(lambda, &mut rng) as usize;
            observed[k.min(cells)] += 1;
        }
        let mut pmf = Vec::with_capacity(cells + 1);
        let mut p = (-lambda).exp();
        for k in 0..cells {
            if k > 0 {
                p *= lambda / k as f64;
            }
            pmf.push(p);
        }
        pmf.push(1.0 - pmf.iter().sum::<f64>());
        observed
            .iter()
            .zip(&pmf)
            .map(|(&o, &p)| {
                let e = p * n as f64;
                (o as f64 - e).powi(2) / e
            })
            .sum()
    }

    #[test]
    fn zero_lambda_is_zero() {
        let mut rng = DeterministicRng::from_seed(1);
        for _ in 0..100 {
            assert_eq!(poisson_sample(0.0, &mut rng), 0);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let mut a = DeterministicRng::from_seed(11);
        let mut b = DeterministicRng::from_seed(11);
        for lambda in [0.5, 8.0, 40.0] {
            for _ in 0..1000 {
                assert_eq!(
                    poisson_sample(lambda, &mut a),
                    poisson_sample(lambda, &mut b)
                );
            }
        }
    }

    #[test]
    fn moments_small_lambda() {
        let (mean, var) = moments(3.5, 200_000, 5);
        assert!((mean - 3.5).abs() < 0.02, "mean {mean}");
        assert!((var - 3.5).abs() < 0.06, "var {var}");
    }

    #[test]
    fn moments_large_lambda() {
        for (lambda, tol) in [(10.0, 0.05), (30.0, 0.08), (250.0, 0.25)] {
            let (mean, var) = moments(lambda, 200_000, 6);
            assert!((mean - lambda).abs() < tol, "lambda {lambda}: mean {mean}");
            assert!(
                (var - lambda).abs() < lambda * 0.02,
                "lambda {lambda}: var {var}"
            );
        }
    }

    // 99.9% points of chi-square: 16 dof -> 39.25, 40 dof -> 73.40.
    #[test]
    fn pmf_shape_inversion() {
        let stat = chi_square(4.0, 200_000, 21, 16);
        assert!(stat < 39.25, "chi2 {stat}");
    }

    #[test]
    fn pmf_shape_ptrs() {
        // Cells 0..40 hold essentially all of the Poisson(20) mass.
        let stat = chi_square(20.0, 200_000, 22, 40);
        assert!(stat < 73.40, "chi2 {stat}");
    }
}
