use std::fmt;
use std::fs;
use std::path::Path;

use statrs::distribution::{ContinuousCDF, Normal};

use super::EvalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    AcceptH0,
    RejectH0,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::AcceptH0 => "accept_h0",
            Decision::RejectH0 => "reject_h0",
        })
    }
}

/// Upper one-tailed test of H0: mean_a <= mean_b against Ha: mean_a > mean_b.
#[derive(Clone, Debug, PartialEq)]
pub struct ZTestResult {
    pub z_obs: f64,
    pub z_crit: f64,
    pub alpha: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    /// Bessel-corrected sample variances.
    pub var_a: f64,
    pub var_b: f64,
    pub n_a: usize,
    pub n_b: usize,
    /// Both variances were zero with unequal means, so `z_obs` is infinite.
    pub degenerate_variance: bool,
    pub decision: Decision,
}

/// `z` such that `P(Z > z) = alpha` for a standard normal `Z`.
pub fn standard_normal_upper_quantile(alpha: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - alpha)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sample Z statistic on fold accuracies:
/// `(mean_a - mean_b) / sqrt(var_a / n_a + var_b / n_b)`.
pub fn ztest(a: &[f64], b: &[f64], alpha: f64) -> Result<ZTestResult, EvalError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(EvalError::InvalidAlpha(alpha));
    }
    let shortest = a.len().min(b.len());
    if shortest < 2 {
        return Err(EvalError::InsufficientSamples(shortest));
    }
    let (mean_a, var_a) = mean_var(a);
    let (mean_b, var_b) = mean_var(b);
    let se2 = var_a / a.len() as f64 + var_b / b.len() as f64;
    let diff = mean_a - mean_b;
    let (z_obs, degenerate_variance) = if se2 > 0.0 {
        (diff / se2.sqrt(), false)
    } else if diff == 0.0 {
        (0.0, false)
    } else {
        (diff.signum() * f64::INFINITY, true)
    };
    let z_crit = standard_normal_upper_quantile(alpha);
    let decision = if z_obs > z_crit {
        Decision::RejectH0
    } else {
        Decision::AcceptH0
    };
    Ok(ZTestResult {
        z_obs,
        z_crit,
        alpha,
        mean_a,
        mean_b,
        var_a,
        var_b,
        n_a: a.len(),
        n_b: b.len(),
        degenerate_variance,
        decision,
    })
}

/// One accuracy (percent) per line; blank lines and `#` comments are ignored.
pub fn read_accuracy_list(path: &Path) -> Result<Vec<f64>, EvalError> {
    let text = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| EvalError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("not a number: {line:?}"),
        })?;
        if !v.is_finite() {
            return Err(EvalError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("not finite: {line:?}"),
            });
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALEXNET: [f64; 5] = [93.0, 97.0, 98.0, 93.0, 96.0];
    const RESNET18: [f64; 5] = [95.0, 97.0, 98.0, 95.0, 97.0];
    const SQUEEZENET: [f64; 5] = [96.0, 98.0, 98.0, 97.0, 99.0];

    #[test]
    fn critical_value_at_five_percent() {
        assert!((standard_normal_upper_quantile(0.05) - 1.6449).abs() < 1e-4);
        assert!((standard_normal_upper_quantile(0.01) - 2.3263).abs() < 1e-4);
    }

    #[test]
    fn alexnet_vs_resnet() {
        let r = ztest(&ALEXNET, &RESNET18, 0.05).unwrap();
        assert!((r.mean_a - 95.4).abs() < 1e-9);
        assert!((r.mean_b - 96.4).abs() < 1e-9);
        assert!((r.var_a - 5.3).abs() < 1e-9);
        assert!((r.var_b - 1.8).abs() < 1e-9);
        // -1 / sqrt(5.3/5 + 1.8/5) = -1 / sqrt(1.42)
        assert!((r.z_obs - (-1.0 / 1.42f64.sqrt())).abs() < 1e-12);
        assert!((r.z_obs + 0.839).abs() < 0.01);
        assert_eq!(r.decision, Decision::AcceptH0);
    }

    #[test]
    fn resnet_vs_squeezenet() {
        let r = ztest(&RESNET18, &SQUEEZENET, 0.05).unwrap();
        assert!((r.var_b - 1.3).abs() < 1e-9);
        assert!((r.z_obs - (-1.2 / 0.62f64.sqrt())).abs() < 1e-12);
        assert!((r.z_obs + 1.524).abs() < 0.01);
        assert_eq!(r.decision, Decision::AcceptH0);
    }

    #[test]
    fn identical_lists() {
        let r = ztest(&ALEXNET, &ALEXNET, 0.05).unwrap();
        assert_eq!(r.z_obs, 0.0);
        assert_eq!(r.decision, Decision::AcceptH0);
    }

    #[test]
    fn clear_improvement_rejects() {
        let r = ztest(&[99.0, 98.5, 99.5, 99.0], &[80.0, 81.0, 79.0, 80.5], 0.05).unwrap();
        assert!(r.z_obs > r.z_crit);
        assert_eq!(r.decision, Decision::RejectH0);
    }

    #[test]
    fn zero_variance_cases() {
        let r = ztest(&[90.0, 90.0], &[90.0, 90.0, 90.0], 0.05).unwrap();
        assert_eq!(r.z_obs, 0.0);
        assert!(!r.degenerate_variance);

        let r = ztest(&[91.0, 91.0], &[90.0, 90.0], 0.05).unwrap();
        assert_eq!(r.z_obs, f64::INFINITY);
        assert!(r.degenerate_variance);
        assert_eq!(r.decision, Decision::RejectH0);

        let r = ztest(&[90.0, 90.0], &[91.0, 91.0], 0.05).unwrap();
        assert_eq!(r.z_obs, f64::NEG_INFINITY);
        assert_eq!(r.decision, Decision::AcceptH0);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            ztest(&[1.0], &[1.0, 2.0], 0.05),
            Err(EvalError::InsufficientSamples(1))
        ));
        for alpha in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                ztest(&ALEXNET, &RESNET18, alpha),
                Err(EvalError::InvalidAlpha(_))
            ));
        }
    }

    #[test]
    fn accuracy_file_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        fs::write(&path, "# AlexNet\n93.00\n97\n\n 98.0 \n93\n96\n").unwrap();
        assert_eq!(read_accuracy_list(&path).unwrap(), ALEXNET.to_vec());
        fs::write(&path, "93\nabc\n").unwrap();
        assert!(matches!(
            read_accuracy_list(&path),
            Err(EvalError::Parse { line: 2, .. })
        ));
    }
}
