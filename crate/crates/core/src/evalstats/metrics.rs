use std::fmt;

use super::{ConfusionMatrix, EvalError};
use crate::dataset::ClassLabel;

/// Per-class indices in percent. A metric whose denominator is zero (class
/// never predicted, or never present) is reported as 0 and flagged.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassMetrics {
    pub class: ClassLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

/// Accuracy plus macro-averaged precision, recall and F1, all in percent.
/// Values are kept at full precision; `Display` rounds to two decimals.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_class: Vec<ClassMetrics>,
}

impl MetricsReport {
    /// True when some class had an empty predicted or true column.
    pub fn has_degenerate_class(&self) -> bool {
        self.per_class
            .iter()
            .any(|c| c.precision_undefined || c.recall_undefined)
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "accuracy {:.2}  precision {:.2}  recall {:.2}  f1 {:.2}",
            self.accuracy, self.precision, self.recall, self.f1
        )
    }
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport, EvalError> {
    let total = cm.total();
    if total == 0 {
        return Err(EvalError::EmptyInput);
    }
    let per_class: Vec<ClassMetrics> = cm
        .classes()
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let tp = cm.counts()[i][i];
            let (p, precision_undefined) = ratio(tp, cm.col_sum(i));
            let (r, recall_undefined) = ratio(tp, cm.row_sum(i));
            let f1 = if p + r > 0.0 {
                2.0 * p * r / (p + r)
            } else {
                0.0
            };
            ClassMetrics {
                class: class.clone(),
                precision: 100.0 * p,
                recall: 100.0 * r,
                f1: 100.0 * f1,
                precision_undefined,
                recall_undefined,
            }
        })
        .collect();
    let n = per_class.len() as f64;
    let mean = |g: fn(&ClassMetrics) -> f64| per_class.iter().map(g).sum::<f64>() / n;
    Ok(MetricsReport {
        accuracy: 100.0 * cm.trace() as f64 / total as f64,
        precision: mean(|c| c.precision),
        recall: mean(|c| c.recall),
        f1: mean(|c| c.f1),
        per_class,
    })
}

/// Field-wise mean of per-fold reports. Degeneracy flags are OR-ed.
pub fn aggregate_folds(reports: &[MetricsReport]) -> Result<MetricsReport, EvalError> {
    let first = reports.first().ok_or(EvalError::EmptyInput)?;
    let classes: Vec<&ClassLabel> = first.per_class.iter().map(|c| &c.class).collect();
    for r in reports {
        if r.per_class.len() != classes.len()
            || r.per_class
                .iter()
                .zip(&classes)
                .any(|(c, k)| &c.class != *k)
        {
            return Err(EvalError::ClassMismatch);
        }
    }
    let n = reports.len() as f64;
    let mean = |g: &dyn Fn(&MetricsReport) -> f64| reports.iter().map(g).sum::<f64>() / n;
    let per_class = (0..classes.len())
        .map(|i| ClassMetrics {
            class: classes[i].clone(),
            precision: mean(&|r| r.per_class[i].precision),
            recall: mean(&|r| r.per_class[i].recall),
            f1: mean(&|r| r.per_class[i].f1),
            precision_undefined: reports.iter().any(|r| r.per_class[i].precision_undefined),
            recall_undefined: reports.iter().any(|r| r.per_class[i].recall_undefined),
        })
        .collect();
    Ok(MetricsReport {
        accuracy: mean(&|r| r.accuracy),
        precision: mean(&|r| r.precision),
        recall: mean(&|r| r.recall),
        f1: mean(&|r| r.f1),
        per_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(names: &[&str], counts: Vec<Vec<u64>>) -> ConfusionMatrix {
        let classes = names.iter().map(|n| ClassLabel::new(*n).unwrap()).collect();
        ConfusionMatrix::from_counts(classes, counts).unwrap()
    }

    fn accuracy_only(acc: f64) -> MetricsReport {
        MetricsReport {
            accuracy: acc,
            precision: acc,
            recall: acc,
            f1: acc,
            per_class: vec![],
        }
    }

    #[test]
    fn perfect_diagonal() {
        let m = metrics(&cm(
            &["BitTorrent", "DNS", "VoIP", "IoT"],
            vec![
                vec![12, 0, 0, 0],
                vec![0, 14, 0, 0],
                vec![0, 0, 13, 0],
                vec![0, 0, 0, 18],
            ],
        ))
        .unwrap();
        assert_eq!(
            m.to_string(),
            "accuracy 100.00  precision 100.00  recall 100.00  f1 100.00"
        );
        assert!(!m.has_degenerate_class());
    }

    #[test]
    fn two_by_two_hand_computed() {
        let m = metrics(&cm(&["A", "B"], vec![vec![1, 1], vec![0, 1]])).unwrap();
        assert!((m.accuracy - 200.0 / 3.0).abs() < 1e-12);
        assert!((m.per_class[0].precision - 100.0).abs() < 1e-12);
        assert!((m.per_class[1].precision - 50.0).abs() < 1e-12);
        assert!((m.per_class[0].recall - 50.0).abs() < 1e-12);
        assert!((m.per_class[1].recall - 100.0).abs() < 1e-12);
        assert!((m.precision - 75.0).abs() < 1e-12);
        assert!((m.recall - 75.0).abs() < 1e-12);
        assert!((m.f1 - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(format!("{:.2}", m.accuracy), "66.67");
    }

    #[test]
    fn empty_predicted_column_is_zero_and_flagged() {
        let m = metrics(&cm(&["A", "B"], vec![vec![3, 0], vec![2, 0]])).unwrap();
        assert_eq!(m.per_class[1].precision, 0.0);
        assert!(m.per_class[1].precision_undefined);
        assert!(!m.per_class[1].recall_undefined);
        assert_eq!(m.per_class[1].f1, 0.0);
        assert!(m.has_degenerate_class());
    }

    #[test]
    fn zero_total_rejected() {
        assert!(matches!(
            metrics(&cm(&["A"], vec![vec![0]])),
            Err(EvalError::EmptyInput)
        ));
    }

    #[test]
    fn fold_means_from_table_four() {
        for (folds, expected) in [
            ([93.0, 97.0, 98.0, 93.0, 96.0], "95.40"),
            ([95.0, 97.0, 98.0, 95.0, 97.0], "96.40"),
            ([96.0, 98.0, 98.0, 97.0, 99.0], "97.60"),
        ] {
            let reports: Vec<_> = folds.iter().map(|&a| accuracy_only(a)).collect();
            let agg = aggregate_folds(&reports).unwrap();
            assert_eq!(format!("{:.2}", agg.accuracy), expected);
        }
    }

    #[test]
    fn aggregate_identical_is_identity() {
        let m = metrics(&cm(&["A", "B"], vec![vec![4, 1], vec![2, 5]])).unwrap();
        let agg = aggregate_folds(&vec![m.clone(); 5]).unwrap();
        assert!((agg.accuracy - m.accuracy).abs() < 1e-12);
        assert!((agg.f1 - m.f1).abs() < 1e-12);
        assert!((agg.per_class[1].recall - m.per_class[1].recall).abs() < 1e-12);
    }

    #[test]
    fn aggregate_errors() {
        assert!(matches!(aggregate_folds(&[]), Err(EvalError::EmptyInput)));
        let a = metrics(&cm(&["A", "B"], vec![vec![1, 0], vec![0, 1]])).unwrap();
        let b = metrics(&cm(&["A", "C"], vec![vec![1, 0], vec![0, 1]])).unwrap();
        assert!(matches!(
            aggregate_folds(&[a, b]),
            Err(EvalError::ClassMismatch)
        ));
    }
}
