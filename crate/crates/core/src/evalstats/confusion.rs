use std::collections::HashMap;

use super::{EvalError, PredictionRecord};
use crate::dataset::ClassLabel;

/// `counts[i][j]`: samples of true class `i` predicted as class `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: Vec<ClassLabel>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    /// Build from explicit counts; `None` unless `counts` is square and
    /// matches the class list.
    pub fn from_counts(classes: Vec<ClassLabel>, counts: Vec<Vec<u64>>) -> Option<Self> {
        let c = classes.len();
        if c == 0 || counts.len() != c || counts.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Self { classes, counts })
    }

    pub fn classes(&self) -> &[ClassLabel] {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        self.counts.iter().map(|row| row[j]).sum()
    }
}

pub fn confusion_from_predictions(
    records: &[PredictionRecord],
    classes: &[ClassLabel],
) -> Result<ConfusionMatrix, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let index: HashMap<&ClassLabel, usize> =
        classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let lookup = |label: &ClassLabel| {
        index
            .get(label)
            .copied()
            .ok_or_else(|| EvalError::UnknownLabel(label.to_string()))
    };
    let c = classes.len();
    let mut counts = vec![vec![0u64; c]; c];
    for r in records {
        counts[lookup(&r.true_label)?][lookup(&r.predicted_label)?] += 1;
    }
    Ok(ConfusionMatrix {
        classes: classes.to_vec(),
        counts,
    })
}
