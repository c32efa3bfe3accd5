use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::dataset::ClassLabel;

pub const PREDICTIONS_HEADER: &str = "fold,sample_id,true_label,predicted_label";

/// One classified test sample, as exchanged with the trainer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub fold: usize,
    pub sample_id: String,
    pub true_label: ClassLabel,
    pub predicted_label: ClassLabel,
}

pub fn read_predictions_csv(path: &Path) -> Result<Vec<PredictionRecord>, EvalError> {
    let io_err = |source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::open(path).map_err(io_err)?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != PREDICTIONS_HEADER {
        return Err(EvalError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("expected header {PREDICTIONS_HEADER:?}"),
        });
    }
    rdr.deserialize()
        .map(|r| r.map_err(EvalError::from))
        .collect()
}

pub fn write_predictions_csv(records: &[PredictionRecord], path: &Path) -> Result<(), EvalError> {
    let io_err = |source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    wtr.write_record(PREDICTIONS_HEADER.split(','))?;
    for r in records {
        wtr.serialize(r)?;
    }
    let bytes = wtr.into_inner().map_err(|e| io_err(e.into_error()))?;
    fs::File::create(path)
        .and_then(|mut f| f.write_all(&bytes))
        .map_err(io_err)
}

/// Every label that occurs as a true or predicted label, sorted.
pub fn classes_in(records: &[PredictionRecord]) -> Vec<ClassLabel> {
    records
        .iter()
        .flat_map(|r| [&r.true_label, &r.predicted_label])
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
