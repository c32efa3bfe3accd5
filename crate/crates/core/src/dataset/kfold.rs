use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{ClassLabel, DatasetError, SampleRecord};
use crate::rng::DeterministicRng;

pub const SPLIT_HEADER: &str = "sample_id,class,image_relpath";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignedSample {
    pub sample_id: String,
    pub class: ClassLabel,
    pub image_relpath: String,
    /// 0-based fold index.
    pub fold: usize,
}

/// Fold index for every sample, kept in manifest order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldAssignment {
    pub k: usize,
    pub seed: u64,
    pub samples: Vec<AssignedSample>,
}

impl FoldAssignment {
    pub fn fold_of(&self, sample_id: &str) -> Option<usize> {
        self.samples
            .iter()
            .find(|s| s.sample_id == sample_id)
            .map(|s| s.fold)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for s in &self.samples {
            sizes[s.fold] += 1;
        }
        sizes
    }

    /// Per-class fold sizes, classes in order of first appearance.
    pub fn class_fold_sizes(&self) -> Vec<(ClassLabel, Vec<usize>)> {
        let mut out: Vec<(ClassLabel, Vec<usize>)> = Vec::new();
        for s in &self.samples {
            let idx = match out.iter().position(|(c, _)| *c == s.class) {
                Some(i) => i,
                None => {
                    out.push((s.class.clone(), vec![0; self.k]));
                    out.len() - 1
                }
            };
            out[idx].1[s.fold] += 1;
        }
        out
    }
}

/// Stratified k-fold assignment.
///
/// Each class's samples are shuffled with a generator seeded by `seed`, then
/// the classes (in order of first appearance) are dealt round-robin onto the
/// folds with one cursor that carries over from class to class. Per class the
/// fold sizes differ by at most one, and the carried cursor keeps the overall
/// fold sizes within one of each other as well.
pub fn stratified_kfold(
    entries: &[SampleRecord],
    k: usize,
    seed: u64,
) -> Result<FoldAssignment, DatasetError> {
    if k < 2 {
        return Err(DatasetError::KTooSmall(k));
    }
    if entries.is_empty() {
        return Err(DatasetError::EmptyManifest);
    }

    let mut by_class: Vec<(&ClassLabel, Vec<usize>)> = Vec::new();
    let mut slot: HashMap<&ClassLabel, usize> = HashMap::new();
    for (i, e) in entries.iter().enumerate() {
        let idx = *slot.entry(&e.class).or_insert_with(|| {
            by_class.push((&e.class, Vec::new()));
            by_class.len() - 1
        });
        by_class[idx].1.push(i);
    }
    for (class, members) in &by_class {
        if members.len() < k {
            return Err(DatasetError::KTooLarge {
                class: class.to_string(),
                count: members.len(),
                k,
            });
        }
    }

    let mut rng = DeterministicRng::from_seed(seed);
    let mut folds = vec![0usize; entries.len()];
    let mut cursor = 0usize;
    for (_, members) in &mut by_class {
        rng.shuffle(members);
        for &i in members.iter() {
            folds[i] = cursor % k;
            cursor += 1;
        }
    }

    let samples = entries
        .iter()
        .zip(folds)
        .map(|(e, fold)| AssignedSample {
            sample_id: e.sample_id.clone(),
            class: e.class.clone(),
            image_relpath: e.image_relpath.clone(),
            fold,
        })
        .collect();
    Ok(FoldAssignment { k, seed, samples })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitFiles {
    pub train: PathBuf,
    pub test: PathBuf,
    pub train_rows: usize,
    pub test_rows: usize,
}

fn split_csv<'a>(rows: impl Iterator<Item = &'a AssignedSample>) -> Result<Vec<u8>, csv::Error> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    wtr.write_record(SPLIT_HEADER.split(','))?;
    for s in rows {
        wtr.write_record([
            s.sample_id.as_str(),
            s.class.as_str(),
            s.image_relpath.as_str(),
        ])?;
    }
    wtr.into_inner().map_err(|e| e.into_error().into())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), DatasetError> {
    let mut f = fs::File::create(path).map_err(|e| DatasetError::io(path, e))?;
    f.write_all(bytes).map_err(|e| DatasetError::io(path, e))
}

/// Write `train.csv` (every other fold) and `test.csv` (fold `fold`) into `out_dir`.
pub fn export_split(
    assignment: &FoldAssignment,
    fold: usize,
    out_dir: &Path,
) -> Result<SplitFiles, DatasetError> {
    if fold >= assignment.k {
        return Err(DatasetError::FoldOutOfRange {
            fold,
            k: assignment.k,
        });
    }
    fs::create_dir_all(out_dir).map_err(|e| DatasetError::io(out_dir, e))?;
    let (test, train): (Vec<&AssignedSample>, Vec<&AssignedSample>) =
        assignment.samples.iter().partition(|s| s.fold == fold);

    let train_path = out_dir.join("train.csv");
    let test_path = out_dir.join("test.csv");
    write_file(&train_path, &split_csv(train.iter().copied())?)?;
    write_file(&test_path, &split_csv(test.iter().copied())?)?;
    Ok(SplitFiles {
        train: train_path,
        test: test_path,
        train_rows: train.len(),
        test_rows: test.len(),
    })
}

/// `sample_id,class,fold` for every sample.
pub fn write_fold_assignment(assignment: &FoldAssignment, path: &Path) -> Result<(), DatasetError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["sample_id", "class", "fold"])?;
    for s in &assignment.samples {
        wtr.write_record([s.sample_id.as_str(), s.class.as_str(), &s.fold.to_string()])?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| DatasetError::io(path, e.into_error()))?;
    write_file(path, &bytes)
}
