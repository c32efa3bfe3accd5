//! Labeled image datasets built from pcap traces, plus stratified folds.
//!
//! On-disk layout produced by [`build_dataset`]:
//!
//! ```text
//! <output_dir>/manifest.csv
//! <output_dir>/<class>/<sample_id>.png
//! ```
//!
//! Split files (`train.csv`, `test.csv`) list `sample_id,class,image_relpath`
//! with paths relative to the dataset root.

mod build;
mod config;
mod kfold;
mod manifest;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::imaging::ImagingError;
use crate::pcap::PcapError;

pub use build::{build_dataset, build_dataset_with_jobs, BuildOutput, InputStats};
pub use config::{BuildConfig, ClassLabel, InputSpec};
pub use kfold::{
    export_split, stratified_kfold, write_fold_assignment, AssignedSample, FoldAssignment,
    SplitFiles, SPLIT_HEADER,
};
pub use manifest::{
    read_manifest_csv, sample_id, write_manifest_csv, DatasetManifest, SampleRecord,
    MANIFEST_HEADER,
};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid build config: {0}")]
    InvalidConfig(String),
    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),
    #[error("{path}: {source}")]
    Pcap {
        path: PathBuf,
        #[source]
        source: PcapError,
    },
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error("class directories collide: {0:?} and {1:?}")]
    DuplicateClassDirectoryCollision(String, String),
    #[error("duplicate sample id {0:?}")]
    DuplicateSampleId(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("k must be >= 2, got {0}")]
    KTooSmall(usize),
    #[error("class {class:?} has {count} samples, fewer than k = {k}")]
    KTooLarge {
        class: String,
        count: usize,
        k: usize,
    },
    #[error("fold {fold} out of range for k = {k}")]
    FoldOutOfRange { fold: usize, k: usize },
    #[error("manifest is empty")]
    EmptyManifest,
}

impl DatasetError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        DatasetError::Io {
            path: path.into(),
            source,
        }
    }
}
