use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ClassLabel, DatasetError};

pub const MANIFEST_HEADER: &str =
    "sample_id,class,source_pcap,packet_index,image_relpath,rows,pad_count,shuffle_seed";

/// One generated image and everything needed to regenerate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_id: String,
    pub class: ClassLabel,
    pub source_pcap: PathBuf,
    /// Position among the non-empty packets of `source_pcap`.
    pub packet_index: usize,
    /// `<class>/<sample_id>.png`, relative to the dataset root.
    pub image_relpath: String,
    pub rows: usize,
    pub pad_count: usize,
    pub shuffle_seed: u64,
}

/// `<class>_<source-file-index>_<packet-index>`, zero-padded.
pub fn sample_id(class: &ClassLabel, file_index: usize, packet_index: usize) -> String {
    format!("{class}_{file_index:03}_{packet_index:06}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<SampleRecord>,
    pub classes: Vec<ClassLabel>,
    pub global_seed: u64,
    pub lambda: f64,
}

impl DatasetManifest {
    /// Sample count per class, every class listed even when empty.
    pub fn class_counts(&self) -> BTreeMap<ClassLabel, usize> {
        let mut counts: BTreeMap<ClassLabel, usize> =
            self.classes.iter().map(|c| (c.clone(), 0)).collect();
        for e in &self.entries {
            *counts.entry(e.class.clone()).or_default() += 1;
        }
        counts
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn write_manifest_csv(entries: &[SampleRecord], path: &Path) -> Result<(), DatasetError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for e in entries {
        wtr.serialize(e)?;
    }
    let mut bytes = wtr
        .into_inner()
        .map_err(|e| DatasetError::io(path, e.into_error()))?;
    if entries.is_empty() {
        bytes = format!("{MANIFEST_HEADER}\n").into_bytes();
    }
    let mut f = fs::File::create(path).map_err(|e| DatasetError::io(path, e))?;
    f.write_all(&bytes).map_err(|e| DatasetError::io(path, e))
}

pub fn read_manifest_csv(path: &Path) -> Result<Vec<SampleRecord>, DatasetError> {
    let file = fs::File::open(path).map_err(|e| DatasetError::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != MANIFEST_HEADER {
        return Err(DatasetError::InvalidConfig(format!(
            "{}: unexpected manifest header {:?}",
            path.display(),
            header.join(",")
        )));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for row in rdr.deserialize() {
        let rec: SampleRecord = row?;
        if !seen.insert(rec.sample_id.clone()) {
            return Err(DatasetError::DuplicateSampleId(rec.sample_id));
        }
        out.push(rec);
    }
    Ok(out)
}
