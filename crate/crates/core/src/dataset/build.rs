use std::fs;
use std::path::PathBuf;

use log::{info, warn};
use rayon::prelude::*;

use super::manifest::{sample_id, write_manifest_csv, DatasetManifest, SampleRecord};
use super::{BuildConfig, ClassLabel, DatasetError};
use crate::imaging::{encode_png, render, shuffle, to_matrix, ShuffleSpec};
use crate::pcap::{read_packets, RawPacket};
use crate::rng::image_seed;

/// What happened to one configured input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputStats {
    pub path: PathBuf,
    pub label: ClassLabel,
    /// Packets turned into images.
    pub used: usize,
    /// Zero-length records skipped by the reader.
    pub skipped_empty: usize,
    /// The trace ended in the middle of a record.
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct BuildOutput {
    pub manifest: DatasetManifest,
    pub manifest_path: PathBuf,
    pub inputs: Vec<InputStats>,
}

struct Job<'a> {
    file_index: usize,
    packet_index: usize,
    label: &'a ClassLabel,
    source: &'a PathBuf,
    packet: &'a RawPacket,
}

/// Build on rayon's global pool.
pub fn build_dataset(config: &BuildConfig) -> Result<BuildOutput, DatasetError> {
    build_inner(config)
}

/// Build with a dedicated pool of `jobs` workers (0 means one per processor).
pub fn build_dataset_with_jobs(
    config: &BuildConfig,
    jobs: usize,
) -> Result<BuildOutput, DatasetError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| DatasetError::InvalidConfig(format!("worker pool: {e}")))?;
    pool.install(|| build_inner(config))
}

fn build_inner(config: &BuildConfig) -> Result<BuildOutput, DatasetError> {
    config.validate()?;

    let mut captures = Vec::with_capacity(config.inputs.len());
    let mut stats = Vec::with_capacity(config.inputs.len());
    for input in &config.inputs {
        let capture = read_packets(&input.path).map_err(|source| DatasetError::Pcap {
            path: input.path.clone(),
            source,
        })?;
        if let Some(t) = &capture.truncated {
            warn!(
                "{}: capture ends inside record {} (offset {}); using the {} complete packets",
                input.path.display(),
                t.record_index,
                t.offset,
                capture.packets.len()
            );
        }
        let used = input
            .max_packets
            .map_or(capture.packets.len(), |cap| cap.min(capture.packets.len()));
        stats.push(InputStats {
            path: input.path.clone(),
            label: input.label.clone(),
            used,
            skipped_empty: capture.skipped_empty,
            truncated: capture.truncated.is_some(),
        });
        captures.push(capture);
    }

    let classes = config.classes();
    for class in &classes {
        let dir = config.output_dir.join(class.as_str());
        fs::create_dir_all(&dir).map_err(|e| DatasetError::io(&dir, e))?;
    }

    let jobs: Vec<Job<'_>> = config
        .inputs
        .iter()
        .zip(&captures)
        .zip(&stats)
        .enumerate()
        .flat_map(|(file_index, ((input, capture), st))| {
            capture.packets[..st.used]
                .iter()
                .enumerate()
                .map(move |(packet_index, packet)| Job {
                    file_index,
                    packet_index,
                    label: &input.label,
                    source: &input.path,
                    packet,
                })
        })
        .collect();

    let entries: Vec<SampleRecord> = jobs
        .par_iter()
        .map(|job| render_job(config, job))
        .collect::<Result<_, _>>()?;

    let manifest_path = config.output_dir.join("manifest.csv");
    write_manifest_csv(&entries, &manifest_path)?;

    let manifest = DatasetManifest {
        entries,
        classes,
        global_seed: config.global_seed,
        lambda: config.lambda,
    };
    for (class, n) in manifest.class_counts() {
        info!("{class}: {n} images");
    }
    Ok(BuildOutput {
        manifest,
        manifest_path,
        inputs: stats,
    })
}

fn render_job(config: &BuildConfig, job: &Job<'_>) -> Result<SampleRecord, DatasetError> {
    let seed = image_seed(
        config.global_seed,
        job.file_index as u64,
        job.packet_index as u64,
    );
    let spec = ShuffleSpec::new(config.lambda, seed)?;
    let matrix = to_matrix(&job.packet.data)?;
    let image = render(&shuffle(&matrix, &spec));

    let id = sample_id(job.label, job.file_index, job.packet_index);
    let image_relpath = format!("{}/{}.png", job.label, id);
    encode_png(&image, config.output_dir.join(&image_relpath))?;

    Ok(SampleRecord {
        sample_id: id,
        class: job.label.clone(),
        source_pcap: job.source.clone(),
        packet_index: job.packet_index,
        image_relpath,
        rows: matrix.rows(),
        pad_count: matrix.pad_count(),
        shuffle_seed: seed,
    })
}
