//! `packetvision` command line: build, split, metrics, ztest, inspect.
//!
//! [`run`] never exits the process; it returns a [`CommandOutcome`] whose exit
//! code is 0 on success, 1 for usage errors, 2 for data errors and 3 for I/O
//! errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use packetvision::dataset::{
    build_dataset_with_jobs, export_split, read_manifest_csv, stratified_kfold,
    write_fold_assignment, BuildConfig, DatasetError,
};
use packetvision::evalstats::{
    aggregate_folds, classes_in, confusion_from_predictions, metrics, read_accuracy_list,
    read_predictions_csv, ztest, EvalError, MetricsReport,
};
use packetvision::imaging::{ImagingError, COLUMNS};
use packetvision::pcap::{read_packets, ByteOrder, PcapError};

pub const SEED_ENV: &str = "PACKETVISION_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    /// Summary on success, diagnostic otherwise.
    pub summary: String,
    /// Files the command wrote.
    pub outputs: Vec<PathBuf>,
}

impl CommandOutcome {
    fn ok(summary: String, outputs: Vec<PathBuf>) -> Self {
        Self {
            exit_code: EXIT_OK,
            summary,
            outputs,
        }
    }

    fn failed(f: Failure) -> Self {
        let (exit_code, summary) = match f {
            Failure::Usage(m) => (EXIT_USAGE, m),
            Failure::Data(m) => (EXIT_DATA, m),
            Failure::Io(m) => (EXIT_IO, m),
        };
        Self {
            exit_code,
            summary,
            outputs: Vec::new(),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Io(String),
}

impl From<PcapError> for Failure {
    fn from(e: PcapError) -> Self {
        match e {
            PcapError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<ImagingError> for Failure {
    fn from(e: ImagingError) -> Self {
        match e {
            ImagingError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Io { .. } => Failure::Io(e.to_string()),
            DatasetError::Pcap { ref source, .. } if matches!(source, PcapError::Io { .. }) => {
                Failure::Io(e.to_string())
            }
            DatasetError::Imaging(ImagingError::Io { .. }) => Failure::Io(e.to_string()),
            DatasetError::Csv(ref c) if c.is_io_error() => Failure::Io(e.to_string()),
            DatasetError::KTooSmall(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Io { .. } => Failure::Io(e.to_string()),
            EvalError::Csv(ref c) if c.is_io_error() => Failure::Io(e.to_string()),
            EvalError::InvalidAlpha(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(
    name = "packetvision",
    version,
    about = "Turn pcap traces into labeled packet images and evaluate classifiers trained on them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the PNG dataset and manifest described by a TOML config
    Build {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads for image generation (default: one per processor)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Assign manifest samples to stratified folds and write train/test lists
    Split {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Confusion-matrix metrics from a predictions CSV, averaged over folds
    Metrics {
        #[arg(long)]
        predictions: PathBuf,
        /// Also print each fold's metrics
        #[arg(long)]
        per_fold: bool,
    },
    /// One-tailed two-sample Z-test: is classifier A more accurate than B?
    Ztest {
        /// Fold accuracies of A, one percent value per line
        #[arg(long)]
        a: PathBuf,
        /// Fold accuracies of B, one percent value per line
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Packet count and length histogram of a pcap file
    Inspect {
        #[arg(long)]
        pcap: PathBuf,
    },
}

/// Parse `argv` (program name first) and run the subcommand, honoring
/// `PACKETVISION_SEED` from the environment.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let seed = std::env::var(SEED_ENV).ok();
    run_with_seed_override(argv, seed.as_deref())
}

/// [`run`] with the seed override passed in explicitly.
pub fn run_with_seed_override<I, T>(argv: I, seed_override: Option<&str>) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutcome::ok(text, Vec::new())
                }
                _ => CommandOutcome::failed(Failure::Usage(text)),
            };
        }
    };
    let result = match cli.command {
        Command::Build { config, jobs } => cmd_build(&config, jobs, seed_override),
        Command::Split {
            manifest,
            k,
            seed,
            out,
        } => cmd_split(&manifest, k, seed, &out),
        Command::Metrics {
            predictions,
            per_fold,
        } => cmd_metrics(&predictions, per_fold),
        Command::Ztest { a, b, alpha } => cmd_ztest(&a, &b, alpha),
        Command::Inspect { pcap } => cmd_inspect(&pcap),
    };
    match result {
        Ok((summary, outputs)) => CommandOutcome::ok(summary, outputs),
        Err(f) => CommandOutcome::failed(f),
    }
}

type CmdResult = Result<(String, Vec<PathBuf>), Failure>;

fn cmd_build(config_path: &Path, jobs: Option<usize>, seed_override: Option<&str>) -> CmdResult {
    let mut config = BuildConfig::load(config_path)?;
    let mut seed_note = None;
    if let Some(raw) = seed_override {
        let seed: u64 = raw.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{SEED_ENV} must be an unsigned integer, got {raw:?}"
            ))
        })?;
        config.global_seed = seed;
        seed_note = Some(seed);
    }

    let built = build_dataset_with_jobs(&config, jobs.unwrap_or(0))?;

    let mut s = String::new();
    let _ = writeln!(s, "dataset: {}", config.output_dir.display());
    match seed_note {
        Some(seed) => {
            let _ = writeln!(s, "global seed: {seed} (from {SEED_ENV})");
        }
        None => {
            let _ = writeln!(s, "global seed: {}", config.global_seed);
        }
    }
    let _ = writeln!(s, "lambda: {}", config.lambda);
    for st in &built.inputs {
        let _ = write!(
            s,
            "input {} [{}]: {} packets",
            st.path.display(),
            st.label,
            st.used
        );
        if st.skipped_empty > 0 {
            let _ = write!(s, ", {} empty records skipped", st.skipped_empty);
        }
        if st.truncated {
            let _ = write!(s, ", truncated final record");
        }
        s.push('\n');
    }
    let counts = built.manifest.class_counts();
    let width = counts
        .keys()
        .map(|c| c.as_str().len())
        .max()
        .unwrap_or(5)
        .max(5);
    for class in &built.manifest.classes {
        let _ = writeln!(s, "  {:<width$}  {}", class.as_str(), counts[class]);
    }
    let _ = writeln!(s, "  {:<width$}  {}", "Total", built.manifest.len());
    let _ = write!(s, "manifest: {}", built.manifest_path.display());

    let mut outputs = vec![built.manifest_path.clone()];
    outputs.extend(
        built
            .manifest
            .entries
            .iter()
            .map(|e| config.output_dir.join(&e.image_relpath)),
    );
    Ok((s, outputs))
}

fn cmd_split(manifest: &Path, k: i64, seed: u64, out: &Path) -> CmdResult {
    if k < 2 {
        return Err(Failure::Usage("k must be >= 2".into()));
    }
    let k = k as usize;
    let entries = read_manifest_csv(manifest)?;
    let assignment = stratified_kfold(&entries, k, seed)?;

    fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    let folds_path = out.join("folds.csv");
    write_fold_assignment(&assignment, &folds_path)?;
    let mut outputs = vec![folds_path.clone()];

    let mut s = String::new();
    let _ = writeln!(s, "{} samples, k = {k}, seed = {seed}", entries.len());
    for (class, sizes) in assignment.class_fold_sizes() {
        let sizes: Vec<String> = sizes.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "  {class}: {}", sizes.join(" / "));
    }
    for fold in 0..k {
        let dir = out.join(format!("fold_{fold}"));
        let files = export_split(&assignment, fold, &dir)?;
        let _ = writeln!(
            s,
            "fold {fold}: train {} test {} -> {}",
            files.train_rows,
            files.test_rows,
            dir.display()
        );
        outputs.push(files.train);
        outputs.push(files.test);
    }
    let _ = write!(s, "assignment: {}", folds_path.display());
    Ok((s, outputs))
}

fn report_line(label: &str, m: &MetricsReport) -> String {
    format!(
        "{label:<8} accuracy {:>6.2}  precision {:>6.2}  recall {:>6.2}  f1 {:>6.2}",
        m.accuracy, m.precision, m.recall, m.f1
    )
}

fn cmd_metrics(path: &Path, per_fold: bool) -> CmdResult {
    let records = read_predictions_csv(path)?;
    if records.is_empty() {
        return Err(EvalError::EmptyInput.into());
    }
    let classes = classes_in(&records);
    let mut folds: Vec<usize> = records.iter().map(|r| r.fold).collect();
    folds.sort_unstable();
    folds.dedup();

    let mut reports = Vec::with_capacity(folds.len());
    for &fold in &folds {
        let subset: Vec<_> = records.iter().filter(|r| r.fold == fold).cloned().collect();
        reports.push(metrics(&confusion_from_predictions(&subset, &classes)?)?);
    }
    let mean = aggregate_folds(&reports)?;

    let mut s = String::new();
    let names: Vec<&str> = classes.iter().map(|c| c.as_str()).collect();
    let _ = writeln!(
        s,
        "{} predictions, {} fold(s), classes: {}",
        records.len(),
        folds.len(),
        names.join(", ")
    );
    if per_fold {
        for (fold, r) in folds.iter().zip(&reports) {
            let _ = writeln!(s, "{}", report_line(&format!("fold {fold}"), r));
        }
    }
    let _ = writeln!(s, "{}", report_line("mean", &mean));
    for c in &mean.per_class {
        let _ = write!(
            s,
            "  {:<12} precision {:>6.2}  recall {:>6.2}  f1 {:>6.2}",
            c.class.as_str(),
            c.precision,
            c.recall,
            c.f1
        );
        if c.precision_undefined {
            s.push_str("  [never predicted in some fold]");
        }
        if c.recall_undefined {
            s.push_str("  [absent from some fold]");
        }
        s.push('\n');
    }
    Ok((s.trim_end().to_owned(), Vec::new()))
}

fn cmd_ztest(a_path: &Path, b_path: &Path, alpha: f64) -> CmdResult {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Failure::Usage(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let a = read_accuracy_list(a_path)?;
    let b = read_accuracy_list(b_path)?;
    let r = ztest(&a, &b, alpha)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "a: {} (n = {}, mean {:.2}, variance {:.4})",
        a_path.display(),
        r.n_a,
        r.mean_a,
        r.var_a
    );
    let _ = writeln!(
        s,
        "b: {} (n = {}, mean {:.2}, variance {:.4})",
        b_path.display(),
        r.n_b,
        r.mean_b,
        r.var_b
    );
    let _ = writeln!(
        s,
        "H0: mean(a) <= mean(b)   Ha: mean(a) > mean(b)   alpha {}",
        r.alpha
    );
    let _ = writeln!(s, "z_obs {:.4}", r.z_obs);
    if r.degenerate_variance {
        let _ = writeln!(s, "  (both samples have zero variance)");
    }
    let _ = writeln!(s, "z_crit {:.4}", r.z_crit);
    let _ = write!(s, "decision {}", r.decision);
    Ok((s, Vec::new()))
}

const HISTOGRAM_EDGES: [usize; 7] = [64, 128, 256, 512, 1024, 1514, usize::MAX];

fn cmd_inspect(path: &Path) -> CmdResult {
    let cap = read_packets(path)?;
    let info = &cap.info;
    let mut s = String::new();
    let _ = writeln!(s, "file: {}", path.display());
    let _ = writeln!(
        s,
        "format: pcap {}.{}, {}-endian, {} timestamps",
        info.version_major,
        info.version_minor,
        match info.byte_order {
            ByteOrder::Little => "little",
            ByteOrder::Big => "big",
        },
        if info.nanosecond {
            "nanosecond"
        } else {
            "microsecond"
        }
    );
    let _ = writeln!(
        s,
        "link type: {}  snaplen: {}",
        info.link_type, info.snaplen
    );
    let _ = writeln!(s, "records: {}", info.packet_count);
    let _ = writeln!(s, "packets: {}", cap.packets.len());
    let _ = writeln!(s, "empty records skipped: {}", cap.skipped_empty);
    if let Some(t) = &cap.truncated {
        let _ = writeln!(
            s,
            "truncated: record {} at byte offset {} is incomplete",
            t.record_index, t.offset
        );
    }
    if !cap.packets.is_empty() {
        let lens: Vec<usize> = cap.packets.iter().map(|p| p.captured_len()).collect();
        let min = *lens.iter().min().unwrap_or(&0);
        let max = *lens.iter().max().unwrap_or(&0);
        let mean = lens.iter().sum::<usize>() as f64 / lens.len() as f64;
        let _ = writeln!(s, "length: min {min}  mean {mean:.1}  max {max}");
        let _ = writeln!(
            s,
            "image rows: {} .. {}",
            min.div_ceil(COLUMNS),
            max.div_ceil(COLUMNS)
        );
        let _ = writeln!(s, "length histogram:");
        let mut lo = 1;
        for hi in HISTOGRAM_EDGES {
            let n = lens.iter().filter(|&&l| l >= lo && l <= hi).count();
            let range = if hi == usize::MAX {
                format!("{lo}+")
            } else {
                format!("{lo}-{hi}")
            };
            let _ = writeln!(s, "  {range:>10}  {n}");
            lo = hi.saturating_add(1);
        }
    }
    Ok((s.trim_end().to_owned(), Vec::new()))
}
