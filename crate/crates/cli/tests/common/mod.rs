#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use packetvision::pcap::{write_pcap, RawPacket};
use packetvision::rng::DeterministicRng;

/// Trace of `n` packets whose bytes all lie in `lo..=hi`.
pub fn synthetic_trace(path: &Path, n: usize, seed: u64, lo: u8, hi: u8) {
    let mut rng = DeterministicRng::from_seed(seed);
    let span = u64::from(hi - lo) + 1;
    let packets: Vec<RawPacket> = (0..n)
        .map(|i| {
            let len = 14 + rng.below(300) as usize;
            let data = (0..len).map(|_| lo + rng.below(span) as u8).collect();
            RawPacket::new(data).with_timestamp(1_700_000_000 + i as u32, (i * 10) as u32)
        })
        .collect();
    write_pcap(&packets, 1, path).unwrap();
}

/// Two-class fixture: `a.pcap` (5 packets), `b.pcap` (7 packets) and a config
/// writing into `dataset/`.
pub fn two_class_fixture(dir: &Path) -> std::path::PathBuf {
    synthetic_trace(&dir.join("a.pcap"), 5, 11, 0, 127);
    synthetic_trace(&dir.join("b.pcap"), 7, 12, 128, 255);
    let cfg = dir.join("cfg.toml");
    fs::write(
        &cfg,
        r#"output_dir = "dataset"
global_seed = 2021
lambda = 8.0

[[input]]
path = "a.pcap"
label = "A"

[[input]]
path = "b.pcap"
label = "B"
"#,
    )
    .unwrap();
    cfg
}

/// Every file under `root`, keyed by relative path.
pub fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .replace('\\', "/");
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}
