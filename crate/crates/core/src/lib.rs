//! Packet Vision toolchain: classic pcap traces in, labeled PNG datasets,
//! stratified folds and classifier evaluation statistics out.

pub mod dataset;
pub mod evalstats;
pub mod imaging;
pub mod pcap;
pub mod rng;
