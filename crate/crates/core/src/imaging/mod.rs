//! Packet bytes to picture: pad into an n x 8 matrix, shuffle the entries with
//! Poisson-distributed displacements, replicate each byte across R, G and B,
//! and encode the raster as PNG.

mod matrix;
mod poisson;
mod render;
mod shuffle;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use matrix::{to_matrix, ByteMatrix, COLUMNS, PAD_BYTE};
pub use poisson::poisson_sample;
pub use render::{decode_png, encode_png, render, write_png, PacketImage};
pub use shuffle::{shuffle, ShuffleSpec, DEFAULT_LAMBDA};

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("packet is empty")]
    EmptyPacket,
    #[error("lambda must be finite and non-negative, got {0}")]
    InvalidLambda(f64),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("png encoding failed: {0}")]
    Encode(#[from] png::EncodingError),
    #[error("png decoding failed: {0}")]
    Decode(#[from] png::DecodingError),
    #[error("png is not 8-bit RGB")]
    UnsupportedPng,
}

/// Full pipeline for one packet: matrix, shuffle, render.
pub fn packet_to_image(packet: &[u8], spec: &ShuffleSpec) -> Result<PacketImage, ImagingError> {
    let matrix = to_matrix(packet)?;
    Ok(render(&shuffle(&matrix, spec)))
}
