use std::fs;
use std::io::{BufWriter, Cursor, Write};
use std::path::Path;

use super::{ByteMatrix, ImagingError, COLUMNS};

/// 8-pixel-wide RGB raster, one row per matrix row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketImage {
    height: usize,
    /// Row-major RGB triples.
    pixels: Vec<u8>,
}

impl PacketImage {
    pub fn width(&self) -> usize {
        COLUMNS
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let i = (row * COLUMNS + col) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn rgb_bytes(&self) -> &[u8] {
        &self.pixels
    }

    /// Build an image from raw RGB triples; `None` unless the buffer holds a
    /// whole number of 8-pixel rows.
    pub fn from_rgb(pixels: Vec<u8>) -> Option<Self> {
        let row_len = COLUMNS * 3;
        if pixels.is_empty() || !pixels.len().is_multiple_of(row_len) {
            return None;
        }
        Some(Self {
            height: pixels.len() / row_len,
            pixels,
        })
    }
}

/// Replicate every matrix entry across the three channels.
pub fn render(matrix: &ByteMatrix) -> PacketImage {
    let pixels = matrix.data().iter().flat_map(|&v| [v, v, v]).collect();
    PacketImage {
        height: matrix.rows(),
        pixels,
    }
}

/// Encode as 8-bit RGB, non-interlaced, no ancillary chunks. Filter and
/// compression are fixed so the same image always yields the same bytes.
pub fn write_png<W: Write>(image: &PacketImage, out: W) -> Result<(), ImagingError> {
    let mut encoder = png::Encoder::new(out, image.width() as u32, image.height() as u32);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    encoder.set_filter(png::Filter::NoFilter);
    encoder.set_compression(png::Compression::Balanced);
    let mut writer = encoder.write_header()?;
    writer.write_image_data(&image.pixels)?;
    writer.finish()?;
    Ok(())
}

pub fn encode_png(image: &PacketImage, path: impl AsRef<Path>) -> Result<(), ImagingError> {
    let path = path.as_ref();
    let io_err = |source| ImagingError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_png(image, &mut w)?;
    w.flush().map_err(io_err)
}

/// Decode a PNG written by [`write_png`].
pub fn decode_png(bytes: &[u8]) -> Result<PacketImage, ImagingError> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder.read_info()?;
    let size = reader
        .output_buffer_size()
        .ok_or(ImagingError::UnsupportedPng)?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf)?;
    if info.color_type != png::ColorType::Rgb
        || info.bit_depth != png::BitDepth::Eight
        || info.width as usize != COLUMNS
    {
        return Err(ImagingError::UnsupportedPng);
    }
    buf.truncate(info.buffer_size());
    PacketImage::from_rgb(buf).ok_or(ImagingError::UnsupportedPng)
}
