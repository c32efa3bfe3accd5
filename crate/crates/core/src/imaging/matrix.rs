use super::ImagingError;

/// Matrix width in bytes, one image row per 8 packet bytes.
pub const COLUMNS: usize = 8;

/// Filler appended to complete the last row.
pub const PAD_BYTE: u8 = 0xFF;

/// Row-major n x 8 byte matrix built from one packet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ByteMatrix {
    rows: usize,
    data: Vec<u8>,
    pad_count: usize,
}

impl ByteMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        COLUMNS
    }

    /// Number of 0xFF bytes that were appended to the packet.
    pub fn pad_count(&self) -> usize {
        self.pad_count
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * COLUMNS + col]
    }

    pub(crate) fn with_data(&self, data: Vec<u8>) -> ByteMatrix {
        debug_assert_eq!(data.len(), self.data.len());
        ByteMatrix {
            rows: self.rows,
            data,
            pad_count: self.pad_count,
        }
    }
}

/// Lay the packet out row by row, padding the tail with 0xFF.
pub fn to_matrix(packet: &[u8]) -> Result<ByteMatrix, ImagingError> {
    if packet.is_empty() {
        return Err(ImagingError::EmptyPacket);
    }
    let rows = packet.len().div_ceil(COLUMNS);
    let pad_count = rows * COLUMNS - packet.len();
    let mut data = Vec::with_capacity(rows * COLUMNS);
    data.extend_from_slice(packet);
    data.resize(rows * COLUMNS, PAD_BYTE);
    Ok(ByteMatrix {
        rows,
        data,
        pad_count,
    })
}
