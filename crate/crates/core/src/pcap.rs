//! Classic libpcap capture files.
//!
//! Layout: a 24-byte global header (magic, version 2.4, thiszone, sigfigs,
//! snaplen, network) followed by records, each a 16-byte header (ts_sec,
//! ts_usec, incl_len, orig_len) and `incl_len` bytes of data. The byte order of
//! every field follows the magic number. pcapng is rejected.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

pub const MAGIC_MICROS: u32 = 0xA1B2_C3D4;
pub const MAGIC_NANOS: u32 = 0xA1B2_3C4D;
pub const PCAPNG_MAGIC: u32 = 0x0A0D_0D0A;

pub const GLOBAL_HEADER_LEN: usize = 24;
pub const RECORD_HEADER_LEN: usize = 16;

/// Records larger than this and larger than the file's snaplen are treated as
/// corruption rather than data.
pub const MAX_RECORD_LEN: u32 = 262_144;

pub const LINKTYPE_ETHERNET: u32 = 1;

#[derive(Debug, Error)]
pub enum PcapError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("bad magic number {magic:#010x}{}", if *.magic == PCAPNG_MAGIC { " (pcapng is not supported)" } else { "" })]
    BadMagic { magic: u32 },
    #[error("file is {len} bytes, shorter than the 24-byte global header")]
    Truncated { len: usize },
    #[error("unsupported pcap version {major}.{minor}")]
    UnsupportedVersion { major: u16, minor: u16 },
    #[error("record {index} claims {incl_len} bytes (snaplen {snaplen})")]
    RecordTooLarge {
        index: usize,
        incl_len: u32,
        snaplen: u32,
    },
    #[error("packet {index} is empty")]
    EmptyPacket { index: usize },
    #[error("packet {index} has {captured} captured bytes but original length {original}")]
    LengthMismatch {
        index: usize,
        captured: usize,
        original: u32,
    },
}

impl PcapError {
    fn io(path: &Path, source: io::Error) -> Self {
        PcapError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ByteOrder {
    Little,
    Big,
}

impl ByteOrder {
    fn u16(self, b: &[u8]) -> u16 {
        let a = [b[0], b[1]];
        match self {
            ByteOrder::Little => u16::from_le_bytes(a),
            ByteOrder::Big => u16::from_be_bytes(a),
        }
    }

    fn u32(self, b: &[u8]) -> u32 {
        let a = [b[0], b[1], b[2], b[3]];
        match self {
            ByteOrder::Little => u32::from_le_bytes(a),
            ByteOrder::Big => u32::from_be_bytes(a),
        }
    }

    fn put_u16(self, out: &mut Vec<u8>, v: u16) {
        match self {
            ByteOrder::Little => out.extend_from_slice(&v.to_le_bytes()),
            ByteOrder::Big => out.extend_from_slice(&v.to_be_bytes()),
        }
    }

    fn put_u32(self, out: &mut Vec<u8>, v: u32) {
        match self {
            ByteOrder::Little => out.extend_from_slice(&v.to_le_bytes()),
            ByteOrder::Big => out.extend_from_slice(&v.to_be_bytes()),
        }
    }
}

/// Parsed global header plus the number of complete records in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcapFileInfo {
    pub byte_order: ByteOrder,
    pub version_major: u16,
    pub version_minor: u16,
    pub snaplen: u32,
    pub link_type: u32,
    /// Complete records in the file, zero-length ones included.
    pub packet_count: usize,
    /// Timestamps were stored in nanoseconds (magic `0xA1B23C4D`).
    pub nanosecond: bool,
}

/// One captured packet, link layer onward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPacket {
    pub data: Vec<u8>,
    pub original_len: u32,
    pub timestamp_s: u32,
    /// Always microseconds; nanosecond captures are divided down on read.
    pub timestamp_us: u32,
    pub link_type: u32,
}

impl RawPacket {
    /// A fully captured packet with a zero timestamp on Ethernet.
    pub fn new(data: Vec<u8>) -> Self {
        let original_len = data.len() as u32;
        Self {
            data,
            original_len,
            timestamp_s: 0,
            timestamp_us: 0,
            link_type: LINKTYPE_ETHERNET,
        }
    }

    pub fn with_timestamp(mut self, secs: u32, micros: u32) -> Self {
        self.timestamp_s = secs;
        self.timestamp_us = micros;
        self
    }

    pub fn with_original_len(mut self, original_len: u32) -> Self {
        self.original_len = original_len;
        self
    }

    pub fn captured_len(&self) -> usize {
        self.data.len()
    }
}

/// Where a capture ended mid-record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedRecord {
    /// Index of the incomplete record among all records in the file.
    pub record_index: usize,
    /// Byte offset at which the incomplete record starts.
    pub offset: usize,
}

/// Everything `read_packets` recovers from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capture {
    pub info: PcapFileInfo,
    /// Non-empty packets in file order.
    pub packets: Vec<RawPacket>,
    /// Records with `incl_len == 0`, dropped from `packets`.
    pub skipped_empty: usize,
    /// Set when the file ends inside a record; `packets` holds what preceded it.
    pub truncated: Option<TruncatedRecord>,
}

struct GlobalHeader {
    byte_order: ByteOrder,
    nanosecond: bool,
    version_major: u16,
    version_minor: u16,
    snaplen: u32,
    link_type: u32,
}

fn parse_global_header(bytes: &[u8]) -> Result<GlobalHeader, PcapError> {
    if bytes.len() >= 4 {
        let raw = u32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
        let (byte_order, nanosecond) = match raw {
            MAGIC_MICROS => (ByteOrder::Little, false),
            MAGIC_NANOS => (ByteOrder::Little, true),
            m if m.swap_bytes() == MAGIC_MICROS => (ByteOrder::Big, false),
            m if m.swap_bytes() == MAGIC_NANOS => (ByteOrder::Big, true),
            m => {
                return Err(PcapError::BadMagic {
                    magic: u32::from_be_bytes(m.to_le_bytes()),
                })
            }
        };
        if bytes.len() < GLOBAL_HEADER_LEN {
            return Err(PcapError::Truncated { len: bytes.len() });
        }
        let version_major = byte_order.u16(&bytes[4..]);
        let version_minor = byte_order.u16(&bytes[6..]);
        if (version_major, version_minor) != (2, 4) {
            return Err(PcapError::UnsupportedVersion {
                major: version_major,
                minor: version_minor,
            });
        }
        Ok(GlobalHeader {
            byte_order,
            nanosecond,
            version_major,
            version_minor,
            snaplen: byte_order.u32(&bytes[16..]),
            link_type: byte_order.u32(&bytes[20..]),
        })
    } else {
        Err(PcapError::Truncated { len: bytes.len() })
    }
}

/// Parse an in-memory capture.
pub fn parse_capture(bytes: &[u8]) -> Result<Capture, PcapError> {
    let hdr = parse_global_header(bytes)?;
    let order = hdr.byte_order;
    let mut packets = Vec::new();
    let mut skipped_empty = 0;
    let mut truncated = None;
    let mut records = 0;
    let mut pos = GLOBAL_HEADER_LEN;

    while pos < bytes.len() {
        if bytes.len() - pos < RECORD_HEADER_LEN {
            truncated = Some(TruncatedRecord {
                record_index: records,
                offset: pos,
            });
            break;
        }
        let rec = &bytes[pos..pos + RECORD_HEADER_LEN];
        let ts_sec = order.u32(&rec[0..]);
        let ts_frac = order.u32(&rec[4..]);
        let incl_len = order.u32(&rec[8..]);
        let orig_len = order.u32(&rec[12..]);
        if incl_len > hdr.snaplen && incl_len > MAX_RECORD_LEN {
            return Err(PcapError::RecordTooLarge {
                index: records,
                incl_len,
                snaplen: hdr.snaplen,
            });
        }
        let body = pos + RECORD_HEADER_LEN;
        let end = body + incl_len as usize;
        if end > bytes.len() {
            truncated = Some(TruncatedRecord {
                record_index: records,
                offset: pos,
            });
            break;
        }
        records += 1;
        pos = end;
        if incl_len == 0 {
            skipped_empty += 1;
            continue;
        }
        packets.push(RawPacket {
            data: bytes[body..end].to_vec(),
            original_len: orig_len,
            timestamp_s: ts_sec,
            timestamp_us: if hdr.nanosecond {
                ts_frac / 1000
            } else {
                ts_frac
            },
            link_type: hdr.link_type,
        });
    }

    Ok(Capture {
        info: PcapFileInfo {
            byte_order: order,
            version_major: hdr.version_major,
            version_minor: hdr.version_minor,
            snaplen: hdr.snaplen,
            link_type: hdr.link_type,
            packet_count: records,
            nanosecond: hdr.nanosecond,
        },
        packets,
        skipped_empty,
        truncated,
    })
}

/// Read the global header and count the complete records in the file.
pub fn open_pcap(path: impl AsRef<Path>) -> Result<PcapFileInfo, PcapError> {
    read_packets(path).map(|c| c.info)
}

/// Read every non-empty packet of a capture, in file order.
pub fn read_packets(path: impl AsRef<Path>) -> Result<Capture, PcapError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| PcapError::io(path, e))?;
    parse_capture(&bytes)
}

/// Serialize packets as a classic pcap v2.4 capture with microsecond stamps.
pub fn encode_capture(
    packets: &[RawPacket],
    link_type: u32,
    order: ByteOrder,
) -> Result<Vec<u8>, PcapError> {
    let mut snaplen = MAX_RECORD_LEN;
    for (index, p) in packets.iter().enumerate() {
        if p.data.is_empty() {
            return Err(PcapError::EmptyPacket { index });
        }
        if (p.original_len as usize) < p.data.len() {
            return Err(PcapError::LengthMismatch {
                index,
                captured: p.data.len(),
                original: p.original_len,
            });
        }
        snaplen = snaplen.max(p.data.len() as u32);
    }

    let total: usize = packets
        .iter()
        .map(|p| RECORD_HEADER_LEN + p.data.len())
        .sum();
    let mut out = Vec::with_capacity(GLOBAL_HEADER_LEN + total);
    order.put_u32(&mut out, MAGIC_MICROS);
    order.put_u16(&mut out, 2);
    order.put_u16(&mut out, 4);
    order.put_u32(&mut out, 0); // thiszone
    order.put_u32(&mut out, 0); // sigfigs
    order.put_u32(&mut out, snaplen);
    order.put_u32(&mut out, link_type);
    for p in packets {
        order.put_u32(&mut out, p.timestamp_s);
        order.put_u32(&mut out, p.timestamp_us);
        order.put_u32(&mut out, p.data.len() as u32);
        order.put_u32(&mut out, p.original_len);
        out.extend_from_slice(&p.data);
    }
    Ok(out)
}

/// Write a little-endian classic pcap file.
pub fn write_pcap(
    packets: &[RawPacket],
    link_type: u32,
    path: impl AsRef<Path>,
) -> Result<(), PcapError> {
    let path = path.as_ref();
    let bytes = encode_capture(packets, link_type, ByteOrder::Little)?;
    let file = fs::File::create(path).map_err(|e| PcapError::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(&bytes)
        .and_then(|_| w.flush())
        .map_err(|e| PcapError::io(path, e))
}
