use packetvision::pcap::{
    encode_capture, open_pcap, parse_capture, read_packets, write_pcap, ByteOrder, PcapError,
    RawPacket,
};
use packetvision::rng::DeterministicRng;
use proptest::prelude::*;

fn random_packets(n: usize, seed: u64) -> Vec<RawPacket> {
    let mut rng = DeterministicRng::from_seed(seed);
    (0..n)
        .map(|_| {
            let len = 1 + rng.below(1514) as usize;
            let data: Vec<u8> = (0..len).map(|_| rng.next_u64() as u8).collect();
            let extra = rng.below(64) as u32;
            RawPacket::new(data)
                .with_original_len(len as u32 + extra)
                .with_timestamp(rng.next_u64() as u32, rng.below(1_000_000) as u32)
        })
        .collect()
}

#[test]
fn thousand_random_packets_round_trip_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.pcap");
    let packets = random_packets(1000, 0xC0FFEE);
    write_pcap(&packets, 1, &path).unwrap();

    let info = open_pcap(&path).unwrap();
    assert_eq!(info.packet_count, 1000);
    assert_eq!((info.version_major, info.version_minor), (2, 4));
    assert_eq!(info.byte_order, ByteOrder::Little);

    let cap = read_packets(&path).unwrap();
    assert_eq!(cap.skipped_empty, 0);
    assert!(cap.truncated.is_none());
    assert_eq!(cap.packets, packets);
}

#[test]
fn empty_capture_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.pcap");
    write_pcap(&[], 1, &path).unwrap();
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 24);
    assert!(read_packets(&path).unwrap().packets.is_empty());
}

#[test]
fn single_known_packet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.pcap");
    let p = RawPacket::new((0x01..=0x10).collect());
    write_pcap(std::slice::from_ref(&p), 1, &path).unwrap();
    assert_eq!(read_packets(&path).unwrap().packets, vec![p]);
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        read_packets(dir.path().join("nope.pcap")),
        Err(PcapError::Io { .. })
    ));
}

fn packet_strategy() -> impl Strategy<Value = RawPacket> {
    (
        proptest::collection::vec(any::<u8>(), 1..200),
        0u32..100,
        any::<u32>(),
        0u32..1_000_000,
    )
        .prop_map(|(data, extra, s, us)| {
            let len = data.len() as u32;
            RawPacket::new(data)
                .with_original_len(len + extra)
                .with_timestamp(s, us)
        })
}

proptest! {
    #[test]
    fn byte_order_does_not_change_contents(packets in proptest::collection::vec(packet_strategy(), 0..20)) {
        let le = parse_capture(&encode_capture(&packets, 1, ByteOrder::Little).unwrap()).unwrap();
        let be = parse_capture(&encode_capture(&packets, 1, ByteOrder::Big).unwrap()).unwrap();
        prop_assert_eq!(&le.packets, &packets);
        prop_assert_eq!(&be.packets, &packets);
    }

    #[test]
    fn any_prefix_parses_to_a_prefix(packets in proptest::collection::vec(packet_strategy(), 1..8), cut in 0.0f64..1.0) {
        let bytes = encode_capture(&packets, 1, ByteOrder::Little).unwrap();
        let end = 24 + ((bytes.len() - 24) as f64 * cut) as usize;
        let cap = parse_capture(&bytes[..end]).unwrap();
        prop_assert!(cap.packets.len() <= packets.len());
        prop_assert_eq!(&cap.packets[..], &packets[..cap.packets.len()]);
        let mut boundary = 24;
        let mut on_boundary = end == boundary;
        for p in &packets {
            boundary += 16 + p.data.len();
            on_boundary |= end == boundary;
        }
        prop_assert_eq!(cap.truncated.is_none(), on_boundary);
    }
}
