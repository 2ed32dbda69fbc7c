//! Cover-object parsing: which bytes of a media file may carry hidden bits.
//!
//! A parsed cover keeps the original file verbatim in `raw` and records the
//! offsets of its carrier bytes — pixel channel bytes for BMP, sample bytes
//! (the low byte only, for 16-bit) for WAV. Embedding rewrites low bits at
//! those offsets in a copy of `raw`; serialization is the identity on `raw`.
//! That offset-based design is what makes the round-trip lossless by
//! construction: headers, row padding, and unknown chunks are never decoded
//! into a lossy intermediate form.

mod bmp;
pub mod synth;
mod wav;

use crate::error::{Error, Result};
use crate::stego::HEADER_CARRIER_COST;

pub use bmp::BmpCodec;
pub use wav::WavCodec;

/// Cover flavor, fixed at parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverKind {
    Bmp24,
    WavPcm8,
    WavPcm16,
}

impl CoverKind {
    /// Peak sample value for PSNR: 8-bit units for BMP and 8-bit WAV,
    /// full 16-bit scale for 16-bit WAV.
    pub fn sample_max(self) -> u32 {
        match self {
            CoverKind::Bmp24 | CoverKind::WavPcm8 => 255,
            CoverKind::WavPcm16 => 65535,
        }
    }
}

/// Shape information carried along for reporting; not used by embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverMeta {
    Bmp {
        width: u32,
        height: u32,
        bits_per_pixel: u16,
    },
    Wav {
        sample_rate: u32,
        channels: u16,
        bits_per_sample: u16,
    },
}

impl std::fmt::Display for CoverMeta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverMeta::Bmp { width, height, bits_per_pixel } => {
                write!(f, "{width}x{height}, {bits_per_pixel} bpp")
            }
            CoverMeta::Wav { sample_rate, channels, bits_per_sample } => {
                write!(f, "{sample_rate} Hz, {channels} ch, {bits_per_sample}-bit PCM")
            }
        }
    }
}

/// A parsed cover: the untouched file bytes plus the ordered offsets whose
/// low bits may legally change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverObject {
    pub kind: CoverKind,
    /// The complete file, byte for byte. Embedding mutates carrier offsets
    /// in a clone of this buffer and nothing else.
    pub raw: Vec<u8>,
    /// Offsets into `raw`, in file order (raster order for BMP, sample order
    /// for WAV). Strictly increasing; never points into headers or padding.
    pub carrier_positions: Vec<usize>,
    pub meta: CoverMeta,
}

impl CoverObject {
    pub fn carrier_count(&self) -> usize {
        self.carrier_positions.len()
    }
}

/// Capacity arithmetic for one cover. The 24-byte stego header is always
/// embedded at one bit per carrier, so it costs 192 carrier bytes no matter
/// which k the payload uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverCapacity {
    pub carrier_count: u64,
    pub header_cost_bytes: u64,
}

impl CoverCapacity {
    /// Maximum payload bytes at `k` bits per carrier.
    ///
    /// # Panics
    /// If `k` is not 1 or 2 — callers validate user input before this point.
    pub fn payload_capacity_bytes(&self, k: u8) -> u64 {
        assert!(k == 1 || k == 2, "k must be 1 or 2, got {k}");
        self.carrier_count.saturating_sub(self.header_cost_bytes) * k as u64 / 8
    }
}

pub fn capacity(cover: &CoverObject) -> CoverCapacity {
    CoverCapacity {
        carrier_count: cover.carrier_count() as u64,
        header_cost_bytes: HEADER_CARRIER_COST as u64,
    }
}

/// A cover format: cheap magic-based detection plus full parsing.
pub trait CoverCodec: Send + Sync {
    fn name(&self) -> &'static str;
    /// Magic-bytes check only; a `true` here does not promise `parse` will
    /// succeed, it routes the error messages to the right codec.
    fn sniff(&self, raw: &[u8]) -> bool;
    fn parse(&self, raw: Vec<u8>) -> Result<CoverObject>;
}

/// All built-in codecs, in sniff order.
pub fn codec_registry() -> &'static [&'static dyn CoverCodec] {
    static BMP: BmpCodec = BmpCodec;
    static WAV: WavCodec = WavCodec;
    static REGISTRY: [&dyn CoverCodec; 2] = [&BMP, &WAV];
    &REGISTRY
}

pub fn codec_by_name(name: &str) -> Option<&'static dyn CoverCodec> {
    codec_registry().iter().copied().find(|c| c.name() == name)
}

/// Detect the format by magic bytes and parse. Unrecognized data is an
/// unsupported cover, not a malformed one — PNG and JPEG land here too, and
/// rejecting them loudly is deliberate: LSB data does not survive lossy or
/// compressed storage.
pub fn parse_cover(raw: Vec<u8>) -> Result<CoverObject> {
    for codec in codec_registry() {
        if codec.sniff(&raw) {
            return codec.parse(raw);
        }
    }
    Err(Error::UnsupportedCover(
        "unrecognized cover format; supported formats are 24-bit uncompressed BMP and PCM WAV"
            .into(),
    ))
}

/// Emit the file bytes. Loss-free by construction: carriers are offsets into
/// the original buffer, so everything the parser did not understand is still
/// there, bit for bit.
pub fn serialize_cover(cover: &CoverObject) -> Vec<u8> {
    cover.raw.clone()
}

#[cfg(test)]
mod tests {
    use super::synth::{synth_bmp, synth_wav16, synth_wav16_extra_chunks, synth_wav8};
    use super::*;

    fn fixtures() -> Vec<(&'static str, Vec<u8>)> {
        vec![
            ("bmp 4x4 (no row padding)", synth_bmp(4, 4, 1)),
            ("bmp 3x2 (padded rows)", synth_bmp(3, 2, 2)),
            ("bmp 100x100", synth_bmp(100, 100, 3)),
            ("wav8 1000 samples", synth_wav8(1000, 4)),
            ("wav16 1000 samples", synth_wav16(1000, 5)),
            ("wav16 with extra chunks", synth_wav16_extra_chunks(500, 6)),
        ]
    }

    #[test]
    fn fixtures_roundtrip_losslessly() {
        for (name, raw) in fixtures() {
            let cover = parse_cover(raw.clone()).unwrap();
            assert_eq!(serialize_cover(&cover), raw, "{name}");
        }
    }

    #[test]
    fn carrier_positions_are_strictly_increasing_and_in_range() {
        for (name, raw) in fixtures() {
            let cover = parse_cover(raw).unwrap();
            let pos = &cover.carrier_positions;
            assert!(!pos.is_empty(), "{name}");
            assert!(pos.windows(2).all(|w| w[0] < w[1]), "{name}: not sorted");
            assert!(*pos.last().unwrap() < cover.raw.len(), "{name}: out of range");
        }
    }

    #[test]
    fn sniffing_routes_to_the_right_codec() {
        assert_eq!(parse_cover(synth_bmp(4, 4, 0)).unwrap().kind, CoverKind::Bmp24);
        assert_eq!(parse_cover(synth_wav8(64, 0)).unwrap().kind, CoverKind::WavPcm8);
        assert_eq!(parse_cover(synth_wav16(64, 0)).unwrap().kind, CoverKind::WavPcm16);
    }

    #[test]
    fn unknown_formats_are_unsupported_covers() {
        let png_magic = b"\x89PNG\r\n\x1a\n000000000000".to_vec();
        assert!(matches!(
            parse_cover(png_magic),
            Err(Error::UnsupportedCover(_))
        ));
        assert!(matches!(
            parse_cover(vec![]),
            Err(Error::UnsupportedCover(_))
        ));
    }

    #[test]
    fn capacity_matches_the_formula() {
        // 100x100 at 24 bpp: 30000 carriers; header costs 192 of them
        let cover = parse_cover(synth_bmp(100, 100, 0)).unwrap();
        let cap = capacity(&cover);
        assert_eq!(cap.carrier_count, 30_000);
        assert_eq!(cap.header_cost_bytes, 192);
        assert_eq!(cap.payload_capacity_bytes(1), 3_726);
        assert_eq!(cap.payload_capacity_bytes(2), 7_452);
    }

    #[test]
    fn capacity_clamps_small_covers_to_zero() {
        // 5x5 = 75 carriers, fewer than the 192 the header needs
        let cover = parse_cover(synth_bmp(5, 5, 0)).unwrap();
        let cap = capacity(&cover);
        assert_eq!(cap.carrier_count, 75);
        assert_eq!(cap.payload_capacity_bytes(1), 0);
        assert_eq!(cap.payload_capacity_bytes(2), 0);
    }

    #[test]
    fn capacity_is_monotone() {
        let small = capacity(&parse_cover(synth_bmp(20, 20, 0)).unwrap());
        let large = capacity(&parse_cover(synth_bmp(40, 40, 0)).unwrap());
        for c in [small, large] {
            assert!(c.payload_capacity_bytes(2) >= c.payload_capacity_bytes(1));
        }
        assert!(large.payload_capacity_bytes(1) >= small.payload_capacity_bytes(1));
    }

    #[test]
    #[should_panic(expected = "k must be 1 or 2")]
    fn capacity_rejects_bad_k() {
        capacity(&parse_cover(synth_bmp(4, 4, 0)).unwrap()).payload_capacity_bytes(3);
    }

    #[test]
    fn registry_lookup_by_name() {
        assert!(codec_by_name("bmp").is_some());
        assert!(codec_by_name("wav").is_some());
        assert!(codec_by_name("png").is_none());
    }
}
