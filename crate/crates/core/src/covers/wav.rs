//! RIFF/WAVE PCM parsing.
//!
//! A plain chunk walker: fmt and data are interpreted, everything else
//! (LIST, cue, vendor chunks) is stepped over and preserved verbatim because
//! serialization returns the original bytes. Odd-sized chunks are followed by
//! a pad byte per the RIFF rule. Only integer PCM at 8 or 16 bits per sample
//! qualifies as a cover; for 16-bit samples the low byte alone is a carrier,
//! so the worst-case amplitude error stays within ±3 of 65535.

use crate::error::{Error, Result};

use super::{CoverCodec, CoverKind, CoverMeta, CoverObject};

pub struct WavCodec;

struct FmtChunk {
    audio_format: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

impl CoverCodec for WavCodec {
    fn name(&self) -> &'static str {
        "wav"
    }

    fn sniff(&self, raw: &[u8]) -> bool {
        raw.len() >= 12 && &raw[..4] == b"RIFF" && &raw[8..12] == b"WAVE"
    }

    fn parse(&self, raw: Vec<u8>) -> Result<CoverObject> {
        if raw.len() < 12 {
            return Err(Error::Format("WAV shorter than its RIFF header".into()));
        }

        let mut fmt: Option<FmtChunk> = None;
        let mut data: Option<(usize, usize)> = None; // (start, len)

        let mut pos = 12;
        while pos < raw.len() {
            if raw.len() - pos < 8 {
                return Err(Error::Format(format!(
                    "truncated chunk header at offset {pos}"
                )));
            }
            let id: [u8; 4] = raw[pos..pos + 4].try_into().unwrap();
            let size = u32::from_le_bytes(raw[pos + 4..pos + 8].try_into().unwrap()) as usize;
            let body = pos + 8;
            if raw.len() - body < size {
                return Err(Error::Format(format!(
                    "chunk '{}' at offset {pos} claims {size} bytes but only {} remain",
                    id.escape_ascii(),
                    raw.len() - body
                )));
            }

            match &id {
                b"fmt " => {
                    if fmt.is_some() {
                        return Err(Error::Format("duplicate fmt chunk".into()));
                    }
                    if size < 16 {
                        return Err(Error::Format(format!("fmt chunk of {size} bytes")));
                    }
                    let f = &raw[body..body + 16];
                    fmt = Some(FmtChunk {
                        audio_format: u16::from_le_bytes(f[0..2].try_into().unwrap()),
                        channels: u16::from_le_bytes(f[2..4].try_into().unwrap()),
                        sample_rate: u32::from_le_bytes(f[4..8].try_into().unwrap()),
                        bits_per_sample: u16::from_le_bytes(f[14..16].try_into().unwrap()),
                    });
                }
                b"data" => {
                    if data.is_some() {
                        return Err(Error::Format("duplicate data chunk".into()));
                    }
                    data = Some((body, size));
                }
                _ => {} // preserved by construction, nothing to record
            }

            // RIFF pads odd-sized chunk bodies with one byte
            pos = body + size + (size & 1);
        }

        let fmt = fmt.ok_or_else(|| Error::Format("missing fmt chunk".into()))?;
        let (data_start, data_len) =
            data.ok_or_else(|| Error::Format("missing data chunk".into()))?;

        if fmt.audio_format != 1 {
            return Err(Error::UnsupportedCover(format!(
                "non-PCM WAV (format tag {})",
                fmt.audio_format
            )));
        }
        let kind = match fmt.bits_per_sample {
            8 => CoverKind::WavPcm8,
            16 => CoverKind::WavPcm16,
            other => {
                return Err(Error::UnsupportedCover(format!(
                    "{other}-bit PCM WAV (only 8- and 16-bit are supported)"
                )));
            }
        };
        if fmt.channels == 0 {
            return Err(Error::Format("WAV with zero channels".into()));
        }

        let carrier_positions = match kind {
            CoverKind::WavPcm8 => (data_start..data_start + data_len).collect(),
            CoverKind::WavPcm16 => {
                if data_len % 2 != 0 {
                    return Err(Error::Format(format!(
                        "16-bit data chunk of odd length {data_len}"
                    )));
                }
                // little-endian samples: byte 0 of each pair is the low byte
                (0..data_len / 2).map(|i| data_start + 2 * i).collect()
            }
            CoverKind::Bmp24 => unreachable!(),
        };

        Ok(CoverObject {
            kind,
            raw,
            carrier_positions,
            meta: CoverMeta::Wav {
                sample_rate: fmt.sample_rate,
                channels: fmt.channels,
                bits_per_sample: fmt.bits_per_sample,
            },
        })
    }
}
