//! 24-bit uncompressed BMP parsing.
//!
//! Accepts the classic layout only: BITMAPFILEHEADER, a 40-byte
//! BITMAPINFOHEADER, bottom-up rows, 24 bits per pixel, no compression.
//! Everything else that is still recognizably a BMP (palette depths, RLE,
//! V4/V5 headers, top-down rows) is rejected as an unsupported cover rather
//! than a malformed file, with the reason spelled out.

use crate::error::{Error, Result};

use super::{CoverCodec, CoverKind, CoverMeta, CoverObject};

const FILE_HEADER_LEN: usize = 14;
const INFO_HEADER_LEN: usize = 40;

pub struct BmpCodec;

fn u16_at(raw: &[u8], off: usize) -> u16 {
    u16::from_le_bytes(raw[off..off + 2].try_into().unwrap())
}

fn u32_at(raw: &[u8], off: usize) -> u32 {
    u32::from_le_bytes(raw[off..off + 4].try_into().unwrap())
}

impl CoverCodec for BmpCodec {
    fn name(&self) -> &'static str {
        "bmp"
    }

    fn sniff(&self, raw: &[u8]) -> bool {
        raw.len() >= 2 && &raw[..2] == b"BM"
    }

    fn parse(&self, raw: Vec<u8>) -> Result<CoverObject> {
        if raw.len() < FILE_HEADER_LEN + INFO_HEADER_LEN {
            return Err(Error::Format(
                "BMP shorter than its mandatory headers".into(),
            ));
        }
        let pixel_offset = u32_at(&raw, 10) as usize;

        let info_size = u32_at(&raw, 14);
        if info_size != INFO_HEADER_LEN as u32 {
            return Err(Error::UnsupportedCover(format!(
                "BMP header variant with biSize {info_size} (only the 40-byte BITMAPINFOHEADER is supported)"
            )));
        }
        let width = u32_at(&raw, 18) as i32;
        let height = u32_at(&raw, 22) as i32;
        let planes = u16_at(&raw, 26);
        let bits_per_pixel = u16_at(&raw, 28);
        let compression = u32_at(&raw, 30);

        if bits_per_pixel != 24 {
            return Err(Error::UnsupportedCover(format!(
                "{bits_per_pixel}-bit BMP (only 24-bit is supported)"
            )));
        }
        if compression != 0 {
            return Err(Error::UnsupportedCover(format!(
                "compressed BMP (biCompression {compression})"
            )));
        }
        if height < 0 {
            return Err(Error::UnsupportedCover(
                "top-down BMP (negative height)".into(),
            ));
        }
        if planes != 1 {
            return Err(Error::Format(format!("BMP plane count {planes} (must be 1)")));
        }
        if width <= 0 || height == 0 {
            return Err(Error::Format(format!(
                "BMP dimensions {width}x{height} are not positive"
            )));
        }
        let (width, height) = (width as usize, height as usize);

        // rows are padded to 4-byte boundaries; padding bytes carry nothing
        let row_bytes = width * 3;
        let stride = (row_bytes + 3) / 4 * 4;
        let data_len = stride
            .checked_mul(height)
            .ok_or_else(|| Error::Format("BMP dimensions overflow".into()))?;
        if pixel_offset < FILE_HEADER_LEN + INFO_HEADER_LEN {
            return Err(Error::Format(format!(
                "BMP pixel data offset {pixel_offset} points into the headers"
            )));
        }
        let end = pixel_offset
            .checked_add(data_len)
            .filter(|&e| e <= raw.len())
            .ok_or_else(|| {
                Error::Format(format!(
                    "BMP pixel data truncated: need {data_len} bytes at offset {pixel_offset}, file has {}",
                    raw.len()
                ))
            })?;
        let _ = end;

        let mut carrier_positions = Vec::with_capacity(row_bytes * height);
        for row in 0..height {
            let start = pixel_offset + row * stride;
            carrier_positions.extend(start..start + row_bytes);
        }

        Ok(CoverObject {
            kind: CoverKind::Bmp24,
            raw,
            carrier_positions,
            meta: CoverMeta::Bmp {
                width: width as u32,
                height: height as u32,
                bits_per_pixel: 24,
            },
        })
    }
}
