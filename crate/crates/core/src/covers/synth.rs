//! Deterministic cover synthesis for tests and the benchmark harness.
//!
//! These produce structurally ordinary files — noise content, correct
//! headers — so the rest of the crate can be exercised without shipping
//! binary fixtures. The same (shape, seed) pair always yields the same bytes.

use crate::stego::prng::SplitMix64;

/// Bottom-up 24-bit BMP of random pixels. Row padding bytes are zero.
pub fn synth_bmp(width: u32, height: u32, seed: u64) -> Vec<u8> {
    assert!(width > 0 && height > 0, "degenerate BMP dimensions");
    let row_bytes = width as usize * 3;
    let stride = (row_bytes + 3) / 4 * 4;
    let data_len = stride * height as usize;
    let file_len = 54 + data_len;

    let mut out = Vec::with_capacity(file_len);
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&(file_len as u32).to_le_bytes());
    out.extend_from_slice(&[0; 4]); // reserved
    out.extend_from_slice(&54u32.to_le_bytes()); // pixel data offset

    out.extend_from_slice(&40u32.to_le_bytes()); // BITMAPINFOHEADER
    out.extend_from_slice(&width.to_le_bytes());
    out.extend_from_slice(&height.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // planes
    out.extend_from_slice(&24u16.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes()); // no compression
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    out.extend_from_slice(&2835u32.to_le_bytes()); // 72 dpi, both axes
    out.extend_from_slice(&2835u32.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes()); // palette size
    out.extend_from_slice(&0u32.to_le_bytes()); // important colors

    let mut rng = SplitMix64::new(seed);
    let mut row = vec![0u8; stride];
    for _ in 0..height {
        rng.fill_bytes(&mut row[..row_bytes]);
        out.extend_from_slice(&row);
    }
    debug_assert_eq!(out.len(), file_len);
    out
}

fn wav_skeleton(bits: u16, data: &[u8], sample_rate: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(44 + data.len());
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");

    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&sample_rate.to_le_bytes());
    let block_align = bits as u32 / 8;
    out.extend_from_slice(&(sample_rate * block_align).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());

    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data.len() as u32).to_le_bytes());
    out.extend_from_slice(data);
    out
}

/// Mono 8-bit PCM WAV of random samples.
pub fn synth_wav8(samples: usize, seed: u64) -> Vec<u8> {
    let mut data = vec![0u8; samples];
    SplitMix64::new(seed).fill_bytes(&mut data);
    wav_skeleton(8, &data, 8000)
}

/// Mono 16-bit PCM WAV of random samples.
pub fn synth_wav16(samples: usize, seed: u64) -> Vec<u8> {
    let mut data = vec![0u8; samples * 2];
    SplitMix64::new(seed).fill_bytes(&mut data);
    wav_skeleton(16, &data, 44100)
}

/// 16-bit WAV dressed up the way editors leave real files: a LIST chunk
/// before fmt, an odd-sized chunk (exercising the RIFF pad byte) before
/// data, and a vendor chunk after it.
pub fn synth_wav16_extra_chunks(samples: usize, seed: u64) -> Vec<u8> {
    let plain = synth_wav16(samples, seed);
    let fmt_and_beyond = &plain[12..];

    let mut out = Vec::with_capacity(plain.len() + 64);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&[0; 4]); // patched below
    out.extend_from_slice(b"WAVE");

    out.extend_from_slice(b"LIST");
    out.extend_from_slice(&10u32.to_le_bytes());
    out.extend_from_slice(b"INFOstego!");

    // fmt and data, verbatim from the plain file — but split so the odd
    // chunk can sit between them
    let fmt_chunk = &fmt_and_beyond[..24];
    let data_chunk = &fmt_and_beyond[24..];
    out.extend_from_slice(fmt_chunk);

    out.extend_from_slice(b"note");
    out.extend_from_slice(&5u32.to_le_bytes());
    out.extend_from_slice(b"hello");
    out.push(0); // RIFF pad byte for the odd body

    out.extend_from_slice(data_chunk);

    out.extend_from_slice(b"tail");
    out.extend_from_slice(&4u32.to_le_bytes());
    out.extend_from_slice(b"0123");

    let riff_size = (out.len() - 8) as u32;
    out[4..8].copy_from_slice(&riff_size.to_le_bytes());
    out
}
