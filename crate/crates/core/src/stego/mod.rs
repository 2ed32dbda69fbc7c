//! The embedding layer: a self-describing header plus a key-permuted payload.
//!
//! Layout inside a cover's carrier bytes:
//!
//! * The 24-byte header goes into the **first 192 carriers in natural order**
//!   at one bit per byte, MSB first. Always one bit per carrier, so the
//!   extractor can bootstrap before it knows the payload's k.
//! * Payload bits follow MSB-first into the **remaining carriers, visited in
//!   a keyed permutation order**, k bits per carrier replacing the k lowest
//!   bits. The permutation is seeded by the user's key number XORed with the
//!   key file's salt — which is why both factors are needed to extract.
//!
//! This bit layout is a wire format: an independent implementation following
//! this module's rules interoperates bit-exactly.

pub mod prng;

use crate::archive::crc32;
use crate::covers::{capacity, CoverObject};
use crate::error::{Error, Result};
use prng::SplitMix64;

pub const STEGO_MAGIC: &[u8; 4] = b"SVH1";
pub const STEGO_VERSION: u8 = 1;
/// Serialized header size in bytes.
pub const HEADER_LEN: usize = 24;
/// Carrier bytes the header consumes (one bit per carrier).
pub const HEADER_CARRIER_COST: usize = HEADER_LEN * 8;

/// Header flag bit 0: the payload is ciphertext, not a plain archive.
pub const FLAG_ENCRYPTED: u8 = 0b0000_0001;

/// The embedded prefix that makes extraction self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StegoHeader {
    pub k: u8,
    pub flags: u8,
    pub payload_len: u64,
    pub payload_crc32: u32,
}

impl StegoHeader {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(STEGO_MAGIC);
        out[4] = STEGO_VERSION;
        out[5] = self.k;
        out[6] = self.flags;
        out[7] = 0; // reserved
        out[8..16].copy_from_slice(&self.payload_len.to_le_bytes());
        out[16..20].copy_from_slice(&self.payload_crc32.to_le_bytes());
        let crc = crc32(&out[..20]);
        out[20..24].copy_from_slice(&crc.to_le_bytes());
        out
    }

    /// Bad magic or a failed header checksum mean "not a stego object" —
    /// that is exactly what a pristine cover's random LSBs look like. A
    /// checksum-valid header with fields we cannot honor is a format error.
    pub fn decode(bytes: &[u8; HEADER_LEN]) -> Result<Self> {
        if &bytes[..4] != STEGO_MAGIC {
            return Err(Error::NotStego("no stego header found".into()));
        }
        let stored = u32::from_le_bytes(bytes[20..24].try_into().unwrap());
        if crc32(&bytes[..20]) != stored {
            return Err(Error::NotStego("stego header checksum mismatch".into()));
        }
        if bytes[4] != STEGO_VERSION {
            return Err(Error::Format(format!(
                "stego header version {} (this build reads version 1)",
                bytes[4]
            )));
        }
        let k = bytes[5];
        if k != 1 && k != 2 {
            return Err(Error::Format(format!("stego header claims k = {k}")));
        }
        if bytes[6] & !FLAG_ENCRYPTED != 0 {
            return Err(Error::Format(format!(
                "stego header has unknown flag bits {:#04x}",
                bytes[6]
            )));
        }
        if bytes[7] != 0 {
            return Err(Error::Format("stego header reserved byte is set".into()));
        }
        Ok(StegoHeader {
            k,
            flags: bytes[6],
            payload_len: u64::from_le_bytes(bytes[8..16].try_into().unwrap()),
            payload_crc32: u32::from_le_bytes(bytes[16..20].try_into().unwrap()),
        })
    }
}

/// Inputs that determine the payload carrier-visit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermutationSpec {
    /// The human-shared secret number.
    pub key_number: u64,
    /// Salt from the session secret, so equal key numbers still give
    /// unrelated permutations across embeds.
    pub perm_salt: [u8; 8],
    /// Count of payload carrier slots: carrier count minus the header cost.
    pub domain_size: usize,
}

/// Fisher–Yates order over `[0, domain_size)`, seeded from
/// `key_number XOR le64(perm_salt)`. Entry `t` of the result is the payload
/// slot that receives the t-th bit group.
///
/// # Panics
/// If `domain_size` exceeds `u32::MAX` (a cover beyond 4 Gi carriers, which
/// cannot come out of an in-memory parse on any supported target).
pub fn derive_permutation(spec: &PermutationSpec) -> Vec<u32> {
    assert!(
        spec.domain_size <= u32::MAX as usize,
        "permutation domain too large"
    );
    let mut perm: Vec<u32> = (0..spec.domain_size as u32).collect();
    let seed = spec.key_number ^ u64::from_le_bytes(spec.perm_salt);
    let mut rng = SplitMix64::new(seed);
    for i in (1..perm.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Replace the k lowest bits of `byte` with `value`.
///
/// This is the whole steganographic idea in one line: 0b00100110 with its
/// last bit set to 1 becomes 0b00100111 — two shades of the same color.
#[inline]
pub fn set_low_bits(byte: u8, k: u8, value: u8) -> u8 {
    debug_assert!(k == 1 || k == 2);
    let mask = (1u8 << k) - 1;
    (byte & !mask) | (value & mask)
}

#[inline]
fn get_bit(data: &[u8], bit: usize) -> u8 {
    (data[bit / 8] >> (7 - bit % 8)) & 1
}

#[inline]
fn set_bit(data: &mut [u8], bit: usize, value: u8) {
    let mask = 0x80 >> (bit % 8);
    if value != 0 {
        data[bit / 8] |= mask;
    } else {
        data[bit / 8] &= !mask;
    }
}

fn check_domain(cover: &CoverObject, spec: &PermutationSpec) -> Result<()> {
    let expected = cover.carrier_count().saturating_sub(HEADER_CARRIER_COST);
    if spec.domain_size != expected {
        return Err(Error::Config(format!(
            "permutation domain {} does not match the cover's {expected} payload slots",
            spec.domain_size
        )));
    }
    Ok(())
}

/// Embed `ciphertext` into a copy of `cover` at `k` bits per carrier byte.
///
/// The cover must have room for the header (192 carriers) plus the payload
/// at the chosen k; `encrypted` sets the header flag that tells the
/// extractor whether a decryption step follows.
pub fn embed(
    cover: &CoverObject,
    ciphertext: &[u8],
    k: u8,
    spec: &PermutationSpec,
    encrypted: bool,
) -> Result<CoverObject> {
    if k != 1 && k != 2 {
        return Err(Error::Config(format!("k must be 1 or 2, got {k}")));
    }
    let needed = ciphertext.len() as u64;
    let available = capacity(cover).payload_capacity_bytes(k);
    if needed > available || cover.carrier_count() < HEADER_CARRIER_COST {
        return Err(Error::Capacity { needed, available });
    }
    check_domain(cover, spec)?;

    let header = StegoHeader {
        k,
        flags: if encrypted { FLAG_ENCRYPTED } else { 0 },
        payload_len: needed,
        payload_crc32: crc32(ciphertext),
    }
    .encode();

    let carriers = &cover.carrier_positions;
    let mut raw = cover.raw.clone();

    for (i, &pos) in carriers[..HEADER_CARRIER_COST].iter().enumerate() {
        raw[pos] = set_low_bits(raw[pos], 1, get_bit(&header, i));
    }

    let perm = derive_permutation(spec);
    let total_bits = ciphertext.len() * 8;
    let groups = total_bits.div_ceil(k as usize);
    for t in 0..groups {
        let pos = carriers[HEADER_CARRIER_COST + perm[t] as usize];
        let value = match k {
            1 => get_bit(ciphertext, t),
            _ => {
                // first bit of the pair lands in the more significant slot
                let hi = get_bit(ciphertext, 2 * t);
                let lo = if 2 * t + 1 < total_bits { get_bit(ciphertext, 2 * t + 1) } else { 0 };
                (hi << 1) | lo
            }
        };
        raw[pos] = set_low_bits(raw[pos], k, value);
    }

    Ok(CoverObject {
        kind: cover.kind,
        raw,
        carrier_positions: carriers.clone(),
        meta: cover.meta.clone(),
    })
}

/// Read and validate the header from the first 192 carrier LSBs.
pub fn read_header(stego: &CoverObject) -> Result<StegoHeader> {
    if stego.carrier_count() < HEADER_CARRIER_COST {
        return Err(Error::NotStego(
            "cover is too small to carry a stego header".into(),
        ));
    }
    let mut bytes = [0u8; HEADER_LEN];
    for (i, &pos) in stego.carrier_positions[..HEADER_CARRIER_COST]
        .iter()
        .enumerate()
    {
        set_bit(&mut bytes, i, stego.raw[pos] & 1);
    }
    StegoHeader::decode(&bytes)
}

/// Recover the embedded ciphertext. Hostile input is expected: anything that
/// does not checksum out cleanly maps to a designated error rather than
/// garbage bytes.
pub fn extract(stego: &CoverObject, spec: &PermutationSpec) -> Result<Vec<u8>> {
    let header = read_header(stego)?;
    let available = capacity(stego).payload_capacity_bytes(header.k);
    if header.payload_len > available {
        return Err(Error::Format(format!(
            "header claims a {} byte payload but the cover holds at most {available}",
            header.payload_len
        )));
    }
    check_domain(stego, spec)?;

    let perm = derive_permutation(spec);
    let carriers = &stego.carrier_positions;
    let k = header.k as usize;
    let len = header.payload_len as usize;
    let total_bits = len * 8;
    let groups = total_bits.div_ceil(k);

    let mut payload = vec![0u8; len];
    for t in 0..groups {
        let byte = stego.raw[carriers[HEADER_CARRIER_COST + perm[t] as usize]];
        match k {
            1 => set_bit(&mut payload, t, byte & 1),
            _ => {
                set_bit(&mut payload, 2 * t, (byte >> 1) & 1);
                if 2 * t + 1 < total_bits {
                    set_bit(&mut payload, 2 * t + 1, byte & 1);
                }
            }
        }
    }

    if crc32(&payload) != header.payload_crc32 {
        return Err(Error::Integrity(
            "payload checksum mismatch — wrong key number, wrong key file, or a tampered stego object"
                .into(),
        ));
    }
    Ok(payload)
}
