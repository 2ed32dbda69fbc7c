//! The full hide/reveal chains as pure byte-level operations.
//!
//! The CLI is a thin shell over these two functions; tests drive them
//! in-process. Neither touches the filesystem — archives come in as entry
//! lists, covers and key files as byte buffers.
//!
//! Embedding draws from the caller's RNG in a fixed order (session secret
//! first, then RSA padding filler), so a seeded RNG makes the stego file and
//! key file bit-reproducible.

use crate::archive::{pack, unpack, ArchiveEntry};
use crate::cipher::{cipher_for_flags, PayloadCipher};
use crate::covers::{capacity, serialize_cover, CoverObject};
use crate::crypto::rsa::{RsaPrivateKey, RsaPublicKey};
use crate::crypto::{
    decode_key_file, encode_key_file, unwrap_secret, wrap_secret, SessionSecret,
};
use crate::error::Result;
use crate::metrics::{distortion, DistortionReport};
use crate::stego::prng::SplitMix64;
use crate::stego::{embed, extract, read_header, PermutationSpec, HEADER_CARRIER_COST};

/// Everything `embed_archive` needs besides entropy. The cover comes in
/// already parsed so callers can handle cover-format failures separately
/// from pipeline failures.
pub struct EmbedRequest<'a> {
    pub cover: &'a CoverObject,
    pub entries: &'a [ArchiveEntry],
    pub public: &'a RsaPublicKey,
    pub key_number: u64,
    pub k: u8,
    pub cipher: &'a dyn PayloadCipher,
}

/// What an embed produces: the two artifacts plus the numbers worth showing.
#[derive(Debug)]
pub struct EmbedResult {
    pub stego_raw: Vec<u8>,
    /// Encoded key file (the RSA-wrapped session secret).
    pub key_file: Vec<u8>,
    /// Embedded payload size — archive plus cipher framing.
    pub payload_bytes: u64,
    /// Cover capacity at the chosen k.
    pub capacity_bytes: u64,
    pub report: DistortionReport,
}

/// Archive → encrypt → embed. See the module doc for the RNG discipline.
pub fn embed_archive(req: &EmbedRequest, rng: &mut SplitMix64) -> Result<EmbedResult> {
    let archive = pack(req.entries)?;
    let secret = SessionSecret::generate(rng);
    let ciphertext = req.cipher.seal(&archive, &secret)?;
    let wrapped = wrap_secret(&secret, req.public, rng)?;

    let spec = PermutationSpec {
        key_number: req.key_number,
        perm_salt: secret.perm_salt,
        domain_size: req.cover.carrier_count().saturating_sub(HEADER_CARRIER_COST),
    };
    let stego = embed(req.cover, &ciphertext, req.k, &spec, req.cipher.encrypts())?;
    let report = distortion(req.cover, &stego)?;

    Ok(EmbedResult {
        stego_raw: serialize_cover(&stego),
        key_file: encode_key_file(&wrapped),
        payload_bytes: ciphertext.len() as u64,
        capacity_bytes: capacity(req.cover).payload_capacity_bytes(req.k),
        report,
    })
}

/// Reveal the archive inside `stego`. Needs both factors: the key file
/// (for the session secret) and the key number (for the permutation).
pub fn extract_archive(
    stego: &CoverObject,
    key_file: &[u8],
    private: &RsaPrivateKey,
    key_number: u64,
) -> Result<Vec<ArchiveEntry>> {
    let header = read_header(stego)?;

    let wrapped = decode_key_file(key_file)?;
    let secret = unwrap_secret(&wrapped, private)?;

    let spec = PermutationSpec {
        key_number,
        perm_salt: secret.perm_salt,
        domain_size: stego.carrier_count().saturating_sub(HEADER_CARRIER_COST),
    };
    let ciphertext = extract(stego, &spec)?;
    let archive = cipher_for_flags(header.flags).open(&ciphertext, &secret)?;
    unpack(&archive)
}
