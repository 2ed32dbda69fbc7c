//! Timing harness: how do the cipher strategies scale with payload size?
//!
//! Three modes, selectable by name:
//!
//! * `hybrid` — the production scheme. DES-CBC over the payload; RSA touches
//!   only the 24-byte session secret, once per message.
//! * `rsa-direct` — raw RSA applied blockwise to the whole payload, the
//!   regime the hybrid design exists to avoid. Kept honest (real modular
//!   exponentiation per block, 512-bit modulus) so the comparison means
//!   something.
//! * `des-only` — the symmetric bulk cipher alone, as a baseline.
//!
//! Each repetition times four phases — encrypt, embed, extract, decrypt —
//! and asserts the round trip before any number is reported. Covers are
//! synthesized to fit and their construction is not timed. Results go to
//! standard output as a table and optionally to a CSV file with the header
//! `size_bytes,mode,phase,seconds`, one row per (size, mode, phase,
//! repetition).

use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use stegovault::covers::{parse_cover, synth::synth_bmp};
use stegovault::crypto::des::{des_cbc, DesKey, Direction};
use stegovault::crypto::rsa::{generate_keypair, rsa_raw, RsaKeyPair};
use stegovault::crypto::{unwrap_secret, wrap_secret, SessionSecret};
use stegovault::stego::prng::SplitMix64;
use stegovault::stego::{embed, extract, PermutationSpec, HEADER_CARRIER_COST};

use crate::commands::CliError;

/// A self-contained encrypt/decrypt strategy with its own key material.
/// Unlike the library's payload ciphers these own their keys — the bench
/// compares cipher cost, not the key exchange around it.
trait BenchCipher {
    fn name(&self) -> &'static str;
    fn encrypt(&self, plain: &[u8]) -> Vec<u8>;
    fn decrypt(&self, sealed: &[u8]) -> Vec<u8>;
}

/// DES-CBC for the bulk, RSA for the 24-byte secret. The wrapped secret
/// travels in front of the ciphertext, as it would in a real message.
struct Hybrid {
    keypair: RsaKeyPair,
    secret: SessionSecret,
    filler_seed: u64,
}

impl BenchCipher for Hybrid {
    fn name(&self) -> &'static str {
        "hybrid"
    }

    fn encrypt(&self, plain: &[u8]) -> Vec<u8> {
        let mut rng = SplitMix64::new(self.filler_seed);
        let mut out = wrap_secret(&self.secret, &self.keypair.public, &mut rng)
            .expect("bench modulus is wide enough for the secret");
        let body = des_cbc(plain, &self.secret.des_key, &self.secret.iv, Direction::Encrypt)
            .expect("encryption accepts any length");
        out.extend_from_slice(&body);
        out
    }

    fn decrypt(&self, sealed: &[u8]) -> Vec<u8> {
        let width = self.keypair.modulus_len();
        let secret = unwrap_secret(&sealed[..width], &self.keypair.private)
            .expect("bench wraps under its own keypair");
        des_cbc(&sealed[width..], &secret.des_key, &secret.iv, Direction::Decrypt)
            .expect("bench ciphertext is well formed")
    }
}

/// Raw RSA over the whole payload: a u64 little-endian length prefix, then
/// blocks one byte narrower than the modulus (so every block value stays
/// below n), each encrypted to a full modulus-width block.
struct RsaDirect {
    keypair: RsaKeyPair,
}

impl RsaDirect {
    fn block_in(&self) -> usize {
        self.keypair.modulus_len() - 1
    }
}

impl BenchCipher for RsaDirect {
    fn name(&self) -> &'static str {
        "rsa-direct"
    }

    fn encrypt(&self, plain: &[u8]) -> Vec<u8> {
        let public = &self.keypair.public;
        let width = self.keypair.modulus_len();
        let mut framed = Vec::with_capacity(8 + plain.len());
        framed.extend_from_slice(&(plain.len() as u64).to_le_bytes());
        framed.extend_from_slice(plain);

        let mut out = Vec::with_capacity(framed.len() / self.block_in() * width + width);
        for chunk in framed.chunks(self.block_in()) {
            let mut block = vec![0u8; self.block_in()];
            block[..chunk.len()].copy_from_slice(chunk);
            let m = BigUint::from_bytes_be(&block);
            let c = rsa_raw(&m, &public.e, &public.n).expect("block is below the modulus");
            out.extend_from_slice(&to_fixed_be(&c, width));
        }
        out
    }

    fn decrypt(&self, sealed: &[u8]) -> Vec<u8> {
        let private = &self.keypair.private;
        let width = self.keypair.modulus_len();
        assert_eq!(sealed.len() % width, 0, "ciphertext is whole blocks");

        let mut framed = Vec::with_capacity(sealed.len() / width * self.block_in());
        for chunk in sealed.chunks(width) {
            let c = BigUint::from_bytes_be(chunk);
            let m = rsa_raw(&c, &private.d, &private.n).expect("block is below the modulus");
            framed.extend_from_slice(&to_fixed_be(&m, self.block_in()));
        }
        let len = u64::from_le_bytes(framed[..8].try_into().unwrap()) as usize;
        framed[8..8 + len].to_vec()
    }
}

/// The symmetric cipher alone.
struct DesOnly {
    key: DesKey,
    iv: [u8; 8],
}

impl BenchCipher for DesOnly {
    fn name(&self) -> &'static str {
        "des-only"
    }

    fn encrypt(&self, plain: &[u8]) -> Vec<u8> {
        des_cbc(plain, &self.key, &self.iv, Direction::Encrypt)
            .expect("encryption accepts any length")
    }

    fn decrypt(&self, sealed: &[u8]) -> Vec<u8> {
        des_cbc(sealed, &self.key, &self.iv, Direction::Decrypt)
            .expect("bench ciphertext is well formed")
    }
}

fn to_fixed_be(v: &BigUint, width: usize) -> Vec<u8> {
    let raw = v.to_bytes_be();
    assert!(raw.len() <= width, "value wider than the field");
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(&raw);
    out
}

const PHASES: [&str; 4] = ["encrypt", "embed", "extract", "decrypt"];

struct Measurement {
    size: u64,
    mode: &'static str,
    repetition: u32,
    /// Seconds per phase, in [`PHASES`] order.
    seconds: [f64; 4],
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 1,
        message: message.into(),
    }
}

fn build_cipher(mode: &str, rng: &mut SplitMix64) -> Result<Box<dyn BenchCipher>, CliError> {
    // 512-bit keys keep rsa-direct merely slow instead of unusable; the
    // asymmetry the bench demonstrates only grows with wider moduli.
    match mode {
        "hybrid" => Ok(Box::new(Hybrid {
            keypair: generate_keypair(512, rng.next_u64())?,
            secret: SessionSecret::generate(rng),
            filler_seed: rng.next_u64(),
        })),
        "rsa-direct" => Ok(Box::new(RsaDirect {
            keypair: generate_keypair(512, rng.next_u64())?,
        })),
        "des-only" => Ok(Box::new(DesOnly {
            key: DesKey(rng.next_array()),
            iv: rng.next_array(),
        })),
        other => Err(usage(format!(
            "unknown bench mode {other:?} (available: hybrid, rsa-direct, des-only)"
        ))),
    }
}

/// A synthesized BMP wide enough to hold `payload_len` bytes at k=1.
fn cover_for(payload_len: usize, seed: u64) -> stegovault::covers::CoverObject {
    const WIDTH: u32 = 2048; // row stride 6144, no padding bytes
    let carriers_needed = payload_len * 8 + HEADER_CARRIER_COST;
    let rows = (carriers_needed as u32).div_ceil(WIDTH * 3) + 1;
    parse_cover(synth_bmp(WIDTH, rows, seed)).expect("synthesized covers parse")
}

fn measure(
    size: u64,
    cipher: &dyn BenchCipher,
    repetition: u32,
    rng: &mut SplitMix64,
) -> Measurement {
    let mut payload = vec![0u8; size as usize];
    rng.fill_bytes(&mut payload);

    let start = Instant::now();
    let sealed = cipher.encrypt(&payload);
    let t_encrypt = start.elapsed().as_secs_f64();

    let cover = cover_for(sealed.len(), rng.next_u64());
    let spec = PermutationSpec {
        key_number: rng.next_u64(),
        perm_salt: rng.next_array(),
        domain_size: cover.carrier_count() - HEADER_CARRIER_COST,
    };

    let start = Instant::now();
    let stego = embed(&cover, &sealed, 1, &spec, true).expect("cover was sized to fit");
    let t_embed = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let recovered = extract(&stego, &spec).expect("embed just succeeded");
    let t_extract = start.elapsed().as_secs_f64();
    assert_eq!(recovered, sealed, "carrier round trip must be exact");

    let start = Instant::now();
    let opened = cipher.decrypt(&recovered);
    let t_decrypt = start.elapsed().as_secs_f64();
    assert_eq!(opened, payload, "cipher round trip must be exact");

    Measurement {
        size,
        mode: cipher.name(),
        repetition,
        seconds: [t_encrypt, t_embed, t_extract, t_decrypt],
    }
}

pub fn run(
    sizes: &[u64],
    modes: &[String],
    repetitions: u32,
    rng_seed: Option<u64>,
    csv: Option<&Path>,
) -> Result<(), CliError> {
    if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
        return Err(usage("sizes must be at least 1 byte"));
    }
    if modes.is_empty() {
        return Err(usage("at least one mode is required"));
    }
    if repetitions == 0 {
        return Err(usage("repetitions must be at least 1"));
    }

    let seed = rng_seed.unwrap_or_else(rand::random);
    let mut rng = SplitMix64::new(seed);

    let ciphers: Vec<Box<dyn BenchCipher>> = modes
        .iter()
        .map(|mode| build_cipher(mode, &mut rng))
        .collect::<Result<_, _>>()?;

    let mut results = Vec::new();
    println!(
        "{:>12}  {:<12}  {:>4}  {:>10}  {:>10}  {:>10}  {:>10}",
        "size_bytes", "mode", "rep", "encrypt", "embed", "extract", "decrypt"
    );
    for &size in sizes {
        for cipher in &ciphers {
            for repetition in 1..=repetitions {
                let m = measure(size, cipher.as_ref(), repetition, &mut rng);
                println!(
                    "{:>12}  {:<12}  {:>4}  {:>9.4}s  {:>9.4}s  {:>9.4}s  {:>9.4}s",
                    m.size,
                    m.mode,
                    m.repetition,
                    m.seconds[0],
                    m.seconds[1],
                    m.seconds[2],
                    m.seconds[3]
                );
                results.push(m);
            }
        }
    }

    if let Some(path) = csv {
        let mut body = String::from("size_bytes,mode,phase,seconds\n");
        for m in &results {
            for (phase, seconds) in PHASES.iter().zip(m.seconds) {
                body.push_str(&format!("{},{},{},{:.6}\n", m.size, m.mode, phase, seconds));
            }
        }
        std::fs::write(path, body).map_err(|e| {
            CliError::from(stegovault::Error::Io {
                path: path.to_path_buf(),
                source: e,
            })
        })?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
