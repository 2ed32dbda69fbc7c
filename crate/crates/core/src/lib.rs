//! stegovault — hide encrypted file archives inside ordinary-looking media.
//!
//! The pipeline: files are packed into a flat archive, encrypted with DES
//! under a fresh session secret, and the ciphertext is written into the
//! least-significant bits of a lossless cover (24-bit BMP or PCM WAV) in an
//! order determined by a keyed permutation. The session secret travels in a
//! separate key file, wrapped under RSA, so revealing the payload takes two
//! factors: the key file (plus the matching private key) and the shared key
//! number.
//!
//! Module map:
//!
//! * [`archive`] — the multi-file container and its CRC-checked wire format
//! * [`crypto`] — DES, textbook RSA, session secrets, key files
//! * [`covers`] — BMP/WAV parsing and the carrier-byte model
//! * [`stego`] — the embedded header, the keyed permutation, embed/extract
//! * [`metrics`] — MSE/PSNR and the changed-bits audit
//! * [`cipher`] — payload cipher strategies (`des-hybrid`, `none`)
//! * [`pipeline`] — the end-to-end chains the CLI wraps
//!
//! # Security status
//!
//! This crate is a faithful implementation of a classic construction, and
//! that construction is **not** state of the art. Single DES has a 56-bit
//! key; the RSA layer is raw textbook modexp with ad-hoc padding; LSB
//! embedding falls to routine statistical steganalysis. Treat it as a study
//! object and a container format, not as protection for secrets that matter.

pub mod archive;
pub mod cipher;
pub mod covers;
pub mod crypto;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod stego;

pub use error::{Error, Result};
