//! Payload cipher strategies, selectable by name.
//!
//! Two are built in: `des-hybrid` (the default — DES-CBC over the archive,
//! keyed from the session secret) and `none` (archive embedded as-is).
//! Either way the session secret is generated and the key file written,
//! because the permutation salt inside it is one of the two extraction
//! factors; `none` only skips the encryption pass, not the key exchange.
//!
//! The stego header records which convention the payload follows (flag
//! bit 0), so extraction picks the strategy from the stego object itself
//! rather than trusting the operator to remember.

use crate::crypto::des::{des_cbc, Direction};
use crate::crypto::SessionSecret;
use crate::error::{Error, Result};

/// A reversible transform between archive bytes and embedded payload bytes.
pub trait PayloadCipher: Send + Sync {
    fn name(&self) -> &'static str;
    /// Value of the stego header's encrypted flag for this strategy.
    fn encrypts(&self) -> bool;
    fn seal(&self, plain: &[u8], secret: &SessionSecret) -> Result<Vec<u8>>;
    fn open(&self, sealed: &[u8], secret: &SessionSecret) -> Result<Vec<u8>>;
}

/// DES-CBC under the session secret's key and IV.
pub struct DesHybrid;

impl PayloadCipher for DesHybrid {
    fn name(&self) -> &'static str {
        "des-hybrid"
    }

    fn encrypts(&self) -> bool {
        true
    }

    fn seal(&self, plain: &[u8], secret: &SessionSecret) -> Result<Vec<u8>> {
        des_cbc(plain, &secret.des_key, &secret.iv, Direction::Encrypt)
    }

    fn open(&self, sealed: &[u8], secret: &SessionSecret) -> Result<Vec<u8>> {
        des_cbc(sealed, &secret.des_key, &secret.iv, Direction::Decrypt)
    }
}

/// No encryption: the archive goes in as-is. The permutation (and therefore
/// the key file and key number) still gates extraction.
pub struct PlainPayload;

impl PayloadCipher for PlainPayload {
    fn name(&self) -> &'static str {
        "none"
    }

    fn encrypts(&self) -> bool {
        false
    }

    fn seal(&self, plain: &[u8], _secret: &SessionSecret) -> Result<Vec<u8>> {
        Ok(plain.to_vec())
    }

    fn open(&self, sealed: &[u8], _secret: &SessionSecret) -> Result<Vec<u8>> {
        Ok(sealed.to_vec())
    }
}

static DES_HYBRID: DesHybrid = DesHybrid;
static PLAIN: PlainPayload = PlainPayload;

/// All built-in strategies.
pub fn cipher_registry() -> &'static [&'static dyn PayloadCipher] {
    static REGISTRY: [&dyn PayloadCipher; 2] = [&DES_HYBRID, &PLAIN];
    &REGISTRY
}

/// Look a strategy up by its CLI name.
pub fn cipher_by_name(name: &str) -> Result<&'static dyn PayloadCipher> {
    cipher_registry()
        .iter()
        .copied()
        .find(|c| c.name() == name)
        .ok_or_else(|| {
            let names: Vec<&str> = cipher_registry().iter().map(|c| c.name()).collect();
            Error::Config(format!(
                "unknown cipher '{name}'; available: {}",
                names.join(", ")
            ))
        })
}

/// The strategy a stego header's flags demand.
pub fn cipher_for_flags(flags: u8) -> &'static dyn PayloadCipher {
    if flags & crate::stego::FLAG_ENCRYPTED != 0 {
        &DES_HYBRID
    } else {
        &PLAIN
    }
}
