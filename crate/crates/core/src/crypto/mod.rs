//! Hybrid key handling: DES session secrets wrapped under textbook RSA.
//!
//! Three small wire formats live here, all little-endian for lengths and
//! big-endian for integer bodies:
//!
//! * `SVP1` — public key: `"SVP1" | n_len u16 | n | e_len u16 | e`
//! * `SVS1` — private key: `"SVS1" | n_len u16 | n | d_len u16 | d`
//! * `SVK1` — wrapped session secret: `"SVK1" | modulus_len u16 | wrapped`
//!   where `wrapped` is exactly `modulus_len` bytes of RSA ciphertext.
//!
//! The session secret is 24 bytes — DES key, permutation salt, CBC IV — and
//! is padded type-2 style (`00 02 <nonzero filler> 00 <secret>`) before the
//! RSA operation, so unwrapping with the wrong private key fails loudly
//! instead of yielding plausible garbage.

pub mod des;
pub mod rsa;

use std::path::Path;

use num_bigint::BigUint;

use crate::archive::crc32;
use crate::error::{Error, Result};
use crate::stego::prng::SplitMix64;
use des::DesKey;
use rsa::{rsa_raw, RsaPrivateKey, RsaPublicKey};

pub const KEY_FILE_MAGIC: &[u8; 4] = b"SVK1";
pub const PUBLIC_KEY_MAGIC: &[u8; 4] = b"SVP1";
pub const PRIVATE_KEY_MAGIC: &[u8; 4] = b"SVS1";

/// Serialized length of a [`SessionSecret`].
pub const SECRET_LEN: usize = 24;

/// Everything the symmetric side of an embed needs, generated fresh per
/// embed and stored only in RSA-wrapped form.
#[derive(Clone, PartialEq, Eq)]
pub struct SessionSecret {
    pub des_key: DesKey,
    pub perm_salt: [u8; 8],
    pub iv: [u8; 8],
}

impl std::fmt::Debug for SessionSecret {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SessionSecret(..)")
    }
}

impl SessionSecret {
    pub fn generate(rng: &mut SplitMix64) -> Self {
        SessionSecret {
            des_key: DesKey(rng.next_array()),
            perm_salt: rng.next_array(),
            iv: rng.next_array(),
        }
    }

    pub fn to_bytes(&self) -> [u8; SECRET_LEN] {
        let mut out = [0u8; SECRET_LEN];
        out[..8].copy_from_slice(&self.des_key.0);
        out[8..16].copy_from_slice(&self.perm_salt);
        out[16..].copy_from_slice(&self.iv);
        out
    }

    pub fn from_bytes(bytes: &[u8; SECRET_LEN]) -> Self {
        SessionSecret {
            des_key: DesKey(bytes[..8].try_into().unwrap()),
            perm_salt: bytes[8..16].try_into().unwrap(),
            iv: bytes[16..].try_into().unwrap(),
        }
    }
}

fn modulus_len(n: &BigUint) -> usize {
    (n.bits() as usize + 7) / 8
}

/// Big-endian serialization left-padded with zeros to exactly `width` bytes.
fn to_fixed_be(v: &BigUint, width: usize) -> Vec<u8> {
    let raw = v.to_bytes_be();
    debug_assert!(raw.len() <= width);
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(&raw);
    out
}

/// RSA-encrypt a session secret under `public`. The filler bytes come from
/// the caller's RNG, so a seeded RNG makes the whole wrap reproducible.
pub fn wrap_secret(
    secret: &SessionSecret,
    public: &RsaPublicKey,
    rng: &mut SplitMix64,
) -> Result<Vec<u8>> {
    let width = modulus_len(&public.n);
    // 00 02 + at least 8 filler + 00 around the secret
    if width < SECRET_LEN + 11 {
        return Err(Error::Config(format!(
            "modulus of {width} bytes is too small to wrap a {SECRET_LEN}-byte secret"
        )));
    }
    let mut padded = Vec::with_capacity(width);
    padded.push(0x00);
    padded.push(0x02);
    for _ in 0..width - SECRET_LEN - 3 {
        padded.push(rng.next_nonzero_byte());
    }
    padded.push(0x00);
    padded.extend_from_slice(&secret.to_bytes());
    debug_assert_eq!(padded.len(), width);

    let m = BigUint::from_bytes_be(&padded);
    let c = rsa_raw(&m, &public.e, &public.n)?;
    Ok(to_fixed_be(&c, width))
}

/// Invert [`wrap_secret`]. Any framing defect in the decrypted block maps to
/// [`Error::Key`] — by far the most likely cause is a key file that does not
/// belong to this private key.
pub fn unwrap_secret(wrapped: &[u8], private: &RsaPrivateKey) -> Result<SessionSecret> {
    let width = modulus_len(&private.n);
    if wrapped.len() != width {
        return Err(Error::Key(format!(
            "wrapped secret is {} bytes but the key modulus is {width}",
            wrapped.len()
        )));
    }
    let c = BigUint::from_bytes_be(wrapped);
    if c >= private.n {
        return Err(Error::Key(
            "wrapped secret does not match the key modulus".into(),
        ));
    }
    let padded = to_fixed_be(&rsa_raw(&c, &private.d, &private.n)?, width);

    let framing = Err(Error::Key(
        "decrypted secret has invalid framing; wrong private key or corrupt key file".into(),
    ));
    if padded[0] != 0x00 || padded[1] != 0x02 {
        return framing;
    }
    let Some(sep) = padded[2..].iter().position(|&b| b == 0) else {
        return framing;
    };
    let body = &padded[2 + sep + 1..];
    if sep < 8 || body.len() != SECRET_LEN {
        return framing;
    }
    Ok(SessionSecret::from_bytes(body.try_into().unwrap()))
}

/// Short hex identifier shared by both halves of a keypair (a CRC of the
/// modulus), for telling key files apart in CLI output.
pub fn fingerprint(n: &BigUint) -> String {
    format!("{:08x}", crc32(&n.to_bytes_be()))
}

// --- wire encoding helpers ------------------------------------------------

fn put_u16_prefixed(out: &mut Vec<u8>, body: &[u8]) {
    debug_assert!(body.len() <= u16::MAX as usize);
    out.extend_from_slice(&(body.len() as u16).to_le_bytes());
    out.extend_from_slice(body);
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Format(format!("{} is truncated", self.what)));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn take_u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn take_prefixed(&mut self) -> Result<&'a [u8]> {
        let len = self.take_u16()? as usize;
        self.take(len)
    }

    fn expect_magic(&mut self, magic: &[u8; 4]) -> Result<()> {
        if self.take(4)? != magic {
            return Err(Error::Format(format!(
                "not a {} file (bad magic)",
                self.what
            )));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format(format!(
                "{} has {} trailing bytes",
                self.what,
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

pub fn encode_public_key(key: &RsaPublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(PUBLIC_KEY_MAGIC);
    put_u16_prefixed(&mut out, &key.n.to_bytes_be());
    put_u16_prefixed(&mut out, &key.e.to_bytes_be());
    out
}

pub fn decode_public_key(bytes: &[u8]) -> Result<RsaPublicKey> {
    let mut r = Reader { buf: bytes, pos: 0, what: "public key" };
    r.expect_magic(PUBLIC_KEY_MAGIC)?;
    let n = BigUint::from_bytes_be(r.take_prefixed()?);
    let e = BigUint::from_bytes_be(r.take_prefixed()?);
    r.finish()?;
    Ok(RsaPublicKey { n, e })
}

pub fn encode_private_key(key: &RsaPrivateKey) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(PRIVATE_KEY_MAGIC);
    put_u16_prefixed(&mut out, &key.n.to_bytes_be());
    put_u16_prefixed(&mut out, &key.d.to_bytes_be());
    out
}

pub fn decode_private_key(bytes: &[u8]) -> Result<RsaPrivateKey> {
    let mut r = Reader { buf: bytes, pos: 0, what: "private key" };
    r.expect_magic(PRIVATE_KEY_MAGIC)?;
    let n = BigUint::from_bytes_be(r.take_prefixed()?);
    let d = BigUint::from_bytes_be(r.take_prefixed()?);
    r.finish()?;
    Ok(RsaPrivateKey { n, d })
}

pub fn encode_key_file(wrapped: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(KEY_FILE_MAGIC);
    put_u16_prefixed(&mut out, wrapped);
    out
}

pub fn decode_key_file(bytes: &[u8]) -> Result<Vec<u8>> {
    let mut r = Reader { buf: bytes, pos: 0, what: "key file" };
    r.expect_magic(KEY_FILE_MAGIC)?;
    let wrapped = r.take_prefixed()?.to_vec();
    r.finish()?;
    Ok(wrapped)
}

// --- path-level convenience -----------------------------------------------

pub fn save_public_key(path: &Path, key: &RsaPublicKey) -> Result<()> {
    std::fs::write(path, encode_public_key(key)).map_err(|e| Error::io(path, e))
}

pub fn load_public_key(path: &Path) -> Result<RsaPublicKey> {
    decode_public_key(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
}

pub fn save_private_key(path: &Path, key: &RsaPrivateKey) -> Result<()> {
    std::fs::write(path, encode_private_key(key)).map_err(|e| Error::io(path, e))
}

pub fn load_private_key(path: &Path) -> Result<RsaPrivateKey> {
    decode_private_key(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
}

pub fn save_key_file(path: &Path, wrapped: &[u8]) -> Result<()> {
    std::fs::write(path, encode_key_file(wrapped)).map_err(|e| Error::io(path, e))
}

pub fn load_key_file(path: &Path) -> Result<Vec<u8>> {
    decode_key_file(&std::fs::read(path).map_err(|e| Error::io(path, e))?)
}
