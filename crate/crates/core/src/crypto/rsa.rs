//! Textbook RSA keypair generation and raw modular exponentiation.
//!
//! This is deliberately the unvarnished algorithm — modexp with no OAEP, no
//! blinding, no constant-time guarantees — because the library's job is to
//! demonstrate the hybrid construction, not to compete with a hardened TLS
//! stack. The one padding scheme in play (type-2 style random filler for the
//! wrapped session secret) lives in the key-file layer, not here.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::stego::prng::SplitMix64;

/// Supported modulus sizes. Small sizes exist so tests and the benchmark can
/// exercise keygen quickly; 2048 is the default for actual use.
pub const SUPPORTED_BITS: [u32; 4] = [512, 768, 1024, 2048];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaPublicKey {
    pub n: BigUint,
    pub e: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaPrivateKey {
    pub n: BigUint,
    pub d: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaKeyPair {
    pub public: RsaPublicKey,
    pub private: RsaPrivateKey,
}

impl RsaKeyPair {
    /// Modulus size in whole bytes, rounding the bit length up.
    pub fn modulus_len(&self) -> usize {
        (self.public.n.bits() as usize + 7) / 8
    }
}

const FIRST_PRIMES: [u32; 46] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211,
];

/// Miller-Rabin with `rounds` pseudorandom bases. For the candidate sizes in
/// play, 40 rounds pushes the false-positive probability below 2^-80.
fn is_probable_prime(n: &BigUint, rounds: u32, rng: &mut SplitMix64) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    if n == &two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    for &p in &FIRST_PRIMES {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 2 is odd here");
    let d = &n_minus_1 >> s;

    'witness: for _ in 0..rounds {
        // uniform-enough base in [2, n-2]
        let mut bytes = vec![0u8; ((n.bits() as usize + 7) / 8) + 8];
        rng.fill_bytes(&mut bytes);
        let a = BigUint::from_bytes_be(&bytes) % (&n_minus_1 - 1u32) + 2u32;

        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Draw a `bits`-wide odd candidate with the top two bits forced: one prime
/// at or above 1.5·2^(bits−1) times another keeps their product at the full
/// 2·bits width, never one bit short.
fn prime_candidate(bits: u32, rng: &mut SplitMix64) -> BigUint {
    let mut bytes = vec![0u8; (bits as usize + 7) / 8];
    rng.fill_bytes(&mut bytes);
    bytes[0] |= 0xC0;
    let last = bytes.len() - 1;
    bytes[last] |= 1;
    BigUint::from_bytes_be(&bytes)
}

fn generate_prime(bits: u32, rng: &mut SplitMix64) -> BigUint {
    loop {
        let candidate = prime_candidate(bits, rng);
        if is_probable_prime(&candidate, 40, rng) {
            return candidate;
        }
    }
}

/// Modular inverse via extended Euclid, tracking signs with an explicit flag
/// since BigUint is unsigned. Returns None when gcd(a, m) != 1.
fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    // invariants: old_r = old_s*a - old_s_neg-adjusted m*..., standard
    // iterative scheme with (value, is_negative) coefficient pairs
    let mut old_r = a.clone();
    let mut r = m.clone();
    let mut old_s = (BigUint::one(), false);
    let mut s = (BigUint::zero(), false);

    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r % &r;
        old_r = std::mem::replace(&mut r, next_r);

        // next_s = old_s - q * s, in signed arithmetic
        let qs = &q * &s.0;
        let next_s = if old_s.1 == s.1 {
            if old_s.0 >= qs {
                (&old_s.0 - &qs, old_s.1)
            } else {
                (&qs - &old_s.0, !old_s.1)
            }
        } else {
            (&old_s.0 + &qs, old_s.1)
        };
        old_s = std::mem::replace(&mut s, next_s);
    }

    if !old_r.is_one() {
        return None;
    }
    let (val, neg) = old_s;
    let val = val % m;
    Some(if neg && !val.is_zero() { m - val } else { val })
}

/// Deterministic RSA keypair from a seed. The same (bits, seed) pair always
/// yields the same keypair, which is what makes key files reproducible.
pub fn generate_keypair(bits: u32, seed: u64) -> Result<RsaKeyPair> {
    if !SUPPORTED_BITS.contains(&bits) {
        return Err(Error::Config(format!(
            "unsupported RSA modulus size {bits}; choose one of {SUPPORTED_BITS:?}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let e = BigUint::from(65537u32);
    let half = bits / 2;

    loop {
        let p = generate_prime(half, &mut rng);
        let q = generate_prime(half, &mut rng);
        if p == q {
            continue;
        }
        let p1 = &p - 1u32;
        let q1 = &q - 1u32;
        // e must be invertible mod lambda(n) = lcm(p-1, q-1)
        let lambda = &p1 / p1.gcd(&q1) * &q1;
        let d = match mod_inverse(&e, &lambda) {
            Some(d) => d,
            None => continue,
        };
        let n = &p * &q;
        return Ok(RsaKeyPair {
            public: RsaPublicKey { n, e: e.clone() },
            private: RsaPrivateKey {
                n: p * q,
                d,
            },
        });
    }
}

/// Raw RSA: m^exp mod n. Fails if the message value is not below the modulus.
pub fn rsa_raw(m: &BigUint, exp: &BigUint, n: &BigUint) -> Result<BigUint> {
    if m >= n {
        return Err(Error::Config(
            "message representative is not smaller than the modulus".into(),
        ));
    }
    Ok(m.modpow(exp, n))
}
