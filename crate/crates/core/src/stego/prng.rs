//! SplitMix64, the deterministic generator behind carrier permutation,
//! session secrets and prime candidates. Chosen because a step is a handful
//! of integer ops and the output stream is identical on every platform.

/// One SplitMix64 step. Returns the advanced state and the 64-bit output.
pub fn prng_next(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (state, z ^ (z >> 31))
}

/// Stream wrapper around [`prng_next`].
#[derive(Debug, Clone, Copy)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        let (state, out) = prng_next(self.state);
        self.state = state;
        out
    }

    /// Fills `buf` from successive outputs, little-endian within each output.
    pub fn fill_bytes(&mut self, buf: &mut [u8]) {
        for chunk in buf.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }

    pub fn next_array<const N: usize>(&mut self) -> [u8; N] {
        let mut out = [0u8; N];
        self.fill_bytes(&mut out);
        out
    }

    /// A nonzero byte, by redraw.
    pub fn next_nonzero_byte(&mut self) -> u8 {
        loop {
            let b = (self.next_u64() & 0xFF) as u8;
            if b != 0 {
                return b;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Golden outputs frozen from an independent implementation of the same
    // step function; the seed-0 run also matches the original C reference.
    #[test]
    fn golden_sequence_seed_zero() {
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
        assert_eq!(rng.next_u64(), 0xF88B_B8A8_724C_81EC);
    }

    #[test]
    fn golden_sequence_seed_42() {
        let mut rng = SplitMix64::new(42);
        assert_eq!(rng.next_u64(), 0xBDD7_3226_2FEB_6E95);
        assert_eq!(rng.next_u64(), 0x28EF_E333_B266_F103);
        assert_eq!(rng.next_u64(), 0x4752_6757_130F_9F52);
        assert_eq!(rng.next_u64(), 0x581C_E1FF_0E4A_E394);
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = SplitMix64::new(0xDEAD_BEEF);
        let mut b = SplitMix64::new(0xDEAD_BEEF);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn neighboring_seeds_diverge() {
        use std::collections::HashSet;
        let firsts: HashSet<u64> = (0..1000u64).map(|s| prng_next(s).1).collect();
        assert_eq!(firsts.len(), 1000);
    }

    #[test]
    fn fill_bytes_matches_word_stream() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        let mut buf = [0u8; 12];
        a.fill_bytes(&mut buf);
        let w0 = b.next_u64().to_le_bytes();
        let w1 = b.next_u64().to_le_bytes();
        assert_eq!(&buf[..8], &w0);
        assert_eq!(&buf[8..], &w1[..4]);
    }
}
