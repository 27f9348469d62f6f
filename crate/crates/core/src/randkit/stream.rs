use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One step of the SplitMix64 generator; used only to expand seeds.
pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a master seed with a textual label into a new master seed.
///
/// The label is hashed with 64-bit FNV-1a, xored into `master`, and the
/// result is passed through one SplitMix64 finalization. Used to give each
/// named experiment its own family of streams.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    let mut state = master ^ h;
    splitmix64(&mut state)
}

/// A reproducible, independent random stream.
///
/// Streams are ChaCha8 keystreams. The 256-bit key is the first four
/// SplitMix64 outputs started from `master_seed` (little-endian), and the
/// 64-bit ChaCha stream id is `stream_index`. The block counter is the only
/// mutable state, so a stream is a pure function of `(master_seed,
/// stream_index)` and distinct indices never share keystream.
#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = master_seed;
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Human-readable identity, recorded in test reports.
    pub fn identity(&self) -> String {
        format!("seed={:#x}/stream={}", self.master_seed, self.stream_index)
    }

    /// Uniform draw on the open interval (0, 1) with 53 bits of resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// Free-function form of [`RngStream::new`].
pub fn make_stream(master_seed: u64, index: u64) -> RngStream {
    RngStream::new(master_seed, index)
}
