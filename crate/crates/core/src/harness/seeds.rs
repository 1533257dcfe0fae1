use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams of one realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedTag {
    Turbulence = 1,
    Measurement = 2,
    Noise = 3,
    Screens = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit hash of `(master, index, tag)`.
pub fn child_seed(master: u64, index: u64, tag: SeedTag) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ index) ^ tag as u64)
}

pub fn child_rng(master: u64, index: u64, tag: SeedTag) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(master, index, tag))
}
