//! Seeded randomness.
//!
//! Every stochastic routine takes an explicit 64-bit seed and draws from
//! ChaCha8 (`rand_chacha::ChaCha8Rng`), whose output stream is fixed by the
//! algorithm and identical on every platform. Independent sub-streams are
//! keyed with [`derive_seed`], a SplitMix64-style mixer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a master seed and a sequence of coordinates.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(mix64(master), |acc, &c| mix64(acc ^ mix64(c)))
}

/// Stable 64-bit hash of a string label, for use as a seed coordinate.
pub fn label_hash(label: &str) -> u64 {
    // FNV-1a
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<u64> = (0..8).map({
            let mut r = rng_from_seed(7);
            move |_| r.random()
        }).collect();
        let b: Vec<u64> = (0..8).map({
            let mut r = rng_from_seed(7);
            move |_| r.random()
        }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn derived_seeds_differ_per_coordinate() {
        let s1 = derive_seed(1, &[2, 3]);
        let s2 = derive_seed(1, &[3, 2]);
        let s3 = derive_seed(2, &[2, 3]);
        assert_ne!(s1, s2);
        assert_ne!(s1, s3);
        assert_eq!(s1, derive_seed(1, &[2, 3]));
    }
}
