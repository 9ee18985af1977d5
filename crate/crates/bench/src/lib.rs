//! Shared fixtures for the benchmarks.

use ospq_core::Letter;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random words over `n` modes, each of length `len`.
pub fn random_words(n: usize, len: usize, count: usize, seed: u64) -> Vec<Vec<Letter>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| {
                    let i = rng.gen_range(0..n);
                    match rng.gen_range(0..3) {
                        0 => Letter::Plus(i),
                        1 => Letter::Minus(i),
                        _ => Letter::Kappa(i, 1),
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_are_reproducible() {
        assert_eq!(random_words(2, 5, 3, 1), random_words(2, 5, 3, 1));
        assert!(random_words(3, 4, 10, 0).iter().flatten().all(|l| l.mode() < 3));
    }
}
