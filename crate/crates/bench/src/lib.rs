//! Benchmark helpers: deterministic pseudo-random words over the shared
//! fixture alphabets.

use tracesys::alphabet::Letter;
use tracesys::IndependenceAlphabet;

/// A reproducible word of the given length via a splitmix-style stream.
pub fn pseudo_random_word(alphabet: &IndependenceAlphabet, len: usize, seed: u64) -> Vec<Letter> {
    let mut state = seed;
    (0..len)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            Letter(((state >> 33) % alphabet.len() as u64) as u16)
        })
        .collect()
}
