// SPDX-License-Identifier: Apache-2.0

//! Input generators shared by the benchmarks.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic pseudo-random bytes.
pub fn random_bytes(len: usize, seed: u64) -> Vec<u8> {
    let mut data = vec![0u8; len];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut data);
    data
}

/// Low-entropy, text-like bytes.
pub fn text_bytes(len: usize) -> Vec<u8> {
    const WORDS: [&[u8]; 8] = [b"the ", b"digest ", b"of ", b"a ", b"file ", b"is ", b"small ", b"\n"];
    let mut out = Vec::with_capacity(len);
    let mut i = 0usize;
    while out.len() < len {
        out.extend_from_slice(WORDS[(i * 7 + i / 3) % WORDS.len()]);
        i += 1;
    }
    out.truncate(len);
    out
}
