// SPDX-License-Identifier: Apache-2.0

//! Slow reference computations for tests and calibration.
//!
//! [`exact_lz_set`] runs the sub-string parse on real byte strings, so it is
//! free of hash collisions. [`full_hash_jaccard`] uses the hashed set but
//! never truncates it, isolating min-hash error from collision error.
//! Inputs are expected to be at most [`MAX_ORACLE_INPUT`] bytes.

use std::collections::HashSet;

use crate::lz_set::lz_set_of;
use crate::similarity::intersection_size;

pub const MAX_ORACLE_INPUT: usize = 1 << 20;

/// Exact LZ sub-string set of `input`.
pub fn exact_lz_set(input: &[u8]) -> HashSet<Vec<u8>> {
    exact_lz_set_borrowed(input)
        .into_iter()
        .map(<[u8]>::to_vec)
        .collect()
}

pub fn exact_lz_set_borrowed(input: &[u8]) -> HashSet<&[u8]> {
    let mut set = HashSet::new();
    let mut start = 0;
    let mut end = 1;
    while end <= input.len() {
        let candidate = &input[start..end];
        if set.insert(candidate) {
            start = end;
        }
        end += 1;
    }
    set
}

fn jaccard_of<T: Eq + std::hash::Hash>(a: &HashSet<T>, b: &HashSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Jaccard similarity of the exact sub-string sets.
pub fn exact_jaccard(a: &[u8], b: &[u8]) -> f64 {
    jaccard_of(&exact_lz_set_borrowed(a), &exact_lz_set_borrowed(b))
}

/// Complete hashed LZ set, sorted ascending.
pub fn full_hash_set(data: &[u8], seed: u32) -> Vec<u32> {
    let mut v = lz_set_of(data, seed).into_values();
    v.sort_unstable();
    v
}

/// Jaccard of two complete, sorted hash sets.
pub fn sorted_set_jaccard(a: &[u32], b: &[u32]) -> f64 {
    let inter = intersection_size(a, b);
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Jaccard over the untruncated hashed LZ sets.
pub fn full_hash_jaccard(a: &[u8], b: &[u8], seed: u32) -> f64 {
    sorted_set_jaccard(&full_hash_set(a, seed), &full_hash_set(b, seed))
}
