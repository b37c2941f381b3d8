// SPDX-License-Identifier: Apache-2.0

//! Simplified Lempel-Ziv sub-string set with every sub-string represented
//! by its 32-bit hash.
//!
//! A pointer walks the input extending the current sub-string one byte at a
//! time. When the sub-string's hash is not yet in the set it is added and the
//! next sub-string starts at the following byte. A trailing sub-string that is
//! already present when the input ends is dropped.

use std::io::{self, Read};

use crate::int_set::HashedIntSet;
use crate::rolling_hash::RollingHash;

const READ_CHUNK: usize = 64 * 1024;

/// Distinct sub-string hashes of one input.
#[derive(Clone, Debug)]
pub struct LzSet {
    values: Vec<u32>,
    input_length: u64,
}

impl LzSet {
    /// Distinct hash values, in no particular order.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn substring_count(&self) -> usize {
        self.values.len()
    }

    pub fn input_length(&self) -> u64 {
        self.input_length
    }
}

/// Incremental builder; feed it chunks of any size.
#[derive(Clone, Debug)]
pub struct LzSetBuilder {
    hasher: RollingHash,
    set: HashedIntSet,
    input_length: u64,
}

impl LzSetBuilder {
    pub fn new(seed: u32) -> Self {
        LzSetBuilder {
            hasher: RollingHash::new(seed),
            set: HashedIntSet::new(),
            input_length: 0,
        }
    }

    pub fn update(&mut self, data: &[u8]) {
        for &b in data {
            self.hasher.push_byte(b);
            if self.set.insert(self.hasher.peek()) {
                self.hasher.reset();
            }
        }
        self.input_length += data.len() as u64;
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn finish(self) -> LzSet {
        LzSet {
            values: self.set.into_vec(),
            input_length: self.input_length,
        }
    }
}

/// Build the hashed LZ set of a stream in a single pass.
pub fn build_lz_set<R: Read>(mut input: R, seed: u32) -> io::Result<LzSet> {
    let mut builder = LzSetBuilder::new(seed);
    let mut buf = vec![0u8; READ_CHUNK];
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        };
        builder.update(&buf[..n]);
    }
    Ok(builder.finish())
}

pub fn lz_set_of(data: &[u8], seed: u32) -> LzSet {
    let mut builder = LzSetBuilder::new(seed);
    builder.update(data);
    builder.finish()
}
