// SPDX-License-Identifier: Apache-2.0

//! Byte-at-a-time MurmurHash3 (x86, 32-bit).
//!
//! The canonical algorithm consumes the input in 4-byte little-endian blocks
//! and folds the 0-3 trailing bytes and the total length into the state only
//! at finalization. [`RollingHash`] keeps those trailing bytes in a small
//! window so that [`RollingHash::peek`] can produce the finalized hash of
//! everything pushed so far after any byte, without disturbing the state.

const C1: u32 = 0xcc9e_2d51;
const C2: u32 = 0x1b87_3593;

#[inline(always)]
fn scramble(k: u32) -> u32 {
    k.wrapping_mul(C1).rotate_left(15).wrapping_mul(C2)
}

#[inline(always)]
fn mix_block(h: u32, k: u32) -> u32 {
    (h ^ scramble(k))
        .rotate_left(13)
        .wrapping_mul(5)
        .wrapping_add(0xe654_6b64)
}

#[inline(always)]
pub(crate) fn fmix32(mut h: u32) -> u32 {
    h ^= h >> 16;
    h = h.wrapping_mul(0x85eb_ca6b);
    h ^= h >> 13;
    h = h.wrapping_mul(0xc2b2_ae35);
    h ^= h >> 16;
    h
}

/// Streaming MurmurHash3_x86_32 that can be finalized after every byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RollingHash {
    seed: u32,
    /// Mix of all complete 4-byte blocks.
    state: u32,
    /// Pending bytes packed little-endian; exactly `len % 4` of them are live.
    tail: u32,
    len: u64,
}

impl RollingHash {
    pub fn new(seed: u32) -> Self {
        RollingHash {
            seed,
            state: seed,
            tail: 0,
            len: 0,
        }
    }

    #[inline]
    pub fn seed(&self) -> u32 {
        self.seed
    }

    /// Bytes pushed since construction or the last reset.
    #[inline]
    pub fn len(&self) -> u64 {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of bytes waiting in the tail window (always `len % 4`).
    #[inline]
    pub fn pending(&self) -> usize {
        (self.len & 3) as usize
    }

    #[inline(always)]
    pub fn push_byte(&mut self, b: u8) {
        let shift = (self.len & 3) * 8;
        self.tail |= (b as u32) << shift;
        self.len += 1;
        if self.len & 3 == 0 {
            self.state = mix_block(self.state, self.tail);
            self.tail = 0;
        }
    }

    pub fn push(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.push_byte(b);
        }
    }

    /// Finalized hash of all bytes pushed since the last reset.
    #[inline(always)]
    pub fn peek(&self) -> u32 {
        let mut h = self.state;
        if self.len & 3 != 0 {
            h ^= scramble(self.tail);
        }
        // The reference implementation takes the length as a 32-bit int.
        fmix32(h ^ self.len as u32)
    }

    #[inline(always)]
    pub fn reset(&mut self) {
        self.state = self.seed;
        self.tail = 0;
        self.len = 0;
    }
}

impl Default for RollingHash {
    fn default() -> Self {
        RollingHash::new(0)
    }
}

/// One-shot convenience wrapper over [`RollingHash`].
pub fn murmur3_32(bytes: &[u8], seed: u32) -> u32 {
    let mut h = RollingHash::new(seed);
    h.push(bytes);
    h.peek()
}
