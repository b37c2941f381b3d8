// SPDX-License-Identifier: Apache-2.0

//! Insert-only open-addressing set of 32-bit hash values.
//!
//! Values are already uniformly distributed hashes, so the slot index is the
//! value itself masked to the table size. Collisions are resolved by double
//! hashing: the probe stride comes from the value's high half and is forced
//! odd, which makes every slot of a power-of-two table reachable.

const INITIAL_CAPACITY: usize = 1024;
// Grow when count / capacity would exceed 7/10.
const LOAD_NUM: usize = 7;
const LOAD_DEN: usize = 10;

#[derive(Clone, Debug)]
pub struct HashedIntSet {
    slots: Vec<u32>,
    occupied: Vec<bool>,
    len: usize,
}

impl Default for HashedIntSet {
    fn default() -> Self {
        Self::new()
    }
}

impl HashedIntSet {
    pub fn new() -> Self {
        Self::with_capacity(INITIAL_CAPACITY)
    }

    /// Table with at least `capacity` slots (rounded up to a power of two, minimum 2).
    pub fn with_capacity(capacity: usize) -> Self {
        let capacity = capacity.max(2).next_power_of_two();
        HashedIntSet {
            slots: vec![0; capacity],
            occupied: vec![false; capacity],
            len: 0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    #[inline(always)]
    fn stride(v: u32, mask: usize) -> usize {
        (v.rotate_right(16) as usize | 1) & mask
    }

    /// Slot holding `v`, or the first free slot on its probe sequence.
    #[inline(always)]
    fn find_slot(&self, v: u32) -> usize {
        let mask = self.slots.len() - 1;
        let mut idx = v as usize & mask;
        let stride = Self::stride(v, mask);
        loop {
            if !self.occupied[idx] || self.slots[idx] == v {
                return idx;
            }
            idx = (idx + stride) & mask;
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        let idx = self.find_slot(v);
        self.occupied[idx]
    }

    /// Returns `true` iff `v` was not already present.
    #[inline]
    pub fn insert(&mut self, v: u32) -> bool {
        if (self.len + 1) * LOAD_DEN > self.slots.len() * LOAD_NUM {
            self.grow();
        }
        let idx = self.find_slot(v);
        if self.occupied[idx] {
            return false;
        }
        self.occupied[idx] = true;
        self.slots[idx] = v;
        self.len += 1;
        true
    }

    fn grow(&mut self) {
        let capacity = self.slots.len() * 2;
        let old_slots = std::mem::replace(&mut self.slots, vec![0; capacity]);
        let old_occupied = std::mem::replace(&mut self.occupied, vec![false; capacity]);
        for (v, filled) in old_slots.into_iter().zip(old_occupied) {
            if filled {
                let idx = self.find_slot(v);
                self.occupied[idx] = true;
                self.slots[idx] = v;
            }
        }
    }

    /// Values in table order (unordered).
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.slots
            .iter()
            .zip(&self.occupied)
            .filter(|(_, &filled)| filled)
            .map(|(&v, _)| v)
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.slots
            .into_iter()
            .zip(self.occupied)
            .filter_map(|(v, filled)| filled.then_some(v))
            .collect()
    }
}
