// SPDX-License-Identifier: Apache-2.0

//! Derived test files with a known edit distance to their source.

use rand::{Rng, RngCore};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationKind {
    FragmentEnd,
    FragmentRandom,
    AlignFixed,
    AlignPercent,
    Noise,
    Scb,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutationSpec {
    pub kind: MutationKind,
    /// Fragment size %, padding % or bytes, edit count, or common block bytes.
    pub parameter: f64,
    /// Upper bound on the Levenshtein distance between source and mutant, exact
    /// for the way each mutant is built.
    pub analytic_edit_distance: u64,
    pub source_len: u64,
    pub mutant_len: u64,
}

impl MutationSpec {
    /// `100 * (1 - edit_distance / max(|A|, |B|))`: the share of bytes the
    /// two files have in common.
    pub fn expected_min_score(&self) -> f64 {
        let longest = self.source_len.max(self.mutant_len);
        if longest == 0 {
            return 100.0;
        }
        100.0 * (1.0 - self.analytic_edit_distance as f64 / longest as f64)
    }
}

fn fragment_len(len: usize, percent: f64) -> usize {
    ((len as f64 * percent / 100.0).round() as usize).clamp(1.min(len), len)
}

/// Keep the first `percent`% of the file.
pub fn fragment_end(data: &[u8], percent: f64) -> (Vec<u8>, MutationSpec) {
    let keep = fragment_len(data.len(), percent);
    let spec = MutationSpec {
        kind: MutationKind::FragmentEnd,
        parameter: percent,
        analytic_edit_distance: (data.len() - keep) as u64,
        source_len: data.len() as u64,
        mutant_len: keep as u64,
    };
    (data[..keep].to_vec(), spec)
}

/// Keep `percent`% of the file, cutting a uniformly drawn share of the
/// removed bytes from the front and the rest from the end.
pub fn fragment_random<R: Rng>(data: &[u8], percent: f64, rng: &mut R) -> (Vec<u8>, MutationSpec) {
    let keep = fragment_len(data.len(), percent);
    let removed = data.len() - keep;
    let front = if removed == 0 { 0 } else { rng.gen_range(0..=removed) };
    let spec = MutationSpec {
        kind: MutationKind::FragmentRandom,
        parameter: percent,
        analytic_edit_distance: removed as u64,
        source_len: data.len() as u64,
        mutant_len: keep as u64,
    };
    (data[front..front + keep].to_vec(), spec)
}

/// Prepend `added` random bytes.
pub fn prepend_random<R: RngCore>(
    data: &[u8],
    added: usize,
    kind: MutationKind,
    parameter: f64,
    rng: &mut R,
) -> (Vec<u8>, MutationSpec) {
    let mut out = vec![0u8; added + data.len()];
    rng.fill_bytes(&mut out[..added]);
    out[added..].copy_from_slice(data);
    let spec = MutationSpec {
        kind,
        parameter,
        analytic_edit_distance: added as u64,
        source_len: data.len() as u64,
        mutant_len: out.len() as u64,
    };
    (out, spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Edit {
    Insert,
    Delete,
    Substitute,
}

/// Apply `count` single-byte edits (insert, delete or substitute, equally
/// likely) at uniformly random offsets in one pass over `data`.
///
/// Offsets are drawn against the input length, so the batch behaves like
/// `count` sequential edits whose positions do not interact.
pub fn apply_random_edits<R: Rng>(data: &[u8], count: usize, rng: &mut R) -> Vec<u8> {
    let mut edits: Vec<(usize, Edit)> = (0..count)
        .map(|_| {
            let pos = rng.gen_range(0..=data.len());
            let op = match rng.gen_range(0..3) {
                0 => Edit::Insert,
                1 => Edit::Delete,
                _ => Edit::Substitute,
            };
            (pos, op)
        })
        .collect();
    edits.sort_unstable_by_key(|e| e.0);

    let mut out = Vec::with_capacity(data.len() + count);
    let mut cursor = 0;
    for (pos, op) in edits {
        let pos = pos.max(cursor);
        out.extend_from_slice(&data[cursor..pos]);
        cursor = pos;
        // Deleting or replacing past the end (or a byte already edited) becomes an insert.
        let op = if cursor == data.len() { Edit::Insert } else { op };
        match op {
            Edit::Insert => out.push(rng.gen()),
            Edit::Delete => cursor += 1,
            Edit::Substitute => {
                out.push(data[cursor] ^ rng.gen_range(1..=255u8));
                cursor += 1;
            }
        }
    }
    out.extend_from_slice(&data[cursor..]);
    out
}

/// Two random files of `total` bytes sharing one identical `block` at the same offset.
pub fn scb_pair<R: Rng>(total: usize, block: usize, rng: &mut R) -> (Vec<u8>, Vec<u8>, MutationSpec) {
    let block = block.min(total);
    let mut a = vec![0u8; total];
    let mut b = vec![0u8; total];
    rng.fill_bytes(&mut a);
    rng.fill_bytes(&mut b);
    let offset = rng.gen_range(0..=total - block);
    b[offset..offset + block].copy_from_slice(&a[offset..offset + block]);
    let spec = MutationSpec {
        kind: MutationKind::Scb,
        parameter: block as f64,
        analytic_edit_distance: (total - block) as u64,
        source_len: total as u64,
        mutant_len: total as u64,
    };
    (a, b, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Classic O(nm) Levenshtein distance.
    fn levenshtein(a: &[u8], b: &[u8]) -> usize {
        let mut prev: Vec<usize> = (0..=b.len()).collect();
        let mut cur = vec![0; b.len() + 1];
        for (i, &x) in a.iter().enumerate() {
            cur[0] = i + 1;
            for (j, &y) in b.iter().enumerate() {
                cur[j + 1] = (prev[j] + (x != y) as usize).min(prev[j + 1] + 1).min(cur[j] + 1);
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        prev[b.len()]
    }

    fn sample(n: usize) -> Vec<u8> {
        (0..n).map(|i| (i * 7 % 251) as u8).collect()
    }

    #[test]
    fn fragments() {
        let data = sample(1000);
        let (f, spec) = fragment_end(&data, 10.0);
        assert_eq!(f, &data[..100]);
        assert_eq!(spec.analytic_edit_distance, 900);
        assert!((spec.expected_min_score() - 10.0).abs() < 1e-12);
        assert_eq!(levenshtein(&data, &f), 900);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (f, spec) = fragment_random(&data, 25.0, &mut rng);
        assert_eq!(f.len(), 250);
        assert!(data.windows(250).any(|w| w == f.as_slice()));
        assert_eq!(spec.analytic_edit_distance, 750);

        let (f, _) = fragment_end(&data, 100.0);
        assert_eq!(f, data);
        let (f, _) = fragment_end(&sample(50), 1.0);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn padding() {
        let data = sample(400);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (p, spec) = prepend_random(&data, 400, MutationKind::AlignPercent, 100.0, &mut rng);
        assert_eq!(&p[400..], &data[..]);
        assert!((spec.expected_min_score() - 50.0).abs() < 1e-12);
        let (p, spec) = prepend_random(&data, 0, MutationKind::AlignPercent, 0.0, &mut rng);
        assert_eq!(p, data);
        assert_eq!(spec.expected_min_score(), 100.0);
    }

    #[test]
    fn edit_batches_respect_their_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for count in [0usize, 1, 2, 5, 17, 60] {
            let data = sample(300);
            let out = apply_random_edits(&data, count, &mut rng);
            assert!(levenshtein(&data, &out) <= count, "count {count}");
            assert!(out.len().abs_diff(data.len()) <= count);
        }
        let out = apply_random_edits(&[], 5, &mut rng);
        assert_eq!(out.len(), 5);
    }

    #[test]
    fn scb_files_share_exactly_one_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (a, b, spec) = scb_pair(4096, 1024, &mut rng);
        let same = a.iter().zip(&b).filter(|(x, y)| x == y).count();
        // Random filler agrees by chance on about 1/256 of the other bytes.
        assert!((1024..1024 + 40).contains(&same), "{same}");
        assert_eq!(spec.analytic_edit_distance, 3072);
        assert!((spec.expected_min_score() - 25.0).abs() < 1e-12);
        let (a, b, _) = scb_pair(2048, 2048, &mut rng);
        assert_eq!(a, b);
    }
}
