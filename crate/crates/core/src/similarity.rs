// SPDX-License-Identifier: Apache-2.0

//! Digest comparison.
//!
//! All measures are computed on the digests' value sets directly: the
//! intersection comes from a merge walk over the two ascending arrays, and
//! resemblance is `|A ∩ B| / |A ∪ B|` over those arrays.

use crate::digest::Digest;
use crate::error::{Error, Result};

/// Size of the intersection of two strictly ascending lists.
pub fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut size) = (0, 0, 0);
    // Branch-free form of the two-pointer walk: advance whichever side is
    // smaller, both on a match.
    while i < a.len() && j < b.len() {
        let (x, y) = (a[i], b[j]);
        size += (x == y) as usize;
        i += (x <= y) as usize;
        j += (y <= x) as usize;
    }
    size
}

fn check_compatible(a: &Digest, b: &Digest) -> Result<()> {
    if a.k() != b.k() || a.seed() != b.seed() {
        return Err(Error::Incompatible {
            a: a.name().to_string(),
            a_k: a.k(),
            a_seed: a.seed(),
            b: b.name().to_string(),
            b_k: b.k(),
            b_seed: b.seed(),
        });
    }
    Ok(())
}

/// Intersection and union sizes. Union is `|a| + |b| - |a ∩ b|`.
fn overlap(a: &Digest, b: &Digest) -> Result<(usize, usize)> {
    check_compatible(a, b)?;
    let i = intersection_size(a.values(), b.values());
    Ok((i, a.len() + b.len() - i))
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// `round(100 * num / den)`, halves away from zero, in exact integer arithmetic.
fn percent(num: usize, den: usize) -> u32 {
    if den == 0 {
        return 0;
    }
    ((200 * num as u64 + den as u64) / (2 * den as u64)) as u32
}

/// Jaccard resemblance; two empty digests score 0.
pub fn jaccard(a: &Digest, b: &Digest) -> Result<f64> {
    let (i, u) = overlap(a, b)?;
    Ok(ratio(i, u))
}

/// Similarity score in `0..=100`.
pub fn score(a: &Digest, b: &Digest) -> Result<u32> {
    let (i, u) = overlap(a, b)?;
    Ok(percent(i, u))
}

/// `1 - jaccard`.
pub fn distance(a: &Digest, b: &Digest) -> Result<f64> {
    Ok(1.0 - jaccard(a, b)?)
}

/// Fraction of `a`'s values found in `b`.
///
/// With fixed-size digests this is a biased estimate of true containment:
/// `b` only keeps the `k` smallest hashes of its own set, so values of `a`
/// above `b`'s cutoff are never found.
pub fn containment(a: &Digest, b: &Digest) -> Result<f64> {
    check_compatible(a, b)?;
    if a.is_empty() {
        return Err(Error::EmptyContainment(a.name().to_string()));
    }
    Ok(ratio(intersection_size(a.values(), b.values()), a.len()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityReport {
    pub name_a: String,
    pub name_b: String,
    pub score: u32,
    pub jaccard: f64,
    /// `None` when `a` is empty.
    pub containment_a_in_b: Option<f64>,
    pub containment_b_in_a: Option<f64>,
}

pub fn compare(a: &Digest, b: &Digest) -> Result<SimilarityReport> {
    let (i, u) = overlap(a, b)?;
    let contained = |x: &Digest| (!x.is_empty()).then(|| ratio(i, x.len()));
    Ok(SimilarityReport {
        name_a: a.name().to_string(),
        name_b: b.name().to_string(),
        score: percent(i, u),
        jaccard: ratio(i, u),
        containment_a_in_b: contained(a),
        containment_b_in_a: contained(b),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjustedScore {
    pub value: f64,
    /// The fragment was longer than the whole; the arguments were swapped.
    pub swapped: bool,
}

/// Score of a fragment against its candidate source, scaled by the length
/// ratio `whole / fragment` and capped at 100.
pub fn adjusted_fragment_score(fragment: &Digest, whole: &Digest) -> Result<AdjustedScore> {
    let (mut frag, mut src, mut swapped) = (fragment, whole, false);
    if frag.input_length() > src.input_length() {
        std::mem::swap(&mut frag, &mut src);
        swapped = true;
    }
    if frag.input_length() == 0 {
        return Err(Error::EmptyFragment(frag.name().to_string()));
    }
    let s = score(frag, src)? as f64;
    let value = (s * src.input_length() as f64 / frag.input_length() as f64).min(100.0);
    Ok(AdjustedScore { value, swapped })
}
