// SPDX-License-Identifier: Apache-2.0

//! Lempel-Ziv Jaccard Distance (LZJD) similarity digests.
//!
//! A file is parsed into its set of Lempel-Ziv sub-strings, each represented
//! by a streaming MurmurHash3 value. The 1024 smallest hashes form a digest of
//! at most 4 KiB, and two digests are compared by the Jaccard similarity of
//! their value sets in a single merge walk.
//!
//! ```
//! use lzjd_core::{digest_bytes, score, DEFAULT_K};
//!
//! let a = digest_bytes(b"hello hello hello world", "a", DEFAULT_K, 0);
//! let b = digest_bytes(b"hello hello hello there", "b", DEFAULT_K, 0);
//! assert_eq!(score(&a, &a).unwrap(), 100);
//! assert!(score(&a, &b).unwrap() > 0);
//! ```

pub mod digest;
pub mod error;
pub mod eval;
pub mod int_set;
pub mod lz_set;
pub mod oracle;
pub mod rolling_hash;
pub mod similarity;

pub use digest::{
    digest_bytes, digest_file, digest_stream, k_smallest, load_digest_db, read_digest_db, Digest,
    DEFAULT_K, DEFAULT_SEED,
};
pub use error::{Error, Result};
pub use int_set::HashedIntSet;
pub use lz_set::{build_lz_set, lz_set_of, LzSet, LzSetBuilder};
pub use rolling_hash::{murmur3_32, RollingHash};
pub use similarity::{
    adjusted_fragment_score, compare, containment, distance, intersection_size, jaccard, score,
    AdjustedScore, SimilarityReport,
};
