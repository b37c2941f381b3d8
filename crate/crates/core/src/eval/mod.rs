// SPDX-License-Identifier: Apache-2.0

//! Evaluation harness reproducing FRASH-style sensitivity and robustness
//! tests on a synthetic corpus (or any directory of files).

pub mod corpus;
pub mod experiments;
pub mod mutation;
pub mod report;

pub use corpus::{generate_corpus, load_corpus, make_corpus, shannon_entropy, Corpus, CorpusConfig, CorpusFile};
pub use experiments::{
    alignment_test, fragment_test, noise_test, scb_test, DigestDb, FragmentMode, HarnessConfig,
    NoiseConfig, NoiseResult, NoiseTrace, RankOutcome, ScbConfig, ALIGN_FIXED_KB, ALIGN_PERCENTS,
    FRAGMENT_SIZES,
};
pub use mutation::{MutationKind, MutationSpec};
pub use report::{lower_bound_report, LowerBoundSummary, ReportRow, TestReport, TrialPoint};
