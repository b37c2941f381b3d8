// SPDX-License-Identifier: Apache-2.0

use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name}: {source}")]
    Io {
        name: String,
        #[source]
        source: io::Error,
    },

    #[error("invalid digest name {0:?}: names may not contain line breaks")]
    InvalidName(String),

    #[error("{}malformed digest: {reason}", line_prefix(*.line))]
    Parse { line: Option<usize>, reason: String },

    #[error("{}unsupported digest format {magic:?} (expected \"lzjd\")", line_prefix(*.line))]
    UnsupportedFormat { line: Option<usize>, magic: String },

    #[error("{}unsupported lzjd digest version {version:?}", line_prefix(*.line))]
    UnsupportedVersion { line: Option<usize>, version: String },

    #[error("{}corrupt digest: {reason}", line_prefix(*.line))]
    Corrupt { line: Option<usize>, reason: String },

    #[error("incompatible digests: {a} has k={a_k} seed={a_seed}, {b} has k={b_k} seed={b_seed}")]
    Incompatible {
        a: String,
        a_k: usize,
        a_seed: u32,
        b: String,
        b_k: usize,
        b_seed: u32,
    },

    #[error("containment of {0} is undefined: digest is empty")]
    EmptyContainment(String),

    #[error("fragment {0} has zero length")]
    EmptyFragment(String),
}

fn line_prefix(line: Option<usize>) -> String {
    match line {
        Some(n) => format!("line {n}: "),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(name: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            name: name.into(),
            source,
        }
    }

    /// Attach a 1-based line number to a parse-class error.
    pub fn at_line(self, n: usize) -> Self {
        match self {
            Error::Parse { reason, .. } => Error::Parse {
                line: Some(n),
                reason,
            },
            Error::UnsupportedFormat { magic, .. } => Error::UnsupportedFormat {
                line: Some(n),
                magic,
            },
            Error::UnsupportedVersion { version, .. } => Error::UnsupportedVersion {
                line: Some(n),
                version,
            },
            Error::Corrupt { reason, .. } => Error::Corrupt {
                line: Some(n),
                reason,
            },
            other => other,
        }
    }
}
