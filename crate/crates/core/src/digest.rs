// SPDX-License-Identifier: Apache-2.0

//! Fixed-size min-hash digests and their line-oriented text format.
//!
//! A digest keeps the `k` smallest distinct sub-string hashes of a file in
//! ascending order. On disk each digest is one line:
//!
//! ```text
//! lzjd:1:<k>:<seed>:<input length>:<escaped name>:<base64 payload>
//! ```
//!
//! The payload is every value as 4 big-endian bytes, standard alphabet with
//! padding. In names `%` is written `%25` and `:` is written `%3A`.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, Read};
use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;

use crate::error::{Error, Result};
use crate::lz_set::{build_lz_set, LzSet};

pub const DEFAULT_K: usize = 1024;
pub const DEFAULT_SEED: u32 = 0;
pub const FORMAT_MAGIC: &str = "lzjd";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digest {
    name: String,
    input_length: u64,
    k: usize,
    seed: u32,
    values: Vec<u32>,
}

impl Digest {
    /// Assemble a digest from already-selected values.
    ///
    /// `values` must be strictly ascending and hold at most `k` entries.
    pub fn from_parts(
        name: impl Into<String>,
        input_length: u64,
        k: usize,
        seed: u32,
        values: Vec<u32>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Corrupt {
                line: None,
                reason: "digest size k must be at least 1".into(),
            });
        }
        if values.len() > k {
            return Err(Error::Corrupt {
                line: None,
                reason: format!("{} values exceed k={k}", values.len()),
            });
        }
        if let Some(i) = values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Corrupt {
                line: None,
                reason: format!("values not strictly ascending at index {}", i + 1),
            });
        }
        Ok(Digest {
            name: name.into(),
            input_length,
            k,
            seed,
            values,
        })
    }

    /// Reduce an LZ set to its `k` smallest hashes.
    pub fn from_lz_set(name: impl Into<String>, set: &LzSet, k: usize, seed: u32) -> Self {
        assert!(k >= 1, "k must be at least 1");
        Digest {
            name: name.into(),
            input_length: set.input_length(),
            k,
            seed,
            values: k_smallest(set.values(), k),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_length(&self) -> u64 {
        self.input_length
    }

    /// Configured digest size (upper bound on `values().len()`).
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn serialize(&self) -> Result<String> {
        let name = escape_name(&self.name)?;
        let mut payload = Vec::with_capacity(self.values.len() * 4);
        for v in &self.values {
            payload.extend_from_slice(&v.to_be_bytes());
        }
        Ok(format!(
            "{FORMAT_MAGIC}:{FORMAT_VERSION}:{}:{}:{}:{}:{}",
            self.k,
            self.seed,
            self.input_length,
            name,
            STANDARD.encode(payload)
        ))
    }

    pub fn deserialize(line: &str) -> Result<Self> {
        let line = line.trim_end_matches(['\n', '\r']);
        let fields: Vec<&str> = line.split(':').collect();
        let magic = fields[0];
        if magic != FORMAT_MAGIC {
            return Err(Error::UnsupportedFormat {
                line: None,
                magic: magic.to_string(),
            });
        }
        if fields.len() < 2 {
            return Err(parse_err("missing version field"));
        }
        if fields[1] != FORMAT_VERSION.to_string() {
            return Err(Error::UnsupportedVersion {
                line: None,
                version: fields[1].to_string(),
            });
        }
        if fields.len() != 7 {
            return Err(parse_err(format!("expected 7 fields, found {}", fields.len())));
        }
        let k: usize = parse_field(fields[2], "k")?;
        let seed: u32 = parse_field(fields[3], "seed")?;
        let input_length: u64 = parse_field(fields[4], "input length")?;
        let name = unescape_name(fields[5])?;
        let payload = STANDARD
            .decode(fields[6])
            .map_err(|e| parse_err(format!("bad base64 payload: {e}")))?;
        if payload.len() % 4 != 0 {
            return Err(parse_err(format!(
                "payload length {} is not a multiple of 4",
                payload.len()
            )));
        }
        let values = payload
            .chunks_exact(4)
            .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Digest::from_parts(name, input_length, k, seed, values)
    }
}

impl fmt::Display for Digest {
    /// Writes the serialized line; names with line breaks are written escaped
    /// as `%0A`/`%0D` so the output stays one line (such lines do not parse back).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.serialize() {
            Ok(line) => f.write_str(&line),
            Err(_) => {
                let renamed = self.clone().with_name(self.name.replace('\n', "%0A").replace('\r', "%0D"));
                f.write_str(&renamed.serialize().map_err(|_| fmt::Error)?)
            }
        }
    }
}

fn parse_err(reason: impl Into<String>) -> Error {
    Error::Parse {
        line: None,
        reason: reason.into(),
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(format!("invalid {what} field {s:?}")))
}

fn escape_name(name: &str) -> Result<String> {
    if name.contains(['\n', '\r']) {
        return Err(Error::InvalidName(name.to_string()));
    }
    Ok(name.replace('%', "%25").replace(':', "%3A"))
}

fn unescape_name(s: &str) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('%') {
        out.push_str(&rest[..pos]);
        let code = rest.get(pos + 1..pos + 3);
        match code {
            Some("25") => out.push('%'),
            Some(c) if c.eq_ignore_ascii_case("3A") => out.push(':'),
            _ => return Err(parse_err(format!("bad escape in name {s:?}"))),
        }
        rest = &rest[pos + 3..];
    }
    out.push_str(rest);
    Ok(out)
}

/// The `min(k, distinct)` smallest distinct values, ascending.
///
/// Expected O(n) selection followed by an O(k log k) sort of the survivors.
pub fn k_smallest(values: &[u32], k: usize) -> Vec<u32> {
    assert!(k >= 1, "k must be at least 1");
    let mut work = values.to_vec();
    if work.len() > k {
        work.select_nth_unstable(k - 1);
        work.truncate(k);
        work.sort_unstable();
        work.dedup();
        if work.len() < k {
            // Duplicates among the first k; fall back to a full pass.
            let mut all = values.to_vec();
            all.sort_unstable();
            all.dedup();
            all.truncate(k);
            return all;
        }
        work
    } else {
        work.sort_unstable();
        work.dedup();
        work
    }
}

/// Digest a byte stream in one pass.
pub fn digest_stream<R: Read>(input: R, name: &str, k: usize, seed: u32) -> Result<Digest> {
    let set = build_lz_set(input, seed).map_err(|e| Error::io(name, e))?;
    Ok(Digest::from_lz_set(name, &set, k, seed))
}

pub fn digest_bytes(data: &[u8], name: &str, k: usize, seed: u32) -> Digest {
    let set = crate::lz_set::lz_set_of(data, seed);
    Digest::from_lz_set(name, &set, k, seed)
}

/// Digest a file; the digest is named by the path as given.
pub fn digest_file(path: &Path, k: usize, seed: u32) -> Result<Digest> {
    let name = path.to_string_lossy();
    let file = File::open(path).map_err(|e| Error::io(name.as_ref(), e))?;
    digest_stream(file, &name, k, seed)
}

/// Read a digest DB: one digest per line, `#` comments and blank lines skipped.
pub fn read_digest_db<R: BufRead>(reader: R, source: &str) -> Result<Vec<Digest>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push(Digest::deserialize(trimmed).map_err(|e| e.at_line(i + 1))?);
    }
    Ok(out)
}

pub fn load_digest_db(path: &Path) -> Result<Vec<Digest>> {
    let name = path.to_string_lossy();
    let file = File::open(path).map_err(|e| Error::io(name.as_ref(), e))?;
    read_digest_db(io::BufReader::new(file), &name)
}
