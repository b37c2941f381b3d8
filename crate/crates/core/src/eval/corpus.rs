// SPDX-License-Identifier: Apache-2.0

//! Synthetic desk-scale corpus.
//!
//! Each file is a sequence of 2-32 KiB segments of three kinds: English-like
//! text, fixed-width binary records, and uniformly random bytes. A per-file
//! profile sets the mix. Text mixes a small set of function words common to
//! all files with a Zipf-weighted vocabulary private to the file.

use std::fs;
use std::io;
use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MANIFEST_NAME: &str = "manifest.csv";

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub n_files: usize,
    pub min_size: usize,
    pub max_size: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            n_files: 50,
            min_size: 64 * 1024,
            max_size: 2 * 1024 * 1024,
            seed: 0x1d5e_ed00,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusFile {
    pub name: String,
    pub data: Vec<u8>,
}

impl CorpusFile {
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.data)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub files: Vec<CorpusFile>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn total_bytes(&self) -> usize {
        self.files.iter().map(|f| f.data.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    pub name: String,
    pub size: usize,
    pub entropy: f64,
}

/// Shannon entropy in bits per byte.
pub fn shannon_entropy(data: &[u8]) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let mut counts = [0u64; 256];
    for &b in data {
        counts[b as usize] += 1;
    }
    let n = data.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

#[derive(Clone, Copy, Debug)]
enum Profile {
    Text,
    Binary,
    Packed,
    Mixed,
}

impl Profile {
    /// Weights for (text, records, random) segments.
    fn weights(self) -> [f64; 3] {
        match self {
            Profile::Text => [0.85, 0.10, 0.05],
            Profile::Binary => [0.10, 0.75, 0.15],
            Profile::Packed => [0.05, 0.15, 0.80],
            Profile::Mixed => [0.40, 0.30, 0.30],
        }
    }

    fn extension(self) -> &'static str {
        match self {
            Profile::Text => "txt",
            Profile::Binary => "bin",
            Profile::Packed => "pak",
            Profile::Mixed => "mix",
        }
    }
}

struct Vocabulary {
    words: Vec<Vec<u8>>,
}

impl Vocabulary {
    fn new(rng: &mut ChaCha8Rng, size: usize, lengths: std::ops::RangeInclusive<usize>) -> Self {
        const LETTERS: &[u8] = b"etaoinshrdlcumwfgypbvkjxqz";
        let words = (0..size)
            .map(|_| {
                let len = rng.gen_range(lengths.clone());
                // Skewed letter choice gives text-like byte statistics.
                (0..len)
                    .map(|_| {
                        let u: f64 = rng.gen();
                        LETTERS[((u * u) * LETTERS.len() as f64) as usize]
                    })
                    .collect()
            })
            .collect();
        Vocabulary { words }
    }

    /// Zipf-like pick: low indices are far more frequent.
    fn pick(&self, rng: &mut ChaCha8Rng) -> &[u8] {
        let u: f64 = rng.gen();
        &self.words[((u * u) * self.words.len() as f64) as usize]
    }
}

/// Function words shared by every file plus the file's own content words.
struct TextModel<'a> {
    common: &'a Vocabulary,
    own: Vocabulary,
}

impl TextModel<'_> {
    fn pick(&self, rng: &mut ChaCha8Rng) -> &[u8] {
        if rng.gen_bool(0.3) {
            self.common.pick(rng)
        } else {
            self.own.pick(rng)
        }
    }
}

fn text_segment(out: &mut Vec<u8>, len: usize, vocab: &TextModel<'_>, rng: &mut ChaCha8Rng) {
    let end = out.len() + len;
    let mut words_in_line = 0;
    while out.len() < end {
        let w = vocab.pick(rng);
        if words_in_line == 0 {
            let mut cap = w.to_vec();
            cap[0] = cap[0].to_ascii_uppercase();
            out.extend_from_slice(&cap);
        } else {
            out.extend_from_slice(w);
        }
        words_in_line += 1;
        match rng.gen_range(0..20) {
            0 => out.extend_from_slice(b". "),
            1 => out.extend_from_slice(b", "),
            _ => out.push(b' '),
        }
        if words_in_line >= rng.gen_range(6..16) {
            out.push(b'\n');
            words_in_line = 0;
        }
    }
    out.truncate(end);
}

fn record_segment(out: &mut Vec<u8>, len: usize, rng: &mut ChaCha8Rng) {
    let end = out.len() + len;
    let width = rng.gen_range(4..=16) * 4;
    let tag: u32 = rng.gen();
    let mut counter: u32 = rng.gen_range(0..1_000_000);
    let mut record = vec![0u8; width];
    while out.len() < end {
        record.fill(0);
        record[..4].copy_from_slice(&tag.to_le_bytes());
        record[4..8].copy_from_slice(&counter.to_le_bytes());
        for field in record[8..].chunks_mut(4) {
            if rng.gen_bool(0.4) {
                let v: u16 = rng.gen_range(0..512);
                field[..2].copy_from_slice(&v.to_le_bytes());
            }
        }
        out.extend_from_slice(&record);
        counter = counter.wrapping_add(1);
    }
    out.truncate(end);
}

fn random_segment(out: &mut Vec<u8>, len: usize, rng: &mut ChaCha8Rng) {
    let start = out.len();
    out.resize(start + len, 0);
    rng.fill_bytes(&mut out[start..]);
}

/// Log-uniform size in `[min, max]`.
fn file_size(rng: &mut ChaCha8Rng, min: usize, max: usize) -> usize {
    if max <= min {
        return min;
    }
    let (lo, hi) = ((min as f64).ln(), (max as f64).ln());
    (rng.gen_range(lo..=hi).exp() as usize).clamp(min, max)
}

pub fn generate_corpus(config: &CorpusConfig) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let common = Vocabulary::new(&mut rng, 100, 1..=4);
    let profiles = [Profile::Text, Profile::Binary, Profile::Packed, Profile::Mixed];
    let files = (0..config.n_files)
        .map(|i| {
            let profile = profiles[i % profiles.len()];
            let size = file_size(&mut rng, config.min_size, config.max_size);
            let mut file_rng = ChaCha8Rng::seed_from_u64(rng.gen());
            let vocab = TextModel {
                common: &common,
                own: Vocabulary::new(&mut file_rng, 2000, 3..=11),
            };
            let weights = profile.weights();
            let mut data = Vec::with_capacity(size);
            while data.len() < size {
                let seg = rng_segment_len(&mut file_rng).min(size - data.len());
                let u: f64 = file_rng.gen();
                if u < weights[0] {
                    text_segment(&mut data, seg, &vocab, &mut file_rng);
                } else if u < weights[0] + weights[1] {
                    record_segment(&mut data, seg, &mut file_rng);
                } else {
                    random_segment(&mut data, seg, &mut file_rng);
                }
            }
            CorpusFile {
                name: format!("file{i:03}.{}", profile.extension()),
                data,
            }
        })
        .collect();
    Corpus { files }
}

fn rng_segment_len(rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(2 * 1024..=32 * 1024)
}

/// Generate a corpus into `dir` and write `manifest.csv` (name, size, entropy).
pub fn make_corpus(dir: &Path, config: &CorpusConfig) -> io::Result<Vec<ManifestEntry>> {
    fs::create_dir_all(dir)?;
    let corpus = generate_corpus(config);
    let mut manifest = csv::Writer::from_path(dir.join(MANIFEST_NAME))?;
    manifest.write_record(["name", "size", "entropy"])?;
    let mut entries = Vec::with_capacity(corpus.len());
    for file in &corpus.files {
        fs::write(dir.join(&file.name), &file.data)?;
        let entry = ManifestEntry {
            name: file.name.clone(),
            size: file.data.len(),
            entropy: file.entropy(),
        };
        manifest.write_record([
            entry.name.clone(),
            entry.size.to_string(),
            format!("{:.4}", entry.entropy),
        ])?;
        entries.push(entry);
    }
    manifest.flush()?;
    Ok(entries)
}

/// Load every regular file in `dir` (not recursive), sorted by name.
/// The generator's manifest is skipped.
pub fn load_corpus(dir: &Path) -> io::Result<Corpus> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        if !entry.file_type()?.is_file() || entry.file_name() == MANIFEST_NAME {
            continue;
        }
        files.push(CorpusFile {
            name: entry.file_name().to_string_lossy().into_owned(),
            data: fs::read(entry.path())?,
        });
    }
    files.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Corpus { files })
}
